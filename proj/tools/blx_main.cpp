// Command-line front end for the broken-line laboratory: batch experiment
// runs plus small inspection subcommands for the special functions, the
// resolvent kernel, the singular kernel, the exponent fits, the model
// operators, and the unboundedness witness.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blx/model_operators.hpp"
#include "blx/probes.hpp"
#include "blx/resolvent.hpp"
#include "blx/riesz_kernel.hpp"
#include "blx/runner.hpp"
#include "blx/specfun.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    int threads = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

blx::Config effective_config(const CommonOpts& opts) {
    blx::Config cfg = blx::load_config(opts.config_path);
    if (!opts.out_dir.empty()) cfg.set("run.out", opts.out_dir);
    if (opts.threads > 0) cfg.set("run.threads", std::to_string(opts.threads));
    if (opts.seed_set) cfg.set("run.seed", std::to_string(opts.seed));
    return cfg;
}

void add_common(CLI::App* app, CommonOpts& opts) {
    app->add_option("--config", opts.config_path, "configuration file (INI)")
        ->check(CLI::ExistingFile);
    app->add_option("--out", opts.out_dir, "output directory");
    app->add_option("--threads", opts.threads, "worker thread cap");
    app->add_option("--seed", opts.seed, "random family seed")
        ->each([&](const std::string&) { opts.seed_set = true; });
}

blx::BrokenPoint parse_point(double coord) {
    return blx::BrokenPoint::from_coordinate(coord);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for transforms on the broken line"};
    app.require_subcommand(1);
    CommonOpts opts;

    // ------------------------------------------------------------- run
    auto* run = app.add_subcommand("run", "run experiments into CSV files");
    add_common(run, opts);
    std::string only;
    run->add_option("--experiments", only,
                    "comma list of experiment ids (default: all)");

    // -------------------------------------------------- list-experiments
    auto* list = app.add_subcommand("list-experiments",
                                    "print experiment ids and claims");

    // --------------------------------------------------------- specfun
    auto* sf = app.add_subcommand("specfun", "print profile values l,k,l',k'");
    double sf_d = 3.0, sf_r = 1.0;
    sf->add_option("--d", sf_d, "dimension")->required();
    sf->add_option("--r", sf_r, "radius")->required();

    // -------------------------------------------------------- resolvent
    auto* rv = app.add_subcommand("resolvent",
                                  "evaluate the resolvent kernel at a point");
    double rv_d1 = 1.5, rv_d2 = 3.0, rv_lambda = 1.0, rv_x = 2.0, rv_y = 3.0;
    rv->add_option("--d1", rv_d1, "negative-side dimension");
    rv->add_option("--d2", rv_d2, "positive-side dimension");
    rv->add_option("--lambda", rv_lambda, "spectral parameter")->required();
    rv->add_option("--x", rv_x, "signed coordinate x")->required();
    rv->add_option("--y", rv_y, "signed coordinate y")->required();

    // ------------------------------------------------------ riesz-kernel
    auto* rk = app.add_subcommand("riesz-kernel",
                                  "evaluate the transform kernel at a point");
    double rk_d1 = 1.5, rk_d2 = 3.0, rk_x = 2.0, rk_y = 3.0;
    std::string rk_part = "full";
    rk->add_option("--d1", rk_d1, "negative-side dimension");
    rk->add_option("--d2", rk_d2, "positive-side dimension");
    rk->add_option("--x", rk_x, "signed coordinate x")->required();
    rk->add_option("--y", rk_y, "signed coordinate y")->required();
    rk->add_option("--part", rk_part, "part: tl, th, kl, full")
        ->check(CLI::IsMember({"tl", "th", "kl", "full"}));

    // ------------------------------------------------------ fit-appendix
    auto* fa = app.add_subcommand(
        "fit-appendix", "fit low-energy decay exponents against the table");
    double fa_d1 = 1.5, fa_d2 = 3.0;
    fa->add_option("--d1", fa_d1, "negative-side dimension");
    fa->add_option("--d2", fa_d2, "positive-side dimension");

    // ---------------------------------------------------------- hh-probe
    auto* hh = app.add_subcommand("hh-probe",
                                  "power-kernel ratio at one (p, R)");
    double hh_p = 2.0, hh_R = 1e3;
    int hh_nodes = 2000;
    hh->add_option("--p", hh_p, "Lebesgue exponent")->required();
    hh->add_option("--R", hh_R, "truncation radius");
    hh->add_option("--nodes", hh_nodes, "grid nodes");
    add_common(hh, opts);

    // --------------------------------------------------------- tij-probe
    auto* tp = app.add_subcommand(
        "tij-probe", "low-energy block applied to a fixed bump, with fit");
    double tp_d1 = 1.5, tp_d2 = 1.8, tp_R = 2e3;
    int tp_i = 1, tp_j = 2, tp_nodes = 300;
    tp->add_option("--d1", tp_d1, "negative-side dimension");
    tp->add_option("--d2", tp_d2, "positive-side dimension");
    tp->add_option("--i", tp_i, "output side (1 = negative, 2 = positive)");
    tp->add_option("--j", tp_j, "input side (1 = negative, 2 = positive)");
    tp->add_option("--R", tp_R, "truncation radius");
    tp->add_option("--nodes", tp_nodes, "nodes per side");

    // ---------------------------------------------------- counterexample
    auto* ce = app.add_subcommand(
        "counterexample", "transform ratio on the unboundedness witness");
    double ce_d1 = 1.5, ce_d2 = 3.0;
    std::vector<double> ce_R = {100, 1000, 10000};
    int ce_nodes = 400;
    ce->add_option("--d1", ce_d1, "negative-side dimension");
    ce->add_option("--d2", ce_d2, "positive-side dimension");
    ce->add_option("--R", ce_R, "truncation radii");
    ce->add_option("--nodes", ce_nodes, "nodes per side");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            blx::Config cfg = effective_config(opts);
            if (!only.empty()) cfg.set("run.experiments", only);
            blx::RunSummary s = blx::run_experiments(cfg, std::cout);
            for (const std::string& f : s.files)
                std::cout << "wrote " << f << "\n";
            return s.errors == 0 ? 0 : 1;
        }
        if (list->parsed()) {
            for (const blx::ExperimentInfo& e : blx::experiment_list())
                std::cout << e.id << ": " << e.claim << "\n";
            return 0;
        }
        if (sf->parsed()) {
            blx::ProfileValues v = blx::profile(sf_d, sf_r);
            std::printf("l=%.15g k=%.15g dl=%.15g dk=%.15g wronskian=%.15g\n",
                        v.l, v.k, v.dl, v.dk,
                        blx::profile_wronskian(sf_d, sf_r));
            return 0;
        }
        if (rv->parsed()) {
            blx::Dimensions dims(rv_d1, rv_d2);
            blx::KernelEval ev = blx::resolvent_kernel_eval(
                dims, rv_lambda, parse_point(rv_x), parse_point(rv_y));
            std::printf("K=%.15g dK_dx=%.15g\n", ev.value, ev.dx);
            return 0;
        }
        if (rk->parsed()) {
            blx::Dimensions dims(rk_d1, rk_d2);
            blx::RieszPart part = blx::RieszPart::FULL;
            if (rk_part == "tl") part = blx::RieszPart::TL;
            if (rk_part == "th") part = blx::RieszPart::TH;
            if (rk_part == "kl") part = blx::RieszPart::KL;
            double v = blx::riesz_kernel(dims, parse_point(rk_x),
                                         parse_point(rk_y), part);
            std::printf("%s=%.15g\n", rk_part.c_str(), v);
            return 0;
        }
        if (fa->parsed()) {
            blx::Dimensions dims(fa_d1, fa_d2);
            for (blx::Quadrant q :
                 {blx::Quadrant::Q1, blx::Quadrant::Q2, blx::Quadrant::Q3,
                  blx::Quadrant::Q4})
                for (blx::Regime reg :
                     {blx::Regime::x_small, blx::Regime::x_large}) {
                    blx::AppendixCheck chk = blx::appendix_check(dims, q, reg);
                    std::printf(
                        "quadrant=%d regime=%s slope_x=%.4f (pred %.4f) "
                        "slope_y=%.4f (pred %.4f)\n",
                        (int)q, reg == blx::Regime::x_small ? "x<=y" : "x>=y",
                        chk.fit_x.slope, chk.predicted.ex, chk.fit_y.slope,
                        chk.predicted.ey);
                }
            return 0;
        }
        if (hh->parsed()) {
            blx::Config cfg = effective_config(opts);
            cfg.set("hh.r_list", std::to_string(hh_R));
            cfg.set("hh.nodes", std::to_string(hh_nodes));
            std::vector<blx::ResultRow> rows =
                blx::run_one_experiment("hh-strong", cfg);
            blx::write_rows_csv(std::cout, rows, cfg.hash(), "hh-strong");
            return 0;
        }
        if (tp->parsed()) {
            blx::Dimensions dims(tp_d1, tp_d2);
            blx::Grid grid = blx::build_grid(dims, tp_R, tp_nodes);
            blx::Side side_j =
                tp_j == 1 ? blx::Side::negative : blx::Side::positive;
            blx::GridFunction g(grid, [&](const blx::BrokenPoint& x) {
                if (x.side != side_j) return 0.0;
                double t = (std::log(x.radius) - std::log(4.0)) / 0.8;
                return std::abs(t) < 1.0
                           ? std::exp(1.0 - 1.0 / (1.0 - t * t))
                           : 0.0;
            });
            blx::TijResult res = blx::tij_apply(dims, tp_i, tp_j, g);
            blx::Side side_i =
                tp_i == 1 ? blx::Side::negative : blx::Side::positive;
            std::vector<std::pair<double, double>> samples;
            for (std::size_t t = 0; t < grid.size(); ++t)
                if (grid.node(t).side == side_i &&
                    std::abs(res.out.values[t]) > 0.0)
                    samples.emplace_back(grid.node(t).radius,
                                         std::abs(res.out.values[t]));
            blx::ExponentFit fit =
                blx::fit_exponent(samples, {10.0, tp_R / 2.0});
            std::printf("converged=%d slope=%.4f r2=%.4f\n",
                        res.converged ? 1 : 0, fit.slope, fit.r2);
            return 0;
        }
        if (ce->parsed()) {
            blx::Dimensions dims(ce_d1, ce_d2);
            blx::SweepConfig sweep;
            sweep.R = ce_R;
            sweep.nodes_per_side = ce_nodes;
            blx::ProbeReport rep =
                blx::riesz_counterexample_probe(dims, dims.p0(), sweep);
            for (std::size_t k = 0; k < rep.R.size(); ++k)
                std::printf("R=%g ratio=%.6g\n", rep.R[k], rep.ratio[k]);
            std::printf("p=%g verdict=%s slope=%.4f r2=%.4f\n", rep.p,
                        blx::verdict_name(rep.verdict), rep.fit_slope,
                        rep.fit_r2);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
