#include "blx/model_operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "blx/quadrature.hpp"
#include "blx/resolvent.hpp"
#include "blx/specfun.hpp"

namespace blx {

HHParams::HHParams(double a, double b, double ap, double bp, double n1_,
                   double n2_)
    : alpha(a), beta(b), alpha_p(ap), beta_p(bp), n1(n1_), n2(n2_) {
    if (!(alpha >= 0.0 && beta >= 0.0 && alpha_p >= 0.0 && beta_p >= 0.0))
        throw std::domain_error("HHParams: exponents must be >= 0");
    if (!(n1 > 1.0 && n2 > 1.0))
        throw std::domain_error("HHParams: measure powers must be > 1");
}

double RayGrid::total_mass() const {
    return std::accumulate(w.begin(), w.end(), 0.0);
}

RayGrid build_ray_grid(double n, double R, int nodes, GridScheme scheme) {
    if (!(n > 1.0)) throw std::domain_error("build_ray_grid: n must be > 1");
    if (!(R > 1.0)) throw std::invalid_argument("build_ray_grid: R must be > 1");
    if (nodes < 16)
        throw std::invalid_argument("build_ray_grid: need >= 16 nodes");
    RayGrid g;
    g.n = n;
    g.R = R;
    g.r.resize(nodes);
    if (scheme == GridScheme::log) {
        double step = std::log(R) / (nodes - 1);
        for (int i = 0; i < nodes; ++i) g.r[i] = std::exp(i * step);
        g.r.front() = 1.0;
        g.r.back() = R;
    } else {
        double h = (R - 1.0) / (nodes - 1);
        for (int i = 0; i < nodes; ++i) g.r[i] = 1.0 + i * h;
    }
    g.w.assign(nodes, 0.0);
    for (int i = 0; i + 1 < nodes; ++i) {
        double h = g.r[i + 1] - g.r[i];
        g.w[i] += 0.5 * h * std::pow(g.r[i], n - 1.0);
        g.w[i + 1] += 0.5 * h * std::pow(g.r[i + 1], n - 1.0);
    }
    return g;
}

double ray_lp_norm(const RayGrid& g, const std::vector<double>& f, double p) {
    if (!(p >= 1.0)) throw std::domain_error("ray_lp_norm: p < 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        s += g.w[i] * std::pow(std::abs(f[i]), p);
    return std::pow(s, 1.0 / p);
}

StepFunction ray_rearrangement(const RayGrid& g, const std::vector<double>& f) {
    return decreasing_rearrangement(f, g.w);
}

double ray_lorentz_norm(const RayGrid& g, const std::vector<double>& f,
                        LorentzExponents pq) {
    return lorentz_norm(ray_rearrangement(g, f), pq);
}

std::vector<RayFn> make_ray_family(double n, double p, int bumps, int tails,
                                   int indicators, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<RayFn> fam;
    for (int k = 0; k < bumps; ++k) {
        double lc = std::log(2.0) + unit(rng) * (std::log(200.0) - std::log(2.0));
        double w = 0.3 + 1.2 * unit(rng);
        fam.push_back([=](double r) {
            double t = (std::log(r) - lc) / w;
            if (std::abs(t) >= 1.0) return 0.0;
            return std::exp(1.0 - 1.0 / (1.0 - t * t));
        });
    }
    for (int k = 0; k < tails; ++k) {
        double gamma = n / p + 0.05 + 1.45 * unit(rng);
        fam.push_back([=](double r) { return std::pow(r, -gamma); });
    }
    for (int k = 0; k < indicators; ++k) {
        int m = 1 + (int)(unit(rng) * 3.0);
        std::vector<std::pair<double, double>> intervals;
        for (int t = 0; t < m; ++t) {
            double a = std::exp(std::log(1.5) +
                                unit(rng) * (std::log(300.0) - std::log(1.5)));
            double b = a * std::exp(0.1 + 0.9 * unit(rng));
            intervals.push_back({a, b});
        }
        fam.push_back([=](double r) {
            for (const auto& iv : intervals)
                if (r >= iv.first && r <= iv.second) return 1.0;
            return 0.0;
        });
    }
    return fam;
}

std::vector<double> hh_apply(const HHParams& params, HHBranch which,
                             const RayGrid& in, const std::vector<double>& f) {
    if (f.size() != in.size())
        throw std::invalid_argument("hh_apply: sample/grid size mismatch");
    if (in.n != params.n1)
        throw std::invalid_argument("hh_apply: grid measure power != n1");
    const std::size_t n = in.size();
    std::vector<double> out(n);
    if (which == HHBranch::R1) {
        double s = 0.0;
        for (std::size_t i = n; i-- > 0;) {
            s += in.w[i] * std::pow(in.r[i], -params.beta) * f[i];
            out[i] = std::pow(in.r[i], -params.alpha) * s;
        }
    } else {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += in.w[i] * std::pow(in.r[i], -params.beta_p) * f[i];
            out[i] = std::pow(in.r[i], -params.alpha_p) * s;
        }
    }
    return out;
}

HLPResult hlp_norm_integral(const std::function<double(double)>& kernel_at_1,
                            double p, double n1, double n2, double delta,
                            double rel_tol) {
    if (!(p > 1.0)) throw std::domain_error("hlp_norm_integral: p must be > 1");
    const double pp = p / (p - 1.0);
    if (std::abs(delta - (n2 / p + n1 / pp)) > 1e-9)
        throw std::invalid_argument(
            "hlp_norm_integral: delta != n2/p + n1/p'");
    const double expo = n2 / p - 1.0;
    auto f_log = [&](double u) {
        double x = std::exp(u);
        return kernel_at_1(x) * std::pow(x, expo) * x;
    };
    auto decade = [&](double a, double b) {
        return integrate_adaptive(f_log, std::log(a), std::log(b), rel_tol,
                                  1e-300)
            .value;
    };

    constexpr int kMaxDecades = 40;
    HLPResult res;
    res.value = decade(1.0, 10.0);
    double lo = 1.0, hi = 10.0;
    bool up_done = false, down_done = false;
    for (int k = 0; k < kMaxDecades && !(up_done && down_done); ++k) {
        double thresh = rel_tol * std::max(std::abs(res.value), 1e-12);
        if (!up_done) {
            double c = decade(hi, 10.0 * hi);
            hi *= 10.0;
            res.value += c;
            if (std::abs(c) < thresh) up_done = true;
        }
        if (!down_done) {
            double c = decade(0.1 * lo, lo);
            lo *= 0.1;
            res.value += c;
            if (std::abs(c) < thresh) down_done = true;
        }
    }
    res.diverged = !(up_done && down_done);
    return res;
}

std::vector<double> th_model_apply(double a, double b, double c,
                                   const RayGrid& in,
                                   const std::vector<double>& f) {
    if (!(a > 0.0 && b > 0.0 && c > 0.0))
        throw std::domain_error("th_model_apply: a, b, c must be > 0");
    if (f.size() != in.size())
        throw std::invalid_argument("th_model_apply: size mismatch");
    auto kernel = [&](double x, double y) {
        double s = (x + y - 2.0) / std::min(x, y);
        return std::pow(x, -a) * std::pow(y, -b) * std::exp(-c * s) /
               (x + y - 2.0);
    };
    const std::size_t n = in.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double k;
            if (i == 0 && j == 0) {
                // Corner cell: the kernel blows up only at x = y = 1;
                // average it over the quadrature cell by midpoint panels.
                double m = 0.5 * (in.r[0] + in.r[1]);
                double hcell = m - 1.0;
                constexpr int kSub = 8;
                double acc = 0.0;
                for (int u = 0; u < kSub; ++u)
                    for (int v = 0; v < kSub; ++v) {
                        double x = 1.0 + hcell * (u + 0.5) / kSub;
                        double y = 1.0 + hcell * (v + 0.5) / kSub;
                        acc += kernel(x, y);
                    }
                k = acc / (kSub * kSub);
            } else {
                k = kernel(in.r[i], in.r[j]);
            }
            s += k * in.w[j] * f[j];
        }
        out[i] = s;
    }
    return out;
}

double ij_integral(Dimensions dims, int j, double lambda, double q) {
    if (j != 1 && j != 2) throw std::invalid_argument("ij_integral: j in {1,2}");
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw std::domain_error("ij_integral: lambda in (0, 1]");
    if (!(q > 1.0)) throw std::domain_error("ij_integral: q must be > 1");
    const double d = (j == 1) ? dims.d1 : dims.d2;
    auto f = [&](double y) {
        ScaledProfileValues s = profile_scaled(d, lambda * y);
        return std::pow(s.ks, q) * std::exp(-q * lambda * y) *
               std::pow(y, d - 1.0);
    };
    const double t0 = std::max(1.0 / lambda, 4.0 / (q * lambda));
    double v = 0.0;
    if (t0 > 1.0) v += integrate_adaptive(f, 1.0, t0, 1e-10, 1e-300).value;
    v += integrate_exp_tail(f, t0, q * lambda, 1e-10, 1e-300).value;
    return std::pow(v, 1.0 / q);
}

namespace {

// Vector-valued Gauss-Kronrod panel for the lambda integral of tij_apply.
struct TijWorkspace {
    Dimensions dims;
    int i, j;
    const Grid* grid;
    const std::vector<double>* g;
    std::vector<std::size_t> out_nodes;  // nodes on side i
    std::vector<std::size_t> in_nodes;   // nodes on side j

    double di() const { return i == 1 ? dims.d1 : dims.d2; }
    double dj() const { return j == 1 ? dims.d1 : dims.d2; }

    double coefficient(double lambda) const {
        ResolventCoefficients co = coefficients(dims, lambda);
        if (i != j) return co.A;
        return i == 1 ? co.C : co.B;
    }

    // lambda^2 F(lambda) k_i(lambda |x|) [sum_y w k_j(lambda |y|) g(y)]
    // accumulated into acc with the given quadrature weight.
    void accumulate(double lambda, double wq, std::vector<double>& acc) const {
        double inner = 0.0;
        for (std::size_t idx : in_nodes) {
            double r = grid->node(idx).radius;
            ScaledProfileValues s = profile_scaled(dj(), lambda * r);
            inner += grid->weight(idx) * s.ks * std::exp(-lambda * r) *
                     (*g)[idx];
        }
        double common = wq * lambda * lambda * coefficient(lambda) * inner;
        if (common == 0.0) return;
        for (std::size_t t = 0; t < out_nodes.size(); ++t) {
            double r = grid->node(out_nodes[t]).radius;
            ScaledProfileValues s = profile_scaled(di(), lambda * r);
            acc[t] += common * s.ks * std::exp(-lambda * r);
        }
    }
};

// The standard 15-point Kronrod nodes (duplicated from the scalar backend,
// which keeps them internal).
const double kTijXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
const double kTijWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kTijWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Returns the Kronrod result in vk and the embedded Gauss result in vg.
void tij_panel(const TijWorkspace& ws, double a, double b,
               std::vector<double>& vk, std::vector<double>& vg) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::fill(vk.begin(), vk.end(), 0.0);
    std::fill(vg.begin(), vg.end(), 0.0);
    std::vector<double> node_acc(vk.size());
    for (int p = 0; p < 8; ++p) {
        std::fill(node_acc.begin(), node_acc.end(), 0.0);
        if (p == 7) {
            ws.accumulate(c, 1.0, node_acc);
        } else {
            ws.accumulate(c - h * kTijXgk[p], 1.0, node_acc);
            ws.accumulate(c + h * kTijXgk[p], 1.0, node_acc);
        }
        for (std::size_t t = 0; t < vk.size(); ++t) {
            vk[t] += kTijWgk[p] * node_acc[t];
            if (p % 2 == 1 || p == 7) vg[t] += kTijWg[p / 2] * node_acc[t];
        }
    }
    for (std::size_t t = 0; t < vk.size(); ++t) {
        vk[t] *= h;
        vg[t] *= h;
    }
}

// Adds the panel (bisecting while the Kronrod/Gauss gap is large) into out.
bool tij_refine(const TijWorkspace& ws, double a, double b, double tol,
                int depth, std::vector<double>& out) {
    std::vector<double> vk(out.size()), vg(out.size());
    tij_panel(ws, a, b, vk, vg);
    double err = 0.0, mag = 0.0;
    for (std::size_t t = 0; t < vk.size(); ++t) {
        err += std::abs(vk[t] - vg[t]);
        mag += std::abs(vk[t]);
    }
    if (err <= tol * std::max(mag, 1e-300) || depth >= 6) {
        for (std::size_t t = 0; t < vk.size(); ++t) out[t] += vk[t];
        return err <= tol * std::max(mag, 1e-300);
    }
    double m = 0.5 * (a + b);
    bool okl = tij_refine(ws, a, m, tol, depth + 1, out);
    bool okr = tij_refine(ws, m, b, tol, depth + 1, out);
    return okl && okr;
}

}  // namespace

TijResult tij_apply(Dimensions dims, int i, int j, const GridFunction& g,
                    double tol) {
    if ((i != 1 && i != 2) || (j != 1 && j != 2))
        throw std::invalid_argument("tij_apply: i, j in {1,2}");
    if (g.grid == nullptr) throw std::invalid_argument("tij_apply: no grid");
    const Grid& grid = *g.grid;

    TijWorkspace ws{dims, i, j, &grid, &g.values, {}, {}};
    Side side_i = (i == 1) ? Side::negative : Side::positive;
    Side side_j = (j == 1) ? Side::negative : Side::positive;
    for (std::size_t t = 0; t < grid.size(); ++t) {
        if (grid.node(t).side == side_i) ws.out_nodes.push_back(t);
        if (grid.node(t).side == side_j) ws.in_nodes.push_back(t);
    }

    std::vector<double> acc(ws.out_nodes.size(), 0.0);
    // Dyadic panels [2^{-k-1}, 2^{-k}]; below the last cutoff the integrand
    // is a positive power of lambda and the remainder is negligible.
    const int k_max = std::max(30, (int)std::ceil(std::log2(grid.truncation())) + 20);
    bool ok = true;
    double hi = 1.0;
    for (int k = 0; k <= k_max; ++k) {
        ok = tij_refine(ws, 0.5 * hi, hi, tol, 0, acc) && ok;
        hi *= 0.5;
    }

    TijResult res;
    res.out = GridFunction(grid);
    for (std::size_t t = 0; t < ws.out_nodes.size(); ++t) {
        std::size_t idx = ws.out_nodes[t];
        res.out.values[idx] = grid.node(idx).radius * acc[t];
    }
    res.converged = ok;
    return res;
}

namespace {

double default_beta(const Dimensions& dims) {
    return dims.d1 < 2.0 ? 1.0 : dims.d1 - 1.0;
}

}  // namespace

CounterexampleSpec::CounterexampleSpec(Dimensions dims_, double R_)
    : CounterexampleSpec(dims_, R_, default_beta(dims_)) {}

CounterexampleSpec::CounterexampleSpec(Dimensions dims_, double R_,
                                       double beta_)
    : dims(dims_), R(R_), beta(beta_), p0(dims_.p0()) {
    if (!(R > 1.0))
        throw std::invalid_argument("CounterexampleSpec: R must be > 1");
    if (!(beta < dims.d1))
        throw std::domain_error("CounterexampleSpec: beta must be < d1");
}

GridFunction counterexample(const CounterexampleSpec& spec, const Grid& grid) {
    GridFunction f(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const BrokenPoint& p = grid.node(i);
        if (p.side != Side::negative || p.radius > spec.R) continue;
        f.values[i] = std::pow(p.radius, spec.beta - spec.dims.d1) /
                      (1.0 + std::log(p.radius));
    }
    return f;
}

}  // namespace blx
