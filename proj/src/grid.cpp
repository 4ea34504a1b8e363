#include "blx/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace blx {

namespace {

std::vector<double> side_radii(double R, int n, GridScheme scheme) {
    std::vector<double> r(n);
    if (scheme == GridScheme::log) {
        double step = std::log(R) / (n - 1);
        for (int i = 0; i < n; ++i) r[i] = std::exp(i * step);
        r.front() = 1.0;
        r.back() = R;
    } else {
        double h = (R - 1.0) / (n - 1);
        for (int i = 0; i < n; ++i) r[i] = 1.0 + i * h;
    }
    return r;
}

}  // namespace

Grid::Grid(Dimensions dims, double R, int nodes_per_side, GridScheme scheme)
    : dims_(dims), R_(R), nps_(nodes_per_side), scheme_(scheme) {
    if (!(R > 1.0)) throw std::invalid_argument("Grid: R must be > 1");
    if (nodes_per_side < 16)
        throw std::invalid_argument("Grid: need >= 16 nodes per side");

    std::vector<double> radii = side_radii(R, nodes_per_side, scheme);
    nodes_.reserve(2 * nps_);
    weights_.assign(2 * nps_, 0.0);

    // Negative side, descending radius (ascending coordinate), then positive.
    for (int i = nodes_per_side - 1; i >= 0; --i)
        nodes_.emplace_back(Side::negative, radii[i]);
    for (int i = 0; i < nodes_per_side; ++i)
        nodes_.emplace_back(Side::positive, radii[i]);

    // Trapezoid weights against the density |r|^{d-1}.
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        if (nodes_[i].side != nodes_[i + 1].side) continue;  // junction gap
        double d = dims_.dim(nodes_[i].side);
        double ra = nodes_[i].radius, rb = nodes_[i + 1].radius;
        double h = std::abs(rb - ra);
        weights_[i] += 0.5 * h * std::pow(ra, d - 1.0);
        weights_[i + 1] += 0.5 * h * std::pow(rb, d - 1.0);
    }
    total_mass_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

Grid build_grid(Dimensions dims, double R, int nodes_per_side,
                GridScheme scheme) {
    return Grid(dims, R, nodes_per_side, scheme);
}

GridFunction::GridFunction(const Grid& g,
                           const std::function<double(const BrokenPoint&)>& f)
    : grid(&g), values(g.size()) {
    for (std::size_t i = 0; i < g.size(); ++i) values[i] = f(g.node(i));
}

double lp_norm(const GridFunction& f, double p) {
    if (!(p >= 1.0)) throw std::domain_error("lp_norm: p < 1");
    const Grid& g = *f.grid;
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        s += g.weight(i) * std::pow(std::abs(f.values[i]), p);
    return std::pow(s, 1.0 / p);
}

double distribution_function(const GridFunction& f, double s) {
    if (!(s > 0.0)) throw std::domain_error("distribution_function: s <= 0");
    const Grid& g = *f.grid;
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(f.values[i]) > s) m += g.weight(i);
    return m;
}

StepFunction decreasing_rearrangement(const std::vector<double>& values,
                                      const std::vector<double>& weights) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // Ties broken by sample order so the result is deterministic.
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(values[a]) > std::abs(values[b]);
    });
    StepFunction out;
    double mass = 0.0;
    for (std::size_t i : idx) {
        double v = std::abs(values[i]);
        if (v == 0.0) break;
        double w = weights[i];
        if (w == 0.0) continue;
        if (!out.v.empty() && out.v.back() == v) {
            mass += w;
            out.t.back() = mass;
        } else {
            mass += w;
            out.v.push_back(v);
            out.t.push_back(mass);
        }
    }
    return out;
}

StepFunction decreasing_rearrangement(const GridFunction& f) {
    return decreasing_rearrangement(f.values, f.grid->weights());
}

double lorentz_norm(const StepFunction& star, LorentzExponents pq) {
    const double p = pq.p, q = pq.q;
    if (star.v.empty()) return 0.0;
    if (std::isinf(p)) {
        // t^{1/p} = 1; finite only for q = inf (sup) or f* = 0.
        if (std::isinf(q)) return star.v.front();
        return std::numeric_limits<double>::infinity();
    }
    if (std::isinf(q)) {
        double m = 0.0;
        for (std::size_t j = 0; j < star.v.size(); ++j)
            m = std::max(m, star.v[j] * std::pow(star.t[j], 1.0 / p));
        return m;
    }
    // sum_j v_j^q * (p/q) * (t_j^{q/p} - t_{j-1}^{q/p})
    double s = 0.0, prev = 0.0;
    for (std::size_t j = 0; j < star.v.size(); ++j) {
        double tj = std::pow(star.t[j], q / p);
        s += std::pow(star.v[j], q) * (p / q) * (tj - prev);
        prev = tj;
    }
    return std::pow(s, 1.0 / q);
}

double lorentz_norm(const GridFunction& f, LorentzExponents pq) {
    return lorentz_norm(decreasing_rearrangement(f), pq);
}

void write_csv(std::ostream& os, const GridFunction& f) {
    const Grid& g = *f.grid;
    os << "side,radius,weight,value\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        os << (g.node(i).side == Side::negative ? "negative" : "positive")
           << ',' << g.node(i).radius << ',' << g.weight(i) << ','
           << f.values[i] << '\n';
    }
}

}  // namespace blx
