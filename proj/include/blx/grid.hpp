#ifndef BLX_GRID_HPP
#define BLX_GRID_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

// The broken line (-inf,-1] u [1,inf) with measure |r|^{d_i - 1} dr,
// truncated computational grids with quadrature weights, and the L^p and
// Lorentz L^{p,q} norms used by every probe.

namespace blx {

enum class Side { negative, positive };

struct Dimensions {
    double d1;  // negative side
    double d2;  // positive side
    Dimensions(double d1_, double d2_) : d1(d1_), d2(d2_) {
        if (!(1.0 < d1) || !(d1 <= d2))
            throw std::domain_error("Dimensions: need 1 < d1 <= d2");
    }
    double d_star() const { return d1 < d2 ? d1 : d2; }
    // Critical exponent p0 = d_* v d_*'.
    double p0() const {
        double ds = d_star();
        double conj = ds / (ds - 1.0);
        return ds > conj ? ds : conj;
    }
    double dim(Side s) const { return s == Side::negative ? d1 : d2; }
};

struct BrokenPoint {
    Side side;
    double radius;  // >= 1; coordinate is -radius or +radius
    BrokenPoint(Side s, double r) : side(s), radius(r) {
        if (!(r >= 1.0)) throw std::domain_error("BrokenPoint: radius < 1");
    }
    double coordinate() const {
        return side == Side::negative ? -radius : radius;
    }
    static BrokenPoint from_coordinate(double x) {
        return x < 0 ? BrokenPoint(Side::negative, -x)
                     : BrokenPoint(Side::positive, x);
    }
};

enum class GridScheme { log, uniform };

// Nodes ordered by coordinate: -R, ..., -1, +1, ..., +R. Both radius-1
// nodes are present; quadrature weights are trapezoid against |r|^{d_i-1}.
class Grid {
  public:
    Grid(Dimensions dims, double R, int nodes_per_side, GridScheme scheme);

    const Dimensions& dims() const { return dims_; }
    double truncation() const { return R_; }
    GridScheme scheme() const { return scheme_; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t nodes_per_side() const { return nps_; }
    const BrokenPoint& node(std::size_t i) const { return nodes_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }
    double total_mass() const { return total_mass_; }
    // Index of the radius-1 node on each side.
    std::size_t junction_index(Side s) const {
        return s == Side::negative ? nps_ - 1 : nps_;
    }

  private:
    Dimensions dims_;
    double R_;
    std::size_t nps_;
    GridScheme scheme_;
    std::vector<BrokenPoint> nodes_;
    std::vector<double> weights_;
    double total_mass_ = 0.0;
};

Grid build_grid(Dimensions dims, double R, int nodes_per_side,
                GridScheme scheme = GridScheme::log);

struct GridFunction {
    const Grid* grid = nullptr;
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(const Grid& g)
        : grid(&g), values(g.size(), 0.0) {}
    GridFunction(const Grid& g, const std::function<double(const BrokenPoint&)>& f);
    std::size_t size() const { return values.size(); }
};

struct LorentzExponents {
    double p;
    double q;
    LorentzExponents(double p_, double q_) : p(p_), q(q_) {
        if (!(p > 0.0) || !(q > 0.0))
            throw std::domain_error("LorentzExponents: p, q must be > 0");
    }
};

// Right-continuous nonincreasing step function on [0, total mass):
// value v[j] on [t[j-1], t[j]) with t[-1] = 0.
struct StepFunction {
    std::vector<double> t;  // breakpoints, increasing
    std::vector<double> v;  // values, nonincreasing
};

// Weighted p-norm via quadrature; p = inf gives max |value|. Rejects p < 1.
double lp_norm(const GridFunction& f, double p);

// mu({ |f| > s }), s > 0.
double distribution_function(const GridFunction& f, double s);

// Exact rearrangement of the (value, weight) pairs.
StepFunction decreasing_rearrangement(const GridFunction& f);
StepFunction decreasing_rearrangement(const std::vector<double>& values,
                                      const std::vector<double>& weights);

// Exact piecewise-power integral of the step rearrangement.
double lorentz_norm(const GridFunction& f, LorentzExponents pq);
double lorentz_norm(const StepFunction& star, LorentzExponents pq);

// CSV rows: side,radius,weight,value (with header).
void write_csv(std::ostream& os, const GridFunction& f);

}  // namespace blx

#endif
