#ifndef BLX_MODEL_OPERATORS_HPP
#define BLX_MODEL_OPERATORS_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "blx/grid.hpp"

// Model integral operators on the half line [1, R]: the Hardy-Hilbert pair
// R1/R2 with separable power kernels, the homogeneous-kernel norm integral,
// the exponential model kernel for the high-energy part, the low-energy
// building blocks of the reverse transform, and the unboundedness witness.

namespace blx {

// Kernel exponents of K(x,y) = x^{-alpha} y^{-beta} on {x <= y} and
// x^{-alpha_p} y^{-beta_p} on {x > y}, acting between r^{n1-1}dr and
// r^{n2-1}dr.
struct HHParams {
    double alpha, beta;      // x <= y branch
    double alpha_p, beta_p;  // x > y branch
    double n1, n2;           // source / target measure powers
    HHParams(double a, double b, double ap, double bp, double n1_, double n2_);
};

enum class HHBranch { R1, R2 };

// One-sided log (or uniform) grid on [1, R] with trapezoid weights for the
// measure r^{n-1} dr.
struct RayGrid {
    double n = 2.0;  // measure power
    double R = 1.0;
    std::vector<double> r;
    std::vector<double> w;
    std::size_t size() const { return r.size(); }
    double total_mass() const;
};

RayGrid build_ray_grid(double n, double R, int nodes,
                       GridScheme scheme = GridScheme::log);

double ray_lp_norm(const RayGrid& g, const std::vector<double>& f, double p);
StepFunction ray_rearrangement(const RayGrid& g, const std::vector<double>& f);
double ray_lorentz_norm(const RayGrid& g, const std::vector<double>& f,
                        LorentzExponents pq);

// Seeded random test family on [1, infinity): log-placed smooth bumps,
// power tails with exponents below -n/p (admissible in L^p(r^{n-1}dr)),
// and indicator unions.
using RayFn = std::function<double(double)>;
std::vector<RayFn> make_ray_family(double n, double p, int bumps, int tails,
                                   int indicators, std::uint64_t seed);

// R1 f(x) = x^{-alpha}  int_x^R y^{-beta}   f(y) dmu1(y)  (suffix sums)
// R2 f(x) = x^{-alpha'} int_1^x y^{-beta'}  f(y) dmu1(y)  (prefix sums)
// f is sampled on `in` (whose measure power must be n1); the result is
// sampled at the same radii. O(N) per application.
std::vector<double> hh_apply(const HHParams& params, HHBranch which,
                             const RayGrid& in, const std::vector<double>& f);

struct HLPResult {
    double value = 0.0;
    bool diverged = false;
};

// int_0^infty K(x,1) x^{n2/p - 1} dx for a kernel of homogeneous degree
// -delta with delta = n2/p + n1/p'. Decade-by-decade quadrature outward
// from [1, 10]; the divergence flag is raised when the decade contributions
// fail to decay before the cutoff on either end.
HLPResult hlp_norm_integral(const std::function<double(double)>& kernel_at_1,
                            double p, double n1, double n2, double delta,
                            double rel_tol = 1e-9);

// Dense application of x^{-a} y^{-b} e^{-c(x+y-2)/(x^y)} / (x+y-2); the
// corner cell x = y = 1 uses the panel average over its quadrature cell.
std::vector<double> th_model_apply(double a, double b, double c,
                                   const RayGrid& in,
                                   const std::vector<double>& f);

// [int_1^infty k_j(lambda y)^q y^{d_j-1} dy]^{1/q} for lambda in (0, 1].
double ij_integral(Dimensions dims, int j, double lambda, double q);

struct TijResult {
    GridFunction out;
    bool converged = true;
};

// T_ij g(x) = |x| int_0^1 lambda^2 F(lambda) k_i(lambda|x|) X_i(x)
//                          [int k_j(lambda|y|) X_j(y) g dmu] dlambda,
// with F the junction coefficient tied to (i, j): the cross-side one for
// (1,2)/(2,1) and the same-side ones for (1,1)/(2,2). Side 1 is the
// negative ray, side 2 the positive ray. The lambda integral runs over
// dyadic panels with a vector Gauss-Kronrod rule; non-convergence is
// flagged, not thrown.
TijResult tij_apply(Dimensions dims, int i, int j, const GridFunction& g,
                    double tol = 1e-8);

// Truncated unboundedness witness f(y) = y^{beta-d1}(1+log y)^{-1}.
struct CounterexampleSpec {
    Dimensions dims;
    double R;
    double beta;  // 1 below dimension 2, d1 - 1 above; must stay < d1
    double p0;
    CounterexampleSpec(Dimensions dims_, double R_);
    CounterexampleSpec(Dimensions dims_, double R_, double beta_);
};

// Samples of the witness on the d1 (negative) side of the grid; zero on the
// other side.
GridFunction counterexample(const CounterexampleSpec& spec, const Grid& grid);

}  // namespace blx

#endif
