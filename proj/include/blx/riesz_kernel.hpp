#ifndef BLX_RIESZ_KERNEL_HPP
#define BLX_RIESZ_KERNEL_HPP

#include <utility>
#include <vector>

#include "blx/resolvent.hpp"

// Riesz-transform kernel (2/pi) int_0^inf d_x K_{(Delta+lambda^2)^{-1}} dlambda
// with the low/high-energy split of the kk part at 1/(|x| ^ |y|) and the kl
// part integrated whole. The 2/pi constant is retained so the scalar identity
// (2/pi) int (a + lambda^2)^{-1} dlambda = a^{-1/2} holds quantitatively.

namespace blx {

enum class RieszPart { TL, TH, KL, FULL };

// Distance in the broken-line metric (the two rays glued at +-1).
double broken_distance(const BrokenPoint& x, const BrokenPoint& y);

// Signed kernel value. tol is the relative quadrature target. Throws
// std::invalid_argument when the broken distance is below
// delta_min_factor * |y| (non-integrable high-energy tail on the diagonal).
double riesz_kernel(Dimensions dims, const BrokenPoint& x,
                    const BrokenPoint& y, RieszPart part, double tol = 1e-9,
                    double delta_min_factor = 1e-3);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::pair<double, double> window{0.0, 0.0};
};

// Least-squares line through (log coordinate, log magnitude) restricted to
// coordinates in [window.first, window.second]. Requires >= 8 usable samples
// with positive magnitudes.
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& samples,
                         std::pair<double, double> window);

enum class Regime { x_small, x_large };  // |x| <= |y| vs |x| >= |y|

struct AppendixPrediction {
    double ex;        // exponent of |x|
    double ey;        // exponent of |y|
    bool two_sided;   // entries driven by A > 0 carry matching lower bounds
};

// Table-predicted low-energy decay exponents for the given dimension case.
// eps enters only the d2 = 2 entries with a logarithmic factor.
AppendixPrediction appendix_prediction(Dimensions dims, Quadrant q,
                                       Regime regime, double eps = 0.05);

struct AppendixCheck {
    ExponentFit fit_x;  // slope in |x| at fixed |y|
    ExponentFit fit_y;  // slope in |y| at fixed |x|
    AppendixPrediction predicted;
};

// Samples T_L along rays in the given quadrant/regime and fits both
// exponents.
AppendixCheck appendix_check(Dimensions dims, Quadrant q, Regime regime,
                             double eps = 0.05, double tol = 1e-7);

}  // namespace blx

#endif
