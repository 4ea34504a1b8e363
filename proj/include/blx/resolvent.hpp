#ifndef BLX_RESOLVENT_HPP
#define BLX_RESOLVENT_HPP

#include "blx/grid.hpp"
#include "blx/specfun.hpp"

// Exact resolvent kernel of (Delta + lambda^2)^{-1} on the broken line, in
// all four quadrants, with its kk/kl decomposition. The junction constants
// v1 = v2 = 1 match the Bessel normalization of the profiles: the Wronskian
// l'k - k'l = r^{1-d} then gives the Green's-function jump -|y|^{1-d_i}.

namespace blx {

enum class Quadrant { Q1, Q2, Q3, Q4 };

// Q1: x,y >= 1. Q2: x <= -1, y >= 1. Q3: x,y <= -1. Q4: x >= 1, y <= -1.
Quadrant quadrant(const BrokenPoint& x, const BrokenPoint& y);

enum class ResolventPart { full, kk, kl };

struct ResolventCoefficients {
    double lambda;
    double A;  // always > 0
    double B;
    double C;
    double v1 = 1.0;
    double v2 = 1.0;
};

// Coefficients with the e^{2 lambda} growth factored out:
// A = As * e^{2 lambda} etc. Valid for every lambda > 0.
struct ScaledCoefficients {
    double lambda;
    double As;
    double Bs;
    double Cs;
};

// Power laws of the junction coefficients: A ~ lambda^{ea} two-sided, |B|,
// |C| bounded by the corresponding powers (envelopes). The large-lambda
// entries carry an extra e^{2 lambda}. Rejects d1 = 2 (not tabulated).
struct CoefficientPrediction {
    double ea_small, eb_small, ec_small;
    double ea_large, eb_large, ec_large;
};
CoefficientPrediction coefficient_prediction(Dimensions dims);

ScaledCoefficients scaled_coefficients(Dimensions dims, double lambda);

// Unscaled coefficients; guards at lambda > 300.
ResolventCoefficients coefficients(Dimensions dims, double lambda);

// Kernel value at (x, y). Values whose log-magnitude falls below the double
// range are returned as exact zero.
double resolvent_kernel(Dimensions dims, double lambda, const BrokenPoint& x,
                        const BrokenPoint& y,
                        ResolventPart part = ResolventPart::full);

struct KernelEval {
    double value;
    double dx;  // derivative in the coordinate x (signed)
};

// Value together with the analytic x-derivative (profile derivatives, no
// finite differences). dx is undefined on the diagonal |x| = |y| of Q1/Q3.
KernelEval resolvent_kernel_eval(Dimensions dims, double lambda,
                                 const BrokenPoint& x, const BrokenPoint& y,
                                 ResolventPart part = ResolventPart::full);

}  // namespace blx

#endif
