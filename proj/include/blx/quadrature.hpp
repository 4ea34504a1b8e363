#ifndef BLX_QUADRATURE_HPP
#define BLX_QUADRATURE_HPP

#include <functional>

// Adaptive Gauss-Kronrod (G7-K15) panels on finite intervals, plus a
// geometric-panel tail integrator for integrands with a known exponential
// decay rate.

namespace blx {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    long evals = 0;
    bool converged = true;
};

using Integrand = std::function<double(double)>;

// Kronrod 15-point estimate on [a, b] with embedded Gauss-7 error estimate.
QuadResult gk15(const Integrand& f, double a, double b);

// Adaptive bisection until the summed error estimate drops below
// max(rel_tol * |integral|, abs_tol).
QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              double rel_tol, double abs_tol,
                              int max_depth = 40);

// Integral over [a, inf) for |f(lambda)| decaying like e^{-rate * lambda}.
// Geometric panels [a, 2a], [2a, 4a], ... ; terminates when the certified
// remainder bound |f(b)| * (1 + 1/(rate*b)) * 2/rate falls below abs_tol.
QuadResult integrate_exp_tail(const Integrand& f, double a, double rate,
                              double rel_tol, double abs_tol);

}  // namespace blx

#endif
