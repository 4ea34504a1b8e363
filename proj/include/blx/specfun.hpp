#ifndef BLX_SPECFUN_HPP
#define BLX_SPECFUN_HPP

#include <stdexcept>

// Modified Bessel functions of real nonnegative order and the radial
// profile solutions l, k of the model ODE  f'' + (d-1)/r f' = f,
//
//     l(r) = r^{1-d/2} I_{d/2-1}(r),   k(r) = r^{1-d/2} K_{|d/2-1|}(r).
//
// All functions are pure and reentrant.

namespace blx {

// Unscaled entry points guard at x > kBesselOverflowX; quadrature uses the
// scaled variants instead.
inline constexpr double kBesselOverflowX = 700.0;
inline constexpr double kMaxOrder = 10.0;   // d <= 20 guard
inline constexpr double kMaxDim = 20.0;

struct BesselOrder {
    double nu;
    explicit BesselOrder(double nu_) : nu(nu_) {
        if (!(nu >= 0.0) || !(nu < kMaxOrder))
            throw std::domain_error("BesselOrder: nu must be in [0, 10)");
    }
};

// I_nu(x). x = 0 allowed (series limit). Throws std::domain_error for x < 0,
// std::overflow_error for x > 700.
double bessel_i(BesselOrder nu, double x);
// d/dx I_nu(x), via I_nu' = I_{nu+1} + (nu/x) I_nu. Requires x > 0.
double bessel_i_deriv(BesselOrder nu, double x);
// e^{-x} I_nu(x); no overflow guard.
double bessel_i_scaled(BesselOrder nu, double x);

// K_nu(x). Requires x > 0. K_{-nu} = K_nu is the caller's responsibility
// (BesselOrder is nonnegative by construction).
double bessel_k(BesselOrder nu, double x);
// d/dx K_nu(x), via K_nu' = -K_{nu+1} + (nu/x) K_nu.
double bessel_k_deriv(BesselOrder nu, double x);
// e^{x} K_nu(x).
double bessel_k_scaled(BesselOrder nu, double x);

struct ProfileValues {
    double l;    // l(r) > 0
    double k;    // k(r) > 0
    double dl;   // l'(r) > 0
    double dk;   // k'(r) < 0
};

// Same values with the exponential factored out:
// ls = e^{-r} l, ks = e^{r} k, dls = e^{-r} l', dks = e^{r} k'.
struct ScaledProfileValues {
    double ls;
    double ks;
    double dls;
    double dks;
};

// Profile pair at argument r > 0 for dimension d in (1, 20].
// |d - 2| < 1e-12 is treated as d = 2 (order exactly zero).
ProfileValues profile(double d, double r);
ScaledProfileValues profile_scaled(double d, double r);

// l'(r) k(r) - k'(r) l(r); equals r^{1-d} (Bessel Wronskian).
double profile_wronskian(double d, double r);

}  // namespace blx

#endif
