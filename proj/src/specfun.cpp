#include "blx/specfun.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include <cmath>
#include <string>

namespace blx {

namespace {

// GSL's default handler aborts; we translate status codes ourselves.
const int g_handler_off = [] {
    gsl_set_error_handler_off();
    return 0;
}();

double check(const gsl_sf_result& res, int status, const char* what) {
    if (status == GSL_SUCCESS) return res.val;
    if (status == GSL_EUNDRFLW) return 0.0;
    throw std::runtime_error(std::string(what) + ": gsl error " +
                             gsl_strerror(status));
}

// GSL's Inu / Inu_scaled return NaN (with a success status) at exactly
// nu = 0 for x beyond ~300; the dedicated I0 routines are fine, so route
// zero order to them.
int inu_raw(double nu, double x, gsl_sf_result* r) {
    if (nu == 0.0) return gsl_sf_bessel_I0_e(x, r);
    return gsl_sf_bessel_Inu_e(nu, x, r);
}

int inu_scaled_raw(double nu, double x, gsl_sf_result* r) {
    if (nu == 0.0) return gsl_sf_bessel_I0_scaled_e(x, r);
    return gsl_sf_bessel_Inu_scaled_e(nu, x, r);
}

}  // namespace

double bessel_i(BesselOrder nu, double x) {
    if (x < 0.0) throw std::domain_error("bessel_i: x < 0");
    if (x == 0.0) return nu.nu == 0.0 ? 1.0 : 0.0;
    if (x > kBesselOverflowX)
        throw std::overflow_error("bessel_i: x beyond exponential-range guard");
    gsl_sf_result r;
    int s = inu_raw(nu.nu, x, &r);
    return check(r, s, "bessel_i");
}

double bessel_i_scaled(BesselOrder nu, double x) {
    if (x < 0.0) throw std::domain_error("bessel_i_scaled: x < 0");
    if (x == 0.0) return nu.nu == 0.0 ? 1.0 : 0.0;
    gsl_sf_result r;
    int s = inu_scaled_raw(nu.nu, x, &r);
    return check(r, s, "bessel_i_scaled");
}

double bessel_i_deriv(BesselOrder nu, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_i_deriv: x <= 0");
    if (x > kBesselOverflowX)
        throw std::overflow_error("bessel_i_deriv: x beyond exponential-range guard");
    return bessel_i(BesselOrder(nu.nu + 1.0), x) + nu.nu / x * bessel_i(nu, x);
}

double bessel_k(BesselOrder nu, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k: x <= 0");
    gsl_sf_result r;
    int s = gsl_sf_bessel_Knu_e(nu.nu, x, &r);
    return check(r, s, "bessel_k");
}

double bessel_k_scaled(BesselOrder nu, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k_scaled: x <= 0");
    gsl_sf_result r;
    int s = gsl_sf_bessel_Knu_scaled_e(nu.nu, x, &r);
    return check(r, s, "bessel_k_scaled");
}

double bessel_k_deriv(BesselOrder nu, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k_deriv: x <= 0");
    return -bessel_k(BesselOrder(nu.nu + 1.0), x) + nu.nu / x * bessel_k(nu, x);
}

namespace {

void check_profile_args(double& d, double r) {
    if (!(d > 1.0) || !(d <= kMaxDim))
        throw std::domain_error("profile: d must be in (1, 20]");
    if (!(r > 0.0)) throw std::domain_error("profile: r <= 0");
    if (std::abs(d - 2.0) < 1e-12) d = 2.0;  // avoid cancellation in the order
}

}  // namespace

// With nu = d/2 - 1:
//   l  = r^{-nu} I_nu(r)           (I of negative order when d < 2)
//   k  = r^{-nu} K_{|nu|}(r)
//   l' = r^{-nu} I_{nu+1}(r)       from d/dr [r^{-nu} I_nu] =  r^{-nu} I_{nu+1}
//   k' = -r^{-nu} K_{d/2}(r)       from d/dr [r^{-nu} K_nu] = -r^{-nu} K_{nu+1}
// The derivative orders nu+1 = d/2 are nonnegative for every d > 1, so only
// the value of l needs the reflection I_{-m} = I_m + (2/pi) sin(m pi) K_m.
ProfileValues profile(double d, double r) {
    check_profile_args(d, r);
    const double nu = d / 2.0 - 1.0;
    const double pref = std::pow(r, -nu);
    gsl_sf_result ri, rk, rdi, rdk;
    int s1 = inu_raw(std::abs(nu), r, &ri);
    int s2 = gsl_sf_bessel_Knu_e(std::abs(nu), r, &rk);
    int s3 = inu_raw(d / 2.0, r, &rdi);
    int s4 = gsl_sf_bessel_Knu_e(d / 2.0, r, &rdk);
    double iv = check(ri, s1, "profile I");
    double kv = check(rk, s2, "profile K");
    if (nu < 0.0) iv += 2.0 / M_PI * std::sin(-nu * M_PI) * kv;
    ProfileValues p;
    p.l = pref * iv;
    p.k = pref * kv;
    p.dl = pref * check(rdi, s3, "profile I'");
    p.dk = -pref * check(rdk, s4, "profile K'");
    return p;
}

ScaledProfileValues profile_scaled(double d, double r) {
    check_profile_args(d, r);
    const double nu = d / 2.0 - 1.0;
    const double pref = std::pow(r, -nu);
    gsl_sf_result ri, rk, rdi, rdk;
    int s1 = inu_scaled_raw(std::abs(nu), r, &ri);
    int s2 = gsl_sf_bessel_Knu_scaled_e(std::abs(nu), r, &rk);
    int s3 = inu_scaled_raw(d / 2.0, r, &rdi);
    int s4 = gsl_sf_bessel_Knu_scaled_e(d / 2.0, r, &rdk);
    double iv = check(ri, s1, "profile_scaled I");
    double kv = check(rk, s2, "profile_scaled K");
    if (nu < 0.0) {
        // e^{-r} I_{-m} = e^{-r} I_m + (2/pi) sin(m pi) (e^{r} K_m) e^{-2r}
        iv += 2.0 / M_PI * std::sin(-nu * M_PI) * kv * std::exp(-2.0 * r);
    }
    ScaledProfileValues p;
    p.ls = pref * iv;
    p.ks = pref * kv;
    p.dls = pref * check(rdi, s3, "profile_scaled I'");
    p.dks = -pref * check(rdk, s4, "profile_scaled K'");
    return p;
}

double profile_wronskian(double d, double r) {
    // Scaled product keeps the exponentials cancelled exactly.
    ScaledProfileValues p = profile_scaled(d, r);
    return p.dls * p.ks - p.dks * p.ls;
}

}  // namespace blx
