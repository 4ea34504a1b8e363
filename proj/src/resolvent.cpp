#include "blx/resolvent.hpp"

#include <cmath>

namespace blx {

Quadrant quadrant(const BrokenPoint& x, const BrokenPoint& y) {
    if (y.side == Side::positive)
        return x.side == Side::positive ? Quadrant::Q1 : Quadrant::Q2;
    return x.side == Side::positive ? Quadrant::Q4 : Quadrant::Q3;
}

namespace {

// e^{2 lambda} [k1 k2]'(lambda), evaluated from scaled profiles.
double scaled_denominator(const ScaledProfileValues& p1,
                          const ScaledProfileValues& p2) {
    return p1.dks * p2.ks + p1.ks * p2.dks;
}

double clamped_exp(double mant, double exponent) {
    if (mant == 0.0) return 0.0;
    double lg = std::log(std::abs(mant)) + exponent;
    if (lg < -700.0) return 0.0;
    return mant * std::exp(exponent);
}

}  // namespace

CoefficientPrediction coefficient_prediction(Dimensions dims) {
    const double d1 = dims.d1, d2 = dims.d2;
    if (std::abs(d1 - 2.0) < 1e-12)
        throw std::domain_error("coefficient_prediction: d1 = 2 not tabulated");
    CoefficientPrediction p;
    p.ea_large = 0.5 * (d1 + d2) - 2.0;
    p.eb_large = d2 - 2.0;
    p.ec_large = d1 - 2.0;
    if (d1 > 2.0) {
        p.ea_small = d1 + d2 - 4.0;
        p.eb_small = 2.0 * d2 - 4.0;
        p.ec_small = 2.0 * d1 - 4.0;
    } else if (std::abs(d2 - 2.0) < 1e-12) {
        p.ea_small = 0.0;
        p.eb_small = 2.0 - d1;
        p.ec_small = d1 - 2.0;
    } else {
        p.ea_small = d2 - 2.0;
        p.eb_small = 2.0 * d2 - d1 - 2.0;
        p.ec_small = d1 - 2.0;
    }
    return p;
}

ScaledCoefficients scaled_coefficients(Dimensions dims, double lambda) {
    if (!(lambda > 0.0))
        throw std::domain_error("scaled_coefficients: lambda <= 0");
    ScaledProfileValues p1 = profile_scaled(dims.d1, lambda);
    ScaledProfileValues p2 = profile_scaled(dims.d2, lambda);
    double D = scaled_denominator(p1, p2);
    ScaledCoefficients c;
    c.lambda = lambda;
    c.As = -1.0 / (lambda * D);
    // [k1 l2]' and [k2 l1]' carry no net exponential factor.
    c.Bs = -std::pow(lambda, dims.d2 - 2.0) * (p1.dks * p2.ls + p1.ks * p2.dls) / D;
    c.Cs = -std::pow(lambda, dims.d1 - 2.0) * (p2.dks * p1.ls + p2.ks * p1.dls) / D;
    return c;
}

ResolventCoefficients coefficients(Dimensions dims, double lambda) {
    if (lambda > 300.0)
        throw std::overflow_error("coefficients: lambda > 300, use scaled form");
    ScaledCoefficients s = scaled_coefficients(dims, lambda);
    double e = std::exp(2.0 * lambda);
    return ResolventCoefficients{lambda, s.As * e, s.Bs * e, s.Cs * e, 1.0, 1.0};
}

namespace {

struct QuadrantEval {
    // kernel = kk_mant * exp(kk_exp) + kl_mant * exp(kl_exp), same for dx.
    double kk = 0.0, dkk = 0.0, kk_exp = 0.0;
    double kl = 0.0, dkl = 0.0, kl_exp = 0.0;
};

// Same-side evaluation (Q1 on dimension d2, Q3 on dimension d1):
//   kk = F k(l|y|) k(l|x|),  kl = l^{d-2} k(l*max) l(l*min)
// where F is B (Q1) or C (Q3). sign = +1 on the positive side, -1 on the
// negative side (d|x|/dx).
QuadrantEval same_side(double d, double Fs, double lambda, double rx,
                       double ry, double sign) {
    ScaledProfileValues px = profile_scaled(d, lambda * rx);
    ScaledProfileValues py = profile_scaled(d, lambda * ry);
    QuadrantEval ev;
    ev.kk = Fs * py.ks * px.ks;
    ev.dkk = sign * lambda * Fs * py.ks * px.dks;
    ev.kk_exp = lambda * (2.0 - rx - ry);
    double pw = std::pow(lambda, d - 2.0);
    if (rx <= ry) {
        ev.kl = pw * py.ks * px.ls;
        ev.dkl = sign * lambda * pw * py.ks * px.dls;
    } else {
        ev.kl = pw * py.ls * px.ks;
        ev.dkl = sign * lambda * pw * py.ls * px.dks;
    }
    ev.kl_exp = -lambda * std::abs(rx - ry);
    return ev;
}

// Cross-side evaluation: kernel = A k_i(l|x|) k_j(l|y|), pure kk.
QuadrantEval cross_side(double dx_dim, double dy_dim, double As, double lambda,
                        double rx, double ry, double sign) {
    ScaledProfileValues px = profile_scaled(dx_dim, lambda * rx);
    ScaledProfileValues py = profile_scaled(dy_dim, lambda * ry);
    QuadrantEval ev;
    ev.kk = As * px.ks * py.ks;
    ev.dkk = sign * lambda * As * px.dks * py.ks;
    ev.kk_exp = lambda * (2.0 - rx - ry);
    return ev;
}

}  // namespace

KernelEval resolvent_kernel_eval(Dimensions dims, double lambda,
                                 const BrokenPoint& x, const BrokenPoint& y,
                                 ResolventPart part) {
    ScaledCoefficients c = scaled_coefficients(dims, lambda);
    const double rx = x.radius, ry = y.radius;
    QuadrantEval ev;
    switch (quadrant(x, y)) {
        case Quadrant::Q1:
            ev = same_side(dims.d2, c.Bs, lambda, rx, ry, +1.0);
            break;
        case Quadrant::Q3:
            ev = same_side(dims.d1, c.Cs, lambda, rx, ry, -1.0);
            break;
        case Quadrant::Q2:
            ev = cross_side(dims.d1, dims.d2, c.As, lambda, rx, ry, -1.0);
            break;
        case Quadrant::Q4:
            ev = cross_side(dims.d2, dims.d1, c.As, lambda, rx, ry, +1.0);
            break;
    }
    KernelEval out{0.0, 0.0};
    if (part != ResolventPart::kl) {
        out.value += clamped_exp(ev.kk, ev.kk_exp);
        out.dx += clamped_exp(ev.dkk, ev.kk_exp);
    }
    if (part != ResolventPart::kk) {
        out.value += clamped_exp(ev.kl, ev.kl_exp);
        out.dx += clamped_exp(ev.dkl, ev.kl_exp);
    }
    return out;
}

double resolvent_kernel(Dimensions dims, double lambda, const BrokenPoint& x,
                        const BrokenPoint& y, ResolventPart part) {
    return resolvent_kernel_eval(dims, lambda, x, y, part).value;
}

}  // namespace blx
