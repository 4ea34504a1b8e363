#include <cmath>
#include <utility>
#include <vector>

#include "blx/quadrature.hpp"
#include "blx/riesz_kernel.hpp"
#include "doctest.h"

using namespace blx;

TEST_CASE("broken distance") {
    BrokenPoint p2(Side::positive, 2.0), p5(Side::positive, 5.0);
    BrokenPoint n3(Side::negative, 3.0);
    CHECK(broken_distance(p2, p5) == doctest::Approx(3.0));
    CHECK(broken_distance(p2, n3) == doctest::Approx(3.0));  // through +-1
    CHECK(broken_distance(n3, n3) == doctest::Approx(0.0));
}

TEST_CASE("part decomposition TL + TH + KL = FULL") {
    Dimensions dims(1.5, 3.0);
    const BrokenPoint pts[3] = {BrokenPoint(Side::positive, 2.0),
                                BrokenPoint(Side::positive, 9.0),
                                BrokenPoint(Side::negative, 4.0)};
    for (const BrokenPoint& x : pts)
        for (const BrokenPoint& y : pts) {
            if (broken_distance(x, y) < 0.5) continue;
            double tl = riesz_kernel(dims, x, y, RieszPart::TL);
            double th = riesz_kernel(dims, x, y, RieszPart::TH);
            double kl = riesz_kernel(dims, x, y, RieszPart::KL);
            double full = riesz_kernel(dims, x, y, RieszPart::FULL);
            CHECK(full == doctest::Approx(tl + th + kl).epsilon(1e-8));
        }
}

TEST_CASE("full kernel matches a brute-force lambda integral") {
    // Independent route: composite midpoint integration of the analytic
    // x-derivative of the resolvent kernel, versus the split adaptive
    // integrator inside riesz_kernel.
    Dimensions dims(1.5, 3.0);
    BrokenPoint x(Side::positive, 2.0), y(Side::negative, 3.0);
    double brute = 0.0;
    const int n = 40000;
    const double top = 40.0;
    for (int i = 0; i < n; ++i) {
        double lambda = (i + 0.5) * top / n;
        brute += resolvent_kernel_eval(dims, lambda, x, y).dx * top / n;
    }
    brute *= 2.0 / M_PI;
    double fast = riesz_kernel(dims, x, y, RieszPart::FULL, 1e-10);
    CHECK(fast == doctest::Approx(brute).epsilon(1e-5));
}

TEST_CASE("near-diagonal guard throws") {
    Dimensions dims(1.5, 3.0);
    BrokenPoint y(Side::positive, 5.0);
    CHECK_THROWS_AS(riesz_kernel(dims, BrokenPoint(Side::positive, 5.000001),
                                 y, RieszPart::FULL),
                    std::invalid_argument);
}

TEST_CASE("fit_exponent recovers exact power laws") {
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < 12; ++i) {
        double x = std::pow(10.0, 1.0 + i * 0.2);
        samples.emplace_back(x, 3.7 * std::pow(x, -1.25));
    }
    ExponentFit fit = fit_exponent(samples, {10.0, 2000.0});
    CHECK(fit.slope == doctest::Approx(-1.25).epsilon(1e-10));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-10));
    // Window restriction drops out-of-range samples; too few throws.
    CHECK_THROWS_AS(fit_exponent(samples, {1e6, 1e7}), std::invalid_argument);
}

TEST_CASE("exponent table spot values") {
    // Straddling case, cross quadrant Q2, |x| <= |y|: two-sided entries.
    Dimensions dims(1.5, 3.0);
    AppendixPrediction q2 =
        appendix_prediction(dims, Quadrant::Q2, Regime::x_small);
    CHECK(q2.two_sided);
    // Same-side entries are envelopes.
    AppendixPrediction q1 =
        appendix_prediction(dims, Quadrant::Q1, Regime::x_small);
    CHECK_FALSE(q1.two_sided);
}

TEST_CASE("one cheap fitted exponent matches its table entry") {
    Dimensions dims(1.5, 3.0);
    AppendixCheck chk =
        appendix_check(dims, Quadrant::Q2, Regime::x_small);
    CHECK(std::abs(chk.fit_x.slope - chk.predicted.ex) < 0.1);
    CHECK(std::abs(chk.fit_y.slope - chk.predicted.ey) < 0.1);
}
