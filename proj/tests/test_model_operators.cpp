#include <cmath>
#include <vector>

#include "blx/model_operators.hpp"
#include "blx/quadrature.hpp"
#include "blx/specfun.hpp"
#include "doctest.h"

using namespace blx;

TEST_CASE("ray grid mass matches the closed form") {
    RayGrid g = build_ray_grid(3.0, 10.0, 4000);
    CHECK(g.total_mass() == doctest::Approx(333.0).epsilon(1e-5));
}

TEST_CASE("suffix-kernel application matches a hand integral") {
    // alpha = 2, beta = 1, n1 = 3, f = chi_{[2,4]}:
    // R1 f(x) = x^{-2} int_max(x,2)^4 y^{-1} y^2 dy; at x = 1 this is 6.
    HHParams par(2.0, 1.0, 1.0, 0.0, 3.0, 3.0);
    RayGrid g = build_ray_grid(3.0, 100.0, 20000);
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        f[i] = (g.r[i] >= 2.0 && g.r[i] <= 4.0) ? 1.0 : 0.0;
    std::vector<double> r1 = hh_apply(par, HHBranch::R1, g, f);
    CHECK(r1[0] == doctest::Approx(6.0).epsilon(2e-3));
    // Interior point x = 3: 3^{-2} * (16 - 9)/2.
    std::size_t at3 = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(g.r[i] - 3.0) < std::abs(g.r[at3] - 3.0)) at3 = i;
    CHECK(r1[at3] == doctest::Approx(7.0 / 18.0).epsilon(5e-3));
}

TEST_CASE("prefix-kernel application matches a hand integral") {
    // alpha' = 1, beta' = 0, n1 = 3: R2 f(5) = 5^{-1} int_2^4 y^2 dy.
    HHParams par(2.0, 1.0, 1.0, 0.0, 3.0, 3.0);
    RayGrid g = build_ray_grid(3.0, 100.0, 20000);
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        f[i] = (g.r[i] >= 2.0 && g.r[i] <= 4.0) ? 1.0 : 0.0;
    std::vector<double> r2 = hh_apply(par, HHBranch::R2, g, f);
    std::size_t at5 = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(g.r[i] - 5.0) < std::abs(g.r[at5] - 5.0)) at5 = i;
    CHECK(r2[at5] == doctest::Approx((64.0 - 8.0) / 15.0).epsilon(5e-3));
}

TEST_CASE("homogeneous-kernel norm integral: closed form and divergence") {
    // K(x,1) = x^{-2} for x >= 1 and 1 below; n1 = n2 = 2, p = 2:
    // int_0^1 1 dx + int_1^inf x^{-2} dx = 2.
    auto kernel = [](double x) { return x >= 1.0 ? 1.0 / (x * x) : 1.0; };
    HLPResult ok = hlp_norm_integral(kernel, 2.0, 2.0, 2.0, 2.0);
    CHECK_FALSE(ok.diverged);
    CHECK(ok.value == doctest::Approx(2.0).epsilon(1e-8));

    // Borderline kernel x^{-1}: the integral diverges at both ends.
    auto bad = [](double x) { return 1.0 / x; };
    HLPResult div = hlp_norm_integral(bad, 2.0, 2.0, 2.0, 2.0);
    CHECK(div.diverged);
}

TEST_CASE("exponential model kernel: oracle at a sample point") {
    double a = 1.2, b = 0.8, c = 1.0;
    double n1 = 1.5;
    RayGrid g = build_ray_grid(n1, 50.0, 6000);
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        f[i] = std::exp(-0.5 * (g.r[i] - 1.0));
    std::vector<double> got = th_model_apply(a, b, c, g, f);
    // Independent adaptive quadrature at x = 2.
    double x = 2.0;
    QuadResult q = integrate_adaptive(
        [&](double y) {
            double mn = std::min(x, y);
            double k = std::pow(x, -a) * std::pow(y, -b) *
                       std::exp(-c * (x + y - 2.0) / mn) / (x + y - 2.0);
            return k * std::exp(-0.5 * (y - 1.0)) * std::pow(y, n1 - 1.0);
        },
        1.0, 50.0, 1e-12, 1e-15);
    std::size_t at = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(g.r[i] - x) < std::abs(g.r[at] - x)) at = i;
    CHECK(got[at] == doctest::Approx(q.value).epsilon(5e-3));
    // The corner cell stays finite.
    CHECK(std::isfinite(got[0]));
    CHECK(got[0] > 0.0);
}

TEST_CASE("inner integral oracle") {
    // ij_integral is the L^q norm of k_j(lambda .) against y^{d-1} dy;
    // cross-check with direct adaptive quadrature of the unscaled profile.
    Dimensions dims(3.0, 3.0);
    double lambda = 0.5, q = 2.0;
    QuadResult direct = integrate_adaptive(
        [&](double y) {
            double k = blx::profile(3.0, lambda * y).k;
            return std::pow(k, q) * std::pow(y, 2.0);
        },
        1.0, 200.0, 1e-12, 1e-15);
    CHECK(ij_integral(dims, 2, lambda, q) ==
          doctest::Approx(std::pow(direct.value, 1.0 / q)).epsilon(1e-6));
}

TEST_CASE("low-energy block is linear and converges") {
    Dimensions dims(1.5, 1.8);
    Grid grid = build_grid(dims, 100.0, 120);
    GridFunction g1(grid, [](const BrokenPoint& p) {
        if (p.side != Side::positive) return 0.0;
        return (p.radius >= 2.0 && p.radius <= 6.0) ? 1.0 : 0.0;
    });
    TijResult a = tij_apply(dims, 1, 2, g1);
    CHECK(a.converged);
    GridFunction g2 = g1;
    for (double& v : g2.values) v *= 2.0;
    TijResult b = tij_apply(dims, 1, 2, g2);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (a.out.values[i] != 0.0)
            worst = std::max(worst, std::abs(b.out.values[i] -
                                             2.0 * a.out.values[i]) /
                                        std::abs(a.out.values[i]));
    CHECK(worst < 1e-10);
    // Output lives on the requested side only.
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid.node(i).side == Side::positive)
            CHECK(a.out.values[i] == 0.0);
}

TEST_CASE("unboundedness witness norm approaches its limit") {
    // beta = 1, d1 = 1.5, p0 = 3: ||f||_3^3 -> int_0^inf (1+u)^{-3} du = 1/2.
    Dimensions dims(1.5, 3.0);
    Grid grid = build_grid(dims, 1e6, 4000);
    CounterexampleSpec spec(dims, 1e6);
    CHECK(spec.beta == doctest::Approx(1.0));
    CHECK(spec.p0 == doctest::Approx(3.0));
    GridFunction f = counterexample(spec, grid);
    CHECK(lp_norm(f, 3.0) ==
          doctest::Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(0.01));
    // Above dimension 2 the default witness exponent switches to d1 - 1.
    CounterexampleSpec hi(Dimensions(2.5, 3.5), 100.0);
    CHECK(hi.beta == doctest::Approx(1.5));
    CHECK_THROWS_AS(CounterexampleSpec(dims, 100.0, 2.0), std::domain_error);
}

TEST_CASE("log-log covariate fixed point") {
    double R = std::exp(std::exp(1.0) - 1.0);
    CHECK(std::log(1.0 + std::log(R)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("random ray family is deterministic in the seed") {
    std::vector<RayFn> f1 = make_ray_family(3.0, 2.0, 5, 5, 3, 42);
    std::vector<RayFn> f2 = make_ray_family(3.0, 2.0, 5, 5, 3, 42);
    REQUIRE(f1.size() == 13);
    REQUIRE(f2.size() == 13);
    for (std::size_t k = 0; k < f1.size(); ++k)
        for (double r : {1.1, 3.0, 17.0, 150.0})
            CHECK(f1[k](r) == f2[k](r));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(HHParams(-1.0, 1.0, 1.0, 1.0, 3.0, 3.0),
                    std::domain_error);
    CHECK_THROWS_AS(HHParams(1.0, 1.0, 1.0, 1.0, 0.5, 3.0),
                    std::domain_error);
    CHECK_THROWS_AS(build_ray_grid(3.0, 0.5, 100), std::invalid_argument);
}
