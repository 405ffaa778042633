#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kforge/smoothfn.hpp"

using namespace kforge;

TEST_CASE("step plateau values and midpoint symmetry") {
    SmoothFn s = SmoothFn::step(0.2, 0.5, 0.0, 1.0);
    CHECK(s(0.2) == 0.0);
    CHECK(s(0.5) == 1.0);
    CHECK(s(0.0) == 0.0);
    CHECK(s(1.0) == 1.0);
    CHECK(s(0.35) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(glue_jet(0.5).f == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(SmoothFn::step(0.5, 0.2, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("step is non-decreasing when hi > lo") {
    SmoothFn s = SmoothFn::step(0.2, 0.5, 0.0, 1.0);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        double r1 = dist(rng), r2 = dist(rng);
        if (r1 > r2) std::swap(r1, r2);
        CHECK(s(r1) <= s(r2) + 1e-12);
    }
}

TEST_CASE("plateau support and shoulders") {
    SmoothFn p = SmoothFn::plateau(0.0, 0.0, 0.3, 0.5);
    CHECK(p(0.1) == 1.0);
    CHECK(p(0.6) == 0.0);
    const double mid = p(0.4);
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
    CHECK(p(0.42) < p(0.38));  // strictly decreasing shoulder
    CHECK_THROWS_AS(SmoothFn::plateau(0.4, 0.3, 0.2, 0.1), std::invalid_argument);
}

TEST_CASE("eval_deriv against finite differences") {
    SmoothFn s = SmoothFn::step(0.2, 0.5, 0.0, 1.0);
    CHECK(eval_deriv(s, 0.1, 1) == 0.0);
    CHECK(eval_deriv(SmoothFn::constant(0.7), 0.3, 2) == 0.0);
    const double h = 1e-5;
    const double fd = (s(0.35 + h) - s(0.35 - h)) / (2.0 * h);
    CHECK(eval_deriv(s, 0.35, 1) == doctest::Approx(fd).epsilon(1e-6));
    const double fd2 = (s(0.4 + h) - 2.0 * s(0.4) + s(0.4 - h)) / (h * h);
    CHECK(eval_deriv(s, 0.4, 2) == doctest::Approx(fd2).epsilon(1e-4));
    CHECK_THROWS_AS(s(1.5), std::domain_error);
}

TEST_CASE("integrate closed forms") {
    CHECK(integrate(SmoothFn::constant(1.0), 0.0, 1.0, 1e-10) ==
          doctest::Approx(1.0).epsilon(1e-12));
    const double got = integrate([](double r) { return 1.0 / std::sqrt(1.0 - r); },
                                 0.2, 0.5, 1e-10);
    const double want = 2.0 * (std::sqrt(0.8) - std::sqrt(0.5));
    CHECK(got == doctest::Approx(want).epsilon(1e-10));
    CHECK(integrate(SmoothFn::constant(3.0), 0.4, 0.4, 1e-10) == 0.0);
}

TEST_CASE("integrate is additive over subdivisions") {
    SmoothFn s = SmoothFn::step(0.2, 0.5, 0.0, 1.0);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    const double tol = 1e-10;
    for (int i = 0; i < 20; ++i) {
        double pts[3] = {dist(rng), dist(rng), dist(rng)};
        std::sort(pts, pts + 3);
        const double whole = integrate(s, pts[0], pts[2], tol);
        const double split = integrate(s, pts[0], pts[1], tol) +
                             integrate(s, pts[1], pts[2], tol);
        CHECK(std::abs(whole - split) <= 3.0 * tol);
    }
}

TEST_CASE("integrand error reports the abscissa") {
    CHECK_THROWS_WITH_AS(
        integrate([](double x) { return x > 0.4 ? std::nan("") : 1.0; }, 0.0, 1.0, 1e-8),
        doctest::Contains("non-finite integrand sample"), std::runtime_error);
}

TEST_CASE("C2 continuity at every breakpoint of composite functions") {
    std::vector<SmoothFn> fns;
    fns.push_back(SmoothFn::step(0.2, 0.5, 0.0, 1.0));
    fns.push_back(SmoothFn::plateau(0.1, 0.3, 0.6, 0.8));
    fns.push_back(SmoothFn::product(SmoothFn::step(0.1, 0.4, 0.0, 2.0),
                                    SmoothFn::plateau(0.2, 0.3, 0.7, 0.9)));
    fns.push_back(SmoothFn::sum(SmoothFn::step(0.3, 0.5, 1.0, 2.0),
                                SmoothFn::affine(0.5, -0.2, 0.0, 1.0)));
    const double h = 1e-7;
    for (const auto& f : fns)
        for (double b : f.breakpoints())
            for (int order = 0; order <= 2; ++order) {
                const double l = f.deriv(b - h, order), r = f.deriv(b + h, order);
                const double scale = std::max({std::abs(l), std::abs(r), 1.0});
                CHECK(std::abs(l - r) / scale <= 1e-5);
            }
}

TEST_CASE("antiderivative value and analytic jet") {
    SmoothFn F = SmoothFn::antiderivative(
        [](double s) { return sqr(Jet3::var(s)); }, 0.2, 0.8, 1024);
    auto exact = [](double x) { return (x * x * x - 0.2 * 0.2 * 0.2) / 3.0; };
    for (double x : {0.2, 0.33, 0.5, 0.73, 0.8}) {
        CHECK(F(x) == doctest::Approx(exact(x)).epsilon(1e-12));
        CHECK(F.deriv(x, 1) == doctest::Approx(x * x).epsilon(1e-14));
        CHECK(F.deriv(x, 2) == doctest::Approx(2.0 * x).epsilon(1e-14));
    }
}

TEST_CASE("mix interpolates endpoints") {
    SmoothFn f0 = SmoothFn::step(0.2, 0.5, 0.0, 1.0);
    SmoothFn f1 = SmoothFn::step(0.3, 0.6, 0.0, 2.0);
    SmoothFn m = SmoothFn::mix(f0, f1, 0.25);
    for (double r : {0.1, 0.35, 0.55, 0.9})
        CHECK(m(r) == doctest::Approx(0.75 * f0(r) + 0.25 * f1(r)).epsilon(1e-15));
}
