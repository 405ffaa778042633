#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "kforge/immersion.hpp"

using namespace kforge;

namespace {

std::shared_ptr<const ProfileSolution> default_solution() {
    static const auto sol = std::make_shared<const ProfileSolution>(
        assemble_profile(ProfileParams::defaults()));
    return sol;
}

SpherePoint chart_point(double u, double v) {
    SpherePoint p;
    const double s = std::sqrt(1.0 - v * v);
    p.x = Eigen::Vector2d(s * std::cos(u), s * std::sin(u));
    p.y = Eigen::VectorXd::Constant(1, v);
    return p;
}

} // namespace

TEST_CASE("SpherePoint validation") {
    CHECK_NOTHROW(chart_point(0.3, 0.5).validate());
    SpherePoint off = chart_point(0.3, 0.5);
    off.x *= 1.001;
    CHECK_THROWS_AS(off.validate(), std::invalid_argument);
}

TEST_CASE("evaluate region behavior") {
    const auto sol = default_solution();
    // sphere region: identity
    SpherePoint p = chart_point(0.8, std::sqrt(0.6));
    Eigen::VectorXd img = evaluate(*sol, p);
    CHECK((img.head(2) - p.x).norm() == 0.0);
    CHECK((img.tail(1) - p.y).norm() == 0.0);
    // cylinder region: image on the radius-sqrt(gamma) cylinder
    SpherePoint q = chart_point(1.3, std::sqrt(0.1));
    Eigen::VectorXd imgq = evaluate(*sol, q);
    CHECK(std::abs(imgq.head(2).norm() - std::sqrt(0.7)) <= 1e-12);
    SpherePoint qx = chart_point(0.0, std::sqrt(0.1));
    CHECK(std::abs(evaluate(*sol, qx)[0] - std::sqrt(0.7)) <= 1e-12);
}

TEST_CASE("gauss map is the unit normal") {
    const auto sol = default_solution();
    // sphere region: N equals the point itself
    SpherePoint p = chart_point(2.1, std::sqrt(0.7));
    Eigen::VectorXd n = gauss_map(*sol, p);
    CHECK((n - evaluate(*sol, p)).norm() <= 1e-14);
    // cylinder region: horizontal normal
    SpherePoint q = chart_point(0.4, std::sqrt(0.15));
    Eigen::VectorXd nq = gauss_map(*sol, q);
    CHECK(std::abs(nq[2]) <= 1e-14);
    // unit length and implicit-surface residual at random points
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> du(0.0, kTwoPi), dv(-0.999, 0.999);
    for (int i = 0; i < 1000; ++i) {
        SpherePoint s = chart_point(du(rng), dv(rng));
        const double r = s.r();
        Eigen::VectorXd img = evaluate(*sol, s);
        CHECK(std::abs(gauss_map(*sol, s).norm() - 1.0) <= 1e-10);
        const double f = img.head(2).squaredNorm() + sol->mu(r) * r - sol->nu(r);
        CHECK(std::abs(f) <= 1e-10);
    }
}

TEST_CASE("analytic curvature spectrum by region") {
    const auto sol = default_solution();
    ShapeReport cyl = curvatures_analytic(*sol, 0.1);
    CHECK(cyl.principal_curvatures[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(cyl.principal_curvatures[1] ==
          doctest::Approx(1.0 / std::sqrt(0.7)).epsilon(1e-10));
    CHECK(cyl.gauss_kronecker == 0.0);
    ShapeReport sph = curvatures_analytic(*sol, 0.9);
    CHECK(sph.principal_curvatures[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sph.principal_curvatures[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sph.gauss_kronecker == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i <= 400; ++i) {
        const double r = static_cast<double>(i) / 400.0;
        const double h = curvatures_analytic(*sol, r).gauss_kronecker;
        CHECK(h >= 0.0);
        if (r <= sol->params.alpha) CHECK(h == 0.0);
        if (r >= sol->params.alpha + 0.01) CHECK(h > 0.0);
    }
}

TEST_CASE("chart curvature matches the formula spectrum on the base map") {
    ImmersionMap m(default_solution());
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> du(0.0, kTwoPi), dv(-0.97, 0.97);
    for (int i = 0; i < 200; ++i) {
        const double u = du(rng), v = dv(rng);
        const ShapeReport chart = chart_shape_analytic(m, u, v);
        const ShapeReport form = curvatures_analytic(m.profile(), v * v);
        for (int j = 0; j < 2; ++j)
            CHECK(chart.principal_curvatures[j] ==
                  doctest::Approx(form.principal_curvatures[j]).epsilon(1e-9));
    }
}

TEST_CASE("finite-difference oracle agrees with the analytic path") {
    ImmersionMap m(default_solution());
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> du(0.0, kTwoPi), dv(-0.95, 0.95);
    for (int i = 0; i < 200; ++i) {
        const double u = du(rng), v = dv(rng);
        const ShapeReport fd = shape_operator_fd(m, u, v);
        const ShapeReport an = chart_shape_analytic(m, u, v);
        for (int j = 0; j < 2; ++j) {
            const double tol =
                std::max(1e-7, 1e-5 * std::abs(an.principal_curvatures[j]));
            CHECK(std::abs(fd.principal_curvatures[j] - an.principal_curvatures[j]) <=
                  tol);
        }
        CHECK(std::abs(fd.gauss_kronecker - an.gauss_kronecker) <=
              std::max(1e-7, 1e-5 * std::abs(an.gauss_kronecker)));
        CHECK(fd.normal.dot(an.normal) > 0.99);
    }
    // sphere region eigenvalues are (1, 1)
    const ShapeReport sph = shape_operator_fd(m, 1.0, std::sqrt(0.9));
    CHECK(sph.principal_curvatures[0] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(sph.principal_curvatures[1] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("rank estimate of the base immersion") {
    ImmersionMap m(default_solution());
    CHECK(rank_estimate(m, 100) == 1);
    CHECK_THROWS_AS(rank_estimate(m, 50), std::invalid_argument);
}

TEST_CASE("zero set scan classifies the cylinder band") {
    ImmersionMap m(default_solution());
    const GridSpec grid = GridSpec::full(128, 64);
    const ZeroSetReport rep = zero_set_scan(m, grid, 1e-10);
    CHECK(rep.negative_count == 0);
    CHECK(rep.zero_count > 0);
    const double sa = std::sqrt(m.profile().params.alpha);
    CHECK(std::abs(rep.zero_v_min + sa) <= 2.0 * grid.v_spacing());
    CHECK(std::abs(rep.zero_v_max - sa) <= 2.0 * grid.v_spacing());
    for (int j = 0; j < grid.nv; ++j) {
        const double v = grid.v_at(j);
        for (int i = 0; i < grid.nu; ++i) {
            const std::uint8_t cls = rep.classes[static_cast<std::int64_t>(j) * grid.nu + i];
            if (v * v <= m.profile().params.alpha) CHECK(cls == 0);
            if (v * v >= m.profile().params.alpha + 0.01) CHECK(cls == 1);
        }
    }
}

TEST_CASE("parallel scan is bitwise identical to the serial reference") {
    ImmersionMap m(default_solution());
    const GridSpec grid = GridSpec::full(96, 48);
    const ZeroSetReport a = zero_set_scan(m, grid, 1e-10);
    const ZeroSetReport b = zero_set_scan_serial(m, grid, 1e-10);
    CHECK(a.classes == b.classes);
    CHECK(a.zero_count == b.zero_count);
    CHECK(a.positive_count == b.positive_count);
    CHECK(a.negative_count == b.negative_count);
}
