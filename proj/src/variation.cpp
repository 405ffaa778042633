#include "kforge/variation.hpp"

#include "kforge/grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kforge {

double GeodesicBall::center_angle() const {
    if (center.size() != 2)
        throw std::logic_error("center_angle is defined for balls on S^1 only");
    return std::atan2(center[1], center[0]);
}

GeodesicBall GeodesicBall::on_circle(double angle, double radius_rad) {
    GeodesicBall b;
    b.center = Eigen::Vector2d(std::cos(angle), std::sin(angle));
    b.radius_rad = radius_rad;
    return b;
}

void GeodesicBall::validate(double delta0) const {
    if (std::abs(center.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("ball center must be a unit vector");
    if (!(radius_rad > 0.0 && radius_rad <= delta0)) {
        std::ostringstream os;
        os << "ball radius " << radius_rad << " outside (0, " << delta0 << "]";
        throw std::invalid_argument(os.str());
    }
}

GeodesicQuantities geodesic_quantities(const Eigen::VectorXd& z_dir,
                                       const Eigen::VectorXd& c, int m) {
    if (z_dir.size() != c.size() || z_dir.size() != m + 1)
        throw std::invalid_argument("geodesic_quantities: dimension mismatch");
    double dot = z_dir.dot(c);
    if (dot < -1.0 + 1e-12)
        throw std::domain_error("geodesic_quantities: antipodal input");
    dot = std::min(dot, 1.0);
    const double rg = std::acos(dot);
    GeodesicQuantities q;
    q.d = 0.5 * rg * rg;
    q.grad_sq = 2.0 * q.d;
    // rg*cot(rg) -> 1 as rg -> 0; series keeps the limit branch accurate
    const double rcot = rg < 1e-6 ? 1.0 - rg * rg / 3.0 : rg * std::cos(rg) / std::sin(rg);
    q.lap = 1.0 + (m - 1) * rcot;
    return q;
}

NormalVariation build_variation(const GeodesicBall& ball, double l0, double alpha0,
                                double beta, int sign) {
    if (!(l0 > 0.0)) throw std::invalid_argument("build_variation: l0 must be positive");
    if (!(alpha0 > 0.0 && alpha0 < beta && beta < 1.0))
        throw std::invalid_argument("build_variation: need 0 < alpha0 < beta < 1");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("build_variation: sign must be +1 or -1");

    NormalVariation var;
    var.ball = ball;
    var.l0 = l0;
    var.alpha0 = alpha0;
    var.beta = beta;
    var.sign = sign;

    // Angular profile: gentle strict decrease times a flat-zero cutoff whose
    // glue is confined to the last tenth of the cap, so the exponentially
    // flat tail stays far thinner than any verification grid cell.
    const double dc = ball.d_cap();
    var.lambda = SmoothFn::product(
        SmoothFn::affine(1.0, -0.05 / dc, 0.0, dc),
        SmoothFn::step(0.9 * dc, dc, 1.0, 0.0, 0.0, dc));

    // sigma(w) = -sign w^2/2 * T(w^2), T == 1 below alpha0' and flat-zero at
    // beta, as a function of w on [-1, 1].
    const double a0p = 0.5 * (alpha0 + beta);
    SmoothFn taper = SmoothFn::step(a0p, beta, 1.0, 0.0);
    const double s = static_cast<double>(sign);
    const double wa = std::sqrt(a0p), wb = std::sqrt(beta);
    auto quad = [s](double w) {
        const Jet3 wj = Jet3::var(w);
        return -0.5 * s * sqr(wj);
    };
    auto tapered = [s, taper](double w) {
        const Jet3 wj = Jet3::var(w);
        const Jet3 r{w * w, 2.0 * w, 2.0, 0.0};
        return -0.5 * s * sqr(wj) * compose(taper.jet(r.f), r);
    };
    var.sigma = SmoothFn::from_pieces({-1.0, -wb, -wa, wa, wb, 1.0},
                                      {nullptr, tapered, quad, tapered, nullptr},
                                      {{true, 0.0}, {false, 0.0}, {false, 0.0},
                                       {false, 0.0}, {true, 0.0}});
    return var;
}

bool supports_overlap(const GeodesicBall& a, const GeodesicBall& b) {
    const double da = std::abs(std::remainder(a.center_angle() - b.center_angle(), kTwoPi));
    return da < a.radius_rad + b.radius_rad;
}

} // namespace kforge
