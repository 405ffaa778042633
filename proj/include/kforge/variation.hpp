#ifndef KFORGE_VARIATION_HPP
#define KFORGE_VARIATION_HPP

#include <Eigen/Dense>

#include "kforge/smoothfn.hpp"

namespace kforge {

/// Geodesic ball on S^{n-1}. d(z) = (1/2) dist(z, center)^2, so the support
/// boundary sits at the cap value d_cap = radius^2/2.
struct GeodesicBall {
    Eigen::VectorXd center;  // unit vector in R^n
    double radius_rad = 0.0;

    double d_cap() const { return 0.5 * radius_rad * radius_rad; }
    /// Angle of the center on S^1 (n = 2 only).
    double center_angle() const;

    static GeodesicBall on_circle(double angle, double radius_rad);
    void validate(double delta0) const;
};

/// (d, ||grad d||^2, Laplacian d) of d(z) = (1/2) dist(z,c)^2 on S^m.
/// Lap d = 1 + (m-1) rg cot(rg), rg = sqrt(2d), with the limit value m at the
/// center. Throws std::domain_error for (numerically) antipodal input.
struct GeodesicQuantities {
    double d = 0.0;
    double grad_sq = 0.0;
    double lap = 0.0;
};
GeodesicQuantities geodesic_quantities(const Eigen::VectorXd& z_dir,
                                       const Eigen::VectorXd& c, int m);

/// One normal perturbation F_t(q) = q + t f(q) N(q) with
/// f(z, w) = l0 * lambda(d(z)) * sigma(w):
///   lambda on d-values in [0, d_cap], == 1 at 0, strictly decreasing,
///   flat-zero at d_cap; sigma(w) = -sign w^2/2 for w^2 <= alpha0', tapered
///   to 0 on w^2 in [alpha0', beta], identically 0 beyond.
struct NormalVariation {
    GeodesicBall ball;
    double l0 = 1.0;
    double t = 0.0;  // calibrated time, recorded by calibrate_t
    double alpha0 = 0.0;
    double beta = 0.0;
    int sign = +1;
    SmoothFn lambda;  // on [0, d_cap]
    SmoothFn sigma;   // on [-1, 1]

    /// f vanishes identically for d >= d_cap or w^2 >= beta.
    bool in_support(double d, double w) const {
        return d < ball.d_cap() && w * w < beta;
    }
};

NormalVariation build_variation(const GeodesicBall& ball, double l0, double alpha0,
                                double beta, int sign);

/// Angular supports [uc - delta, uc + delta] on S^1 intersect.
bool supports_overlap(const GeodesicBall& a, const GeodesicBall& b);

} // namespace kforge

#endif
