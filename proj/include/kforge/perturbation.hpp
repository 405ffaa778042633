#ifndef KFORGE_PERTURBATION_HPP
#define KFORGE_PERTURBATION_HPP

#include "kforge/immersion.hpp"
#include "kforge/variation.hpp"

namespace kforge {

/// F_t(q) = q + t f(q) N(q). Throws on support collision with m's stack.
ImmersionMap apply_variation(const ImmersionMap& m, const NormalVariation& var,
                             double t);

/// Closed-form first variation of det dN at t = 0,
///   rate = sign_cal * l0 * (1/c2)^(n-1) *
///          [ lambda sigma'' <dw, e_n>^2 + psi sigma (lambda'' |grad d|^2 + lambda' lap d) ],
/// with the overall sign calibrated once against the finite-difference rate
/// (sign_cal = -1). Exact on the cylinder band {|w|^2 <= alpha}, where the
/// positivity argument lives; approximate beyond it. Requires k = n-1.
double det_rate_analytic(const ProfileSolution& sol, const NormalVariation& var,
                         double u, double v);
double det_rate_analytic(const ProfileSolution& sol, const NormalVariation& var,
                         const SpherePoint& p);

/// Central t-difference of the Gauss-Kronecker determinant of the perturbed
/// map, Richardson-extrapolated. By default the determinants come from the
/// exact 2-jet curvature; use_fd_shape routes them through the
/// finite-difference shape operator instead (noisier, independent oracle).
double det_rate_fd(const ImmersionMap& m, const NormalVariation& var, double u,
                   double v, double h = 1e-5, bool use_fd_shape = false);

/// The frame alignment <dw, e_n>^2 = 1/(1 + g'(v)^2) of the last principal
/// direction with the w-axis.
double w_alignment_sq(const ProfileSolution& sol, double v);

struct CalibrationReport {
    double t = 0.0;
    double min_target_h = 0.0;  // min H over the ball-shadow target grid
    double global_min_h = 0.0;  // min H over the global grid
    double worst_u = 0.0, worst_v = 0.0;
    int halvings = 0;
};

/// Halve t from t_init until H > 0 on the target region
/// {d < 0.99 d_cap, |w|^2 <= alpha} and H >= -1e-12 globally (<= 30
/// halvings). target_res/global grids share the resolutions of `grid`.
/// Throws on failure, reporting the worst offending point. Also asserts the
/// paper's frame condition <dw, e_n>^2 >= 1/2 on |w|^2 <= alpha0.
CalibrationReport calibrate_t(const ImmersionMap& m, const NormalVariation& var,
                              const GridSpec& grid, double t_init = 0.1);

} // namespace kforge

#endif
