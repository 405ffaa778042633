#ifndef KFORGE_CANTOR_HPP
#define KFORGE_CANTOR_HPP

#include <vector>

#include "kforge/immersion.hpp"
#include "kforge/perturbation.hpp"

namespace kforge {

/// Complement balls of a good Cantor set on S^1: the base-arc complement
/// first, then the removed middle arcs in construction order (depth 1, 2, ...).
struct CantorPlan {
    std::vector<GeodesicBall> balls;
    std::vector<int> depths;  // depth per ball; 0 for the base-arc complement
    double delta0 = 0.0;
    double base_arc_len = 2.0;  // centered at angle 0
    double ratio = 1.0 / 3.0;
    double shrink = 0.999;  // open balls shrunk for strict disjointness

    /// u lies in F_m = S^1 minus the first `upto` balls.
    bool in_complement_of_balls(double u, int upto) const;
    /// Chart u-distance from u to F_m (0 when u is in F_m).
    double dist_to_fm(double u, int upto) const;
};

/// Middle-`ratio` Cantor construction on a base arc of S^1 (n = 2 only).
/// Throws a plan error naming the ball if any radius exceeds delta0.
CantorPlan plan_cantor(int n, int depth, double ratio, double delta0);

/// Perturbation parameters shared by the per-ball variations.
struct StackParams {
    double l0 = 1.0;
    double alpha0 = 0.25;
    double t_init = 0.1;
    int cal_nu = 192;  // calibration grid resolution
    int cal_nv = 96;
};

struct ComposedStack {
    ImmersionMap map;
    std::vector<CalibrationReport> calibrations;  // one per applied ball
};

/// Apply calibrated inflations over the first `upto` balls of the plan.
ComposedStack compose_stack(std::shared_ptr<const ProfileSolution> sol,
                            const CantorPlan& plan, int upto,
                            const StackParams& sp = {});

struct FractalReport {
    int upto = 0;
    GridSpec grid;
    double tol = 0.0;
    std::int64_t zero_count = 0, positive_count = 0, negative_count = 0;
    std::int64_t flat_violations = 0;  // F_m x {|w|^2<=alpha} points not zero
    std::int64_t ball_violations = 0;  // ball-interior points not positive
    double hausdorff_cells = 0.0;      // measured zero set -> F_m x D^1, in cells
    bool ok = false;
    double worst_u = 0.0, worst_v = 0.0;  // location of the worst violation
};

FractalReport verify_fractal_zero_set(const ImmersionMap& m, const CantorPlan& plan,
                                      int upto, const GridSpec& grid, double tol);

} // namespace kforge

#endif
