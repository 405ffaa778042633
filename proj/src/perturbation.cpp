#include "kforge/perturbation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kforge/parallel.hpp"

namespace kforge {

namespace {
constexpr double kRateFormulaSign = -1.0;  // calibrated once against det_rate_fd
}

ImmersionMap apply_variation(const ImmersionMap& m, const NormalVariation& var,
                             double t) {
    return m.with_variation(var, t);
}

double w_alignment_sq(const ProfileSolution& sol, double v) {
    // g(v) = theta(v^2) sqrt(1-v^2); e_n is the v-tangent direction
    const Jet3 rj{v * v, 2.0 * v, 2.0, 0.0};
    const Jet3 g = compose(sol.theta.jet(rj.f), rj) *
                   sqrt(Jet3{1.0 - v * v, -2.0 * v, -2.0, 0.0});
    return 1.0 / (1.0 + g.d1 * g.d1);
}

double det_rate_analytic(const ProfileSolution& sol, const NormalVariation& var,
                         double u, double v) {
    const int n = sol.params.n;
    if (sol.params.k != n - 1)
        throw std::invalid_argument("det_rate_analytic: requires k = n-1");
    const double a = std::remainder(u - var.ball.center_angle(), kTwoPi);
    const double d = 0.5 * a * a;
    if (!var.in_support(d, v)) return 0.0;
    const double lam = var.lambda(d);
    const double lam1 = var.lambda.deriv(d, 1);
    const double lam2 = var.lambda.deriv(d, 2);
    const double sig = var.sigma(v);
    const double sig2 = var.sigma.deriv(v, 2);
    const double r = v * v;
    const GeodesicQuantities gq{d, 2.0 * d, 1.0};  // m = n-1 = 1 on S^1
    const double bracket = lam * sig2 * w_alignment_sq(sol, v) +
                           sol.psi(r) * sig * (lam2 * gq.grad_sq + lam1 * gq.lap);
    return kRateFormulaSign * var.l0 * std::pow(1.0 / sol.c2(r), n - 1) * bracket;
}

double det_rate_analytic(const ProfileSolution& sol, const NormalVariation& var,
                         const SpherePoint& p) {
    p.validate();
    if (p.x.size() != 2 || p.y.size() != 1)
        throw std::invalid_argument("det_rate_analytic: SpherePoint overload is n=2 only");
    return det_rate_analytic(sol, var, std::atan2(p.x[1], p.x[0]), p.y[0]);
}

double det_rate_fd(const ImmersionMap& m, const NormalVariation& var, double u,
                   double v, double h, bool use_fd_shape) {
    auto det_at = [&](double t) {
        const ImmersionMap pm = m.with_variation(var, t);
        return use_fd_shape ? shape_operator_fd(pm, u, v).gauss_kronecker
                            : chart_curvature(pm, u, v);
    };
    auto central = [&](double hh) { return (det_at(hh) - det_at(-hh)) / (2.0 * hh); };
    return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

namespace {

double grid_min_h(const ImmersionMap& m, const GridSpec& grid, double* wu, double* wv) {
    const std::int64_t total = static_cast<std::int64_t>(grid.nu) * grid.nv;
    std::vector<double> hv(total);
    parallel_for(total, [&](std::int64_t idx) {
        const int j = static_cast<int>(idx / grid.nu);
        const int i = static_cast<int>(idx % grid.nu);
        hv[idx] = chart_curvature(m, grid.u_at(i), grid.v_at(j));
    });
    std::int64_t arg = 0;
    for (std::int64_t idx = 1; idx < total; ++idx)
        if (hv[idx] < hv[arg]) arg = idx;
    if (wu) *wu = grid.u_at(static_cast<int>(arg % grid.nu));
    if (wv) *wv = grid.v_at(static_cast<int>(arg / grid.nu));
    return hv[arg];
}

} // namespace

CalibrationReport calibrate_t(const ImmersionMap& m, const NormalVariation& var,
                              const GridSpec& grid, double t_init) {
    const ProfileSolution& sol = m.profile();
    const double alpha = sol.params.alpha;

    // frame condition the paper imposes on alpha0
    for (int i = 0; i <= 64; ++i) {
        const double v = -std::sqrt(var.alpha0) + 2.0 * std::sqrt(var.alpha0) * i / 64.0;
        if (w_alignment_sq(sol, v) < 0.5) {
            std::ostringstream os;
            os << "<dw, e_n>^2 < 1/2 at v = " << v << "; alpha0 too far from alpha";
            throw std::runtime_error(os.str());
        }
    }

    const double uc = var.ball.center_angle();
    const double delta = var.ball.radius_rad;
    GridSpec target = GridSpec::ball_shadow(grid.nu, grid.nv, uc,
                                            delta * std::sqrt(0.99), std::sqrt(alpha));
    target.margin = grid.margin;

    // precondition: positive analytic rate on the target region
    for (int i = 0; i < target.nu; i += 7)
        for (int j = 0; j < target.nv; j += 7)
            if (det_rate_analytic(sol, var, target.u_at(i), target.v_at(j)) <= 0.0)
                throw std::runtime_error("calibrate_t: analytic rate not positive on target");

    double t = t_init / var.l0;
    for (int halvings = 0; halvings <= 30; ++halvings, t *= 0.5) {
        const ImmersionMap pm = m.with_variation(var, t);
        CalibrationReport rep;
        rep.t = t;
        rep.halvings = halvings;
        double wu = 0, wv = 0;
        rep.min_target_h = grid_min_h(pm, target, &wu, &wv);
        if (rep.min_target_h <= 0.0) continue;
        rep.global_min_h = grid_min_h(pm, grid, &wu, &wv);
        if (rep.global_min_h < -1e-12) continue;
        rep.worst_u = wu;
        rep.worst_v = wv;
        return rep;
    }
    double wu = 0, wv = 0;
    const ImmersionMap pm = m.with_variation(var, t * 2.0);
    const double worst = grid_min_h(pm, grid, &wu, &wv);
    std::ostringstream os;
    os << "calibrate_t: no passing t after 30 halvings; worst H = " << worst << " at (u,v)=("
       << wu << ", " << wv << ")";
    throw std::runtime_error(os.str());
}

} // namespace kforge
