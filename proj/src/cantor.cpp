#include "kforge/cantor.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kforge {

bool CantorPlan::in_complement_of_balls(double u, int upto) const {
    for (int i = 0; i < upto; ++i) {
        const double a = std::remainder(u - balls[i].center_angle(), kTwoPi);
        if (std::abs(a) < balls[i].radius_rad) return false;
    }
    return true;
}

double CantorPlan::dist_to_fm(double u, int upto) const {
    for (int i = 0; i < upto; ++i) {
        const double a = std::remainder(u - balls[i].center_angle(), kTwoPi);
        if (std::abs(a) < balls[i].radius_rad) return balls[i].radius_rad - std::abs(a);
    }
    return 0.0;
}

CantorPlan plan_cantor(int n, int depth, double ratio, double delta0) {
    if (n != 2) throw std::invalid_argument("plan_cantor: only n = 2 (Cantor sets on S^1)");
    if (depth < 1) throw std::invalid_argument("plan_cantor: depth must be >= 1");
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("plan_cantor: ratio must lie in (0, 1)");

    CantorPlan plan;
    plan.delta0 = delta0;
    plan.ratio = ratio;
    const double half = plan.base_arc_len / 2.0;

    auto add_ball = [&plan](double center, double half_len, int d) {
        GeodesicBall b = GeodesicBall::on_circle(center, plan.shrink * half_len);
        const int idx = static_cast<int>(plan.balls.size());
        if (b.radius_rad > plan.delta0) {
            std::ostringstream os;
            os << "cantor plan: ball " << idx << " (depth " << d << ") has radius "
               << b.radius_rad << " > delta0 = " << plan.delta0
               << "; start deeper or shrink the base arc";
            throw std::invalid_argument(os.str());
        }
        plan.balls.push_back(std::move(b));
        plan.depths.push_back(d);
    };

    // ball 0: complement of the base arc
    const double pi = kTwoPi / 2.0;
    add_ball(pi, pi - half, 0);

    std::vector<std::pair<double, double>> intervals{{-half, half}};
    for (int d = 1; d <= depth; ++d) {
        std::vector<std::pair<double, double>> next;
        for (const auto& [lo, hi] : intervals) {
            const double len = hi - lo, mid = 0.5 * (lo + hi);
            const double rem = 0.5 * ratio * len;
            add_ball(mid, rem, d);
            next.push_back({lo, mid - rem});
            next.push_back({mid + rem, hi});
        }
        intervals = std::move(next);
    }

    for (size_t i = 0; i < plan.balls.size(); ++i)
        for (size_t j = i + 1; j < plan.balls.size(); ++j) {
            const double gap = std::abs(std::remainder(
                plan.balls[i].center_angle() - plan.balls[j].center_angle(), kTwoPi));
            if (gap - plan.balls[i].radius_rad - plan.balls[j].radius_rad < 1e-6) {
                std::ostringstream os;
                os << "cantor plan: balls " << i << " and " << j
                   << " are not disjoint with margin 1e-6";
                throw std::runtime_error(os.str());
            }
        }
    return plan;
}

ComposedStack compose_stack(std::shared_ptr<const ProfileSolution> sol,
                            const CantorPlan& plan, int upto, const StackParams& sp) {
    if (upto < 0 || upto > static_cast<int>(plan.balls.size()))
        throw std::invalid_argument("compose_stack: upto out of range");
    ComposedStack out{ImmersionMap(std::move(sol)), {}};
    const GridSpec cal_grid = GridSpec::full(sp.cal_nu, sp.cal_nv);
    for (int i = 0; i < upto; ++i) {
        NormalVariation var = build_variation(plan.balls[i], sp.l0, sp.alpha0,
                                              out.map.profile().params.beta, +1);
        try {
            CalibrationReport rep = calibrate_t(out.map, var, cal_grid, sp.t_init);
            var.t = rep.t;
            out.map = out.map.with_variation(var, rep.t);
            out.calibrations.push_back(rep);
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "compose_stack: ball " << i << ": " << e.what();
            throw std::runtime_error(os.str());
        }
    }
    return out;
}

FractalReport verify_fractal_zero_set(const ImmersionMap& m, const CantorPlan& plan,
                                      int upto, const GridSpec& grid, double tol) {
    const ZeroSetReport scan = zero_set_scan(m, grid, tol);
    const double sa = std::sqrt(m.profile().params.alpha);
    const double usp = grid.u_spacing(), vsp = grid.v_spacing();

    FractalReport rep;
    rep.upto = upto;
    rep.grid = grid;
    rep.tol = tol;
    rep.zero_count = scan.zero_count;
    rep.positive_count = scan.positive_count;
    rep.negative_count = scan.negative_count;

    for (int j = 0; j < grid.nv; ++j) {
        const double v = grid.v_at(j);
        for (int i = 0; i < grid.nu; ++i) {
            const double u = grid.u_at(i);
            const std::uint8_t cls = scan.classes[static_cast<std::int64_t>(j) * grid.nu + i];
            if (cls == 0) {
                const double cells = std::max(plan.dist_to_fm(u, upto) / usp,
                                              std::max(0.0, std::abs(v) - sa) / vsp);
                if (cells > rep.hausdorff_cells) {
                    rep.hausdorff_cells = cells;
                    rep.worst_u = u;
                    rep.worst_v = v;
                }
            }
            if (plan.in_complement_of_balls(u, upto) && std::abs(v) <= sa && cls != 0) {
                ++rep.flat_violations;
                rep.worst_u = u;
                rep.worst_v = v;
            }
            if (std::abs(v) <= sa - vsp) {
                for (int b = 0; b < upto; ++b) {
                    const double a =
                        std::remainder(u - plan.balls[b].center_angle(), kTwoPi);
                    if (std::abs(a) <= plan.balls[b].radius_rad - usp && cls != 1) {
                        ++rep.ball_violations;
                        rep.worst_u = u;
                        rep.worst_v = v;
                        break;
                    }
                }
            }
        }
    }
    rep.ok = rep.flat_violations == 0 && rep.ball_violations == 0 &&
             rep.negative_count == 0 && rep.hausdorff_cells <= 2.0;
    return rep;
}

} // namespace kforge
