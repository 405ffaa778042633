#include "kforge/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "kforge/parallel.hpp"

namespace kforge {

void SpherePoint::validate() const {
    const double s = x.squaredNorm() + y.squaredNorm();
    if (std::abs(s - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "SpherePoint off S^n: ||x||^2+||y||^2 = " << s;
        throw std::invalid_argument(os.str());
    }
}

Eigen::VectorXd evaluate(const ProfileSolution& sol, const SpherePoint& p) {
    const double th = sol.theta(p.r());
    Eigen::VectorXd out(p.x.size() + p.y.size());
    out.head(p.x.size()) = th * p.x;
    out.tail(p.y.size()) = p.y;
    return out;
}

Eigen::VectorXd gauss_map(const ProfileSolution& sol, const SpherePoint& p) {
    const double r = p.r();
    const double c1 = sol.c1(r), c2 = sol.c2(r);
    Eigen::VectorXd img = evaluate(sol, p);
    Eigen::VectorXd n(img.size());
    n.head(p.x.size()) = img.head(p.x.size()) / c2;
    n.tail(p.y.size()) = (c1 / c2) * img.tail(p.y.size());
    return n;
}

ShapeReport curvatures_analytic(const ProfileSolution& sol, double r) {
    const int n = sol.params.n, k = sol.params.k;
    const double inv_c2 = 1.0 / sol.c2(r);
    const double ratio = sol.c1(r) / sol.c2(r);
    const double last = sol.psi_eff(r);
    ShapeReport rep;
    rep.method = "analytic";
    rep.principal_curvatures.assign(k, inv_c2);
    rep.principal_curvatures.insert(rep.principal_curvatures.end(), n - k - 1, ratio);
    rep.principal_curvatures.push_back(last);
    double h = last, a2 = 0.0;
    for (int i = 0; i < k; ++i) h *= inv_c2;
    for (int i = 0; i < n - k - 1; ++i) h *= ratio;
    for (double ki : rep.principal_curvatures) a2 += ki * ki;
    std::sort(rep.principal_curvatures.begin(), rep.principal_curvatures.end());
    rep.gauss_kronecker = h;
    rep.a_norm = std::sqrt(a2);
    return rep;
}

ImmersionMap::ImmersionMap(std::shared_ptr<const ProfileSolution> sol)
    : sol_(std::move(sol)) {
    if (!sol_) throw std::invalid_argument("ImmersionMap: null profile");
    if (sol_->params.n != 2 || sol_->params.k != 1)
        throw std::invalid_argument("ImmersionMap chart requires n=2, k=1");
}

ImmersionMap ImmersionMap::with_variation(const NormalVariation& var, double t) const {
    for (const auto& av : stack_)
        if (supports_overlap(var.ball, av.var.ball))
            throw std::runtime_error("support collision: new variation ball overlaps the stack");
    ImmersionMap out = *this;
    out.stack_.push_back({var, t});
    return out;
}

std::array<Jet2D, 3> ImmersionMap::jets(double u, double v) const {
    const ProfileSolution& s = *sol_;
    const Jet3 rj{v * v, 2.0 * v, 2.0, 0.0};
    const Jet3 one_m_v2{1.0 - v * v, -2.0 * v, -2.0, 0.0};
    const Jet3 g = compose(s.theta.jet(rj.f), rj) * sqrt(one_m_v2);
    const Jet3 ic2 = recip(compose(s.c2.jet(rj.f), rj));
    const Jet3 q = g * ic2;
    const Jet3 p = Jet3::var(v) * compose(s.c1.jet(rj.f), rj) * ic2;
    const Jet3 cu = cos_jet(u), su = sin_jet(u);

    std::array<Jet2D, 3> out{Jet2D::lift_u(cu) * Jet2D::lift_v(g),
                             Jet2D::lift_u(su) * Jet2D::lift_v(g),
                             Jet2D::lift_v(Jet3::var(v))};
    for (const auto& av : stack_) {
        const double a = std::remainder(u - av.var.ball.center_angle(), kTwoPi);
        const double d = 0.5 * a * a;
        if (av.t == 0.0 || !av.var.in_support(d, v)) continue;
        const Jet3 lam = compose(av.var.lambda.jet(d), Jet3{d, a, 1.0, 0.0});
        const Jet3 sig = av.var.sigma.jet(v);
        const double sc = av.t * av.var.l0;
        out[0] = out[0] + sc * (Jet2D::lift_u(lam * cu) * Jet2D::lift_v(sig * q));
        out[1] = out[1] + sc * (Jet2D::lift_u(lam * su) * Jet2D::lift_v(sig * q));
        out[2] = out[2] + sc * (Jet2D::lift_u(lam) * Jet2D::lift_v(sig * p));
    }
    return out;
}

Eigen::Vector3d ImmersionMap::operator()(double u, double v) const {
    const auto J = jets(u, v);
    return {J[0].f, J[1].f, J[2].f};
}

Eigen::Vector3d ImmersionMap::base_normal(double u, double v) const {
    const ProfileSolution& s = *sol_;
    const double r = v * v;
    const double c2 = s.c2(r);
    const double q = s.theta(r) * std::sqrt(1.0 - r) / c2;
    const double p = v * s.c1(r) / c2;
    return {q * std::cos(u), q * std::sin(u), p};
}

namespace {

struct Forms {
    Eigen::Vector3d pos;
    Eigen::Vector3d normal;  // unit, oriented like the analytic base normal
    Eigen::Matrix2d I;
    Eigen::Matrix2d II;  // -<dd Phi, N>: unit sphere gets +1
};

Forms forms_from(const ImmersionMap& m, double u, double v,
                 const Eigen::Vector3d& pos, const Eigen::Vector3d& pu,
                 const Eigen::Vector3d& pv, const Eigen::Vector3d& puu,
                 const Eigen::Vector3d& puv, const Eigen::Vector3d& pvv) {
    Forms f;
    f.pos = pos;
    f.I << pu.dot(pu), pu.dot(pv), pu.dot(pv), pv.dot(pv);
    if (f.I.determinant() < 1e-14)
        throw std::runtime_error("chart degeneracy: first fundamental form singular");
    Eigen::Vector3d n = pu.cross(pv);
    if (n.dot(m.base_normal(u, v)) < 0.0) n = -n;
    n.normalize();
    f.normal = n;
    f.II << -puu.dot(n), -puv.dot(n), -puv.dot(n), -pvv.dot(n);
    return f;
}

Forms forms_analytic(const ImmersionMap& m, double u, double v) {
    const auto J = m.jets(u, v);
    const Eigen::Vector3d pos{J[0].f, J[1].f, J[2].f};
    const Eigen::Vector3d pu{J[0].fu, J[1].fu, J[2].fu};
    const Eigen::Vector3d pv{J[0].fv, J[1].fv, J[2].fv};
    const Eigen::Vector3d puu{J[0].fuu, J[1].fuu, J[2].fuu};
    const Eigen::Vector3d puv{J[0].fuv, J[1].fuv, J[2].fuv};
    const Eigen::Vector3d pvv{J[0].fvv, J[1].fvv, J[2].fvv};
    return forms_from(m, u, v, pos, pu, pv, puu, puv, pvv);
}

ShapeReport report_from(const Forms& f, const char* method) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> ges(f.II, f.I);
    ShapeReport rep;
    rep.method = method;
    rep.point_image = f.pos;
    rep.normal = f.normal;
    rep.principal_curvatures = {ges.eigenvalues()[0], ges.eigenvalues()[1]};
    rep.gauss_kronecker = f.II.determinant() / f.I.determinant();
    rep.a_norm = std::hypot(rep.principal_curvatures[0], rep.principal_curvatures[1]);
    return rep;
}

} // namespace

ShapeReport chart_shape_analytic(const ImmersionMap& m, double u, double v) {
    return report_from(forms_analytic(m, u, v), "analytic");
}

ShapeReport shape_operator_fd(const ImmersionMap& m, double u, double v, double h) {
    auto d1 = [](const Eigen::Vector3d& m2, const Eigen::Vector3d& m1,
                 const Eigen::Vector3d& p1, const Eigen::Vector3d& p2,
                 double hh) -> Eigen::Vector3d {
        return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * hh);
    };
    auto d2 = [](const Eigen::Vector3d& m2, const Eigen::Vector3d& m1,
                 const Eigen::Vector3d& f0, const Eigen::Vector3d& p1,
                 const Eigen::Vector3d& p2, double hh) -> Eigen::Vector3d {
        return (-m2 + 16.0 * m1 - 30.0 * f0 + 16.0 * p1 - p2) / (12.0 * hh * hh);
    };
    const Eigen::Vector3d f0 = m(u, v);
    const Eigen::Vector3d um2 = m(u - 2 * h, v), um1 = m(u - h, v), up1 = m(u + h, v),
                          up2 = m(u + 2 * h, v);
    const Eigen::Vector3d vm2 = m(u, v - 2 * h), vm1 = m(u, v - h), vp1 = m(u, v + h),
                          vp2 = m(u, v + 2 * h);
    const Eigen::Vector3d pu = d1(um2, um1, up1, up2, h);
    const Eigen::Vector3d pv = d1(vm2, vm1, vp1, vp2, h);
    const Eigen::Vector3d puu = d2(um2, um1, f0, up1, up2, h);
    const Eigen::Vector3d pvv = d2(vm2, vm1, f0, vp1, vp2, h);
    auto mixed = [&](double hh) -> Eigen::Vector3d {
        return (m(u + hh, v + hh) - m(u + hh, v - hh) - m(u - hh, v + hh) +
                m(u - hh, v - hh)) /
               (4.0 * hh * hh);
    };
    const Eigen::Vector3d puv = (4.0 * mixed(0.5 * h) - mixed(h)) / 3.0;
    return report_from(forms_from(m, u, v, f0, pu, pv, puu, puv, pvv),
                       "finite-difference");
}

int rank_estimate(const ImmersionMap& m, int samples) {
    if (samples < 100) throw std::invalid_argument("rank_estimate: samples must be >= 100");
    const int s = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(samples))));
    const double vmax = 1.0 - 1e-3;
    int min_rank = 2;
    for (int i = 0; i < s && min_rank > 0; ++i) {
        const double u = kTwoPi * (i + 0.5) / s;
        for (int j = 0; j < s; ++j) {
            const double v = -vmax + 2.0 * vmax * j / (s - 1);
            ShapeReport rep = shape_operator_fd(m, u, v);
            int rank = 0;
            for (double ki : rep.principal_curvatures)
                if (std::abs(ki) > 1e-7) ++rank;
            min_rank = std::min(min_rank, rank);
        }
    }
    return min_rank;
}

double chart_curvature(const ImmersionMap& m, double u, double v) {
    const Forms f = forms_analytic(m, u, v);
    return f.II.determinant() / f.I.determinant();
}

namespace {

ZeroSetReport classify(const ImmersionMap& m, const GridSpec& grid, double tol,
                       bool parallel) {
    grid.validate();
    const std::int64_t total = static_cast<std::int64_t>(grid.nu) * grid.nv;
    std::vector<double> hv(total);
    auto kernel = [&](std::int64_t idx) {
        const int j = static_cast<int>(idx / grid.nu);
        const int i = static_cast<int>(idx % grid.nu);
        hv[idx] = chart_curvature(m, grid.u_at(i), grid.v_at(j));
    };
    if (parallel)
        parallel_for(total, kernel);
    else
        for (std::int64_t idx = 0; idx < total; ++idx) kernel(idx);

    ZeroSetReport rep;
    rep.grid = grid;
    rep.tol = tol;
    rep.classes.resize(total);
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    for (std::int64_t idx = 0; idx < total; ++idx) {
        const int j = static_cast<int>(idx / grid.nu);
        const int i = static_cast<int>(idx % grid.nu);
        const double h = hv[idx];
        if (std::abs(h) <= tol) {
            rep.classes[idx] = 0;
            ++rep.zero_count;
            vmin = std::min(vmin, grid.v_at(j));
            vmax = std::max(vmax, grid.v_at(j));
        } else if (h > tol) {
            rep.classes[idx] = 1;
            ++rep.positive_count;
        } else {
            rep.classes[idx] = 2;
            ++rep.negative_count;
            if (rep.negative_points.size() < 1000)
                rep.negative_points.push_back({grid.u_at(i), grid.v_at(j), h});
        }
    }
    if (rep.zero_count > 0) {
        rep.zero_v_min = vmin;
        rep.zero_v_max = vmax;
    }
    return rep;
}

} // namespace

ZeroSetReport zero_set_scan(const ImmersionMap& m, const GridSpec& grid, double tol) {
    return classify(m, grid, tol, true);
}

ZeroSetReport zero_set_scan_serial(const ImmersionMap& m, const GridSpec& grid,
                                   double tol) {
    return classify(m, grid, tol, false);
}

} // namespace kforge
