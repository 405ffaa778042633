#include "kforge/profile.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace kforge {

ProfileParams ProfileParams::defaults(int n, int k) {
    ProfileParams p;
    p.n = n;
    p.k = k;
    p.alpha_tilde = p.alpha / 2.0;
    p.beta_tilde = (1.0 + p.beta) / 2.0;
    return p;
}

std::vector<std::string> validate_params(const ProfileParams& p) {
    std::vector<std::string> v;
    auto fail = [&v](const std::string& msg) { v.push_back(msg); };
    std::ostringstream os;
    auto num = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", x);
        return std::string(buf);
    };
    if (p.n < 2) fail("n >= 2 fails (n=" + std::to_string(p.n) + ")");
    if (p.k < 1 || p.k > p.n - 1)
        fail("1 <= k <= n-1 fails (k=" + std::to_string(p.k) + ", n=" + std::to_string(p.n) + ")");
    if (!(p.alpha > 0.0)) fail("alpha>0 fails (" + num(p.alpha) + ")");
    if (!(p.alpha < 0.5)) fail("alpha<1/2 fails (" + num(p.alpha) + ")");
    if (!(p.alpha < p.gamma && p.gamma < 1.0 - p.alpha))
        fail("alpha<gamma<1-alpha fails (alpha=" + num(p.alpha) + ", gamma=" + num(p.gamma) + ")");
    if (!(p.alpha < p.beta && p.beta < p.gamma))
        fail("alpha<beta<gamma fails (alpha=" + num(p.alpha) + ", beta=" + num(p.beta) +
             ", gamma=" + num(p.gamma) + ")");
    if (!(p.beta > 1.0 - p.gamma))
        fail("beta>1-gamma fails (" + num(p.beta) + " <= " + num(1.0 - p.gamma) + ")");
    if (!(p.eps > 0.0 && p.eps < (p.beta - p.alpha) / 2.0))
        fail("0<eps<(beta-alpha)/2 fails (eps=" + num(p.eps) + ")");
    if (!(p.alpha_tilde > 0.0 && p.alpha_tilde < p.alpha))
        fail("0<alpha_tilde<alpha fails (" + num(p.alpha_tilde) + ")");
    if (!(p.beta < p.beta_tilde && p.beta_tilde < 1.0))
        fail("beta<beta_tilde<1 fails (" + num(p.beta_tilde) + ")");
    if (!(p.blend_width > 0.0 && p.blend_width < p.beta - p.alpha))
        fail("0<blend_width<beta-alpha fails (" + num(p.blend_width) + ")");
    return v;
}

namespace {

void require_valid(const ProfileParams& p) {
    auto v = validate_params(p);
    if (!v.empty()) {
        std::string msg = "invalid profile parameters:";
        for (const auto& s : v) msg += " [" + s + "]";
        throw std::invalid_argument(msg);
    }
}

// raw integrating-factor solution evaluated at one point
double rho_raw_at(const SmoothFn& psi, double alpha, double r) {
    if (r <= alpha) return 0.0;
    const double val = integrate([&psi](double s) { return psi(s) / (2.0 * std::sqrt(s)); },
                                 alpha, r, 1e-13);
    return val / std::sqrt(r);
}

} // namespace

PsiPair build_psi_pair(const ProfileParams& p) {
    require_valid(p);
    if (!(p.eps < (p.beta - p.alpha) / 2.0))
        throw std::invalid_argument("eps too large for the psi rise windows");
    const double a = p.alpha, e = p.eps;
    SmoothFn psi0 = SmoothFn::step(p.beta - e, p.beta, 0.0, 1.0);
    SmoothFn base = SmoothFn::step(a, a + 0.45 * e, 0.0, 1.0);
    SmoothFn bump = SmoothFn::plateau(a, a + 0.4 * e, a + 0.6 * e, a + e);

    // Scale the bump so the ODE solution reaches 1-2eps by alpha+eps (the
    // property the continuity argument needs from psi1). rho is linear in
    // psi, so the amplitude solves a single linear equation.
    const double rho_base = rho_raw_at(base, a, a + e);
    const double rho_bump = rho_raw_at(bump, a, a + e);
    if (!(rho_bump > 0.0)) throw std::runtime_error("degenerate psi1 bump");
    const double amp = (1.0 - 2.0 * e - rho_base) / rho_bump;
    SmoothFn psi1 = SmoothFn::sum(base, SmoothFn::product(bump, SmoothFn::constant(amp)));
    return PsiPair{std::move(psi0), std::move(psi1), amp};
}

SmoothFn solve_rho(const SmoothFn& psi, const ProfileParams& p) {
    const double a = p.alpha, b = p.beta, w = p.blend_width;
    SmoothFn cum = SmoothFn::antiderivative(
        [psi](double s) { return psi.jet(s) * recip(2.0 * sqrt(Jet3::var(s))); }, a, b);
    auto raw = [cum](double r) { return cum.jet(r) * recip(sqrt(Jet3::var(r))); };
    const double raw_end = raw(b - w).f;
    if (raw_end > 1.0) {
        std::ostringstream os;
        os << "rho blend error: raw rho(" << b - w << ") = " << raw_end << " exceeds 1";
        throw std::runtime_error(os.str());
    }
    SmoothFn blend_step = SmoothFn::step(b - w, b, 0.0, 1.0);
    auto blended = [raw, blend_step](double r) {
        const Jet3 q = raw(r);
        const Jet3 g = blend_step.jet(r);
        return q + g * (1.0 - q);
    };
    return SmoothFn::from_pieces({0.0, a, b - w, b, 1.0},
                                 {nullptr, raw, blended, nullptr},
                                 {{true, 0.0}, {false, 0.0}, {false, 0.0}, {true, 1.0}});
}

SmoothFn delta_of(const SmoothFn& rho, double hi_cap) {
    if (!(hi_cap > rho.lo() && hi_cap < 1.0))
        throw std::invalid_argument("delta_of: cap must lie inside (lo, 1)");
    std::vector<double> breaks{rho.lo()};
    for (double c : rho.breakpoints())
        if (c < hi_cap) breaks.push_back(c);
    breaks.push_back(hi_cap);
    std::vector<SmoothFn::JetFn> jets;
    std::vector<std::pair<bool, double>> consts;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
        if (rho(mid) == 0.0 && rho.deriv(mid, 1) == 0.0) {
            jets.push_back(nullptr);
            consts.push_back({true, 0.0});
        } else {
            jets.push_back([rho](double r) {
                const Jet3 q = rho.jet(r);
                const Jet3 denom = 1.0 - Jet3::var(r) * sqr(q);
                if (denom.f <= 0.0) {
                    std::ostringstream os;
                    os << "delta singularity: 1 - r rho^2 <= 0 at r = " << r;
                    throw std::runtime_error(os.str());
                }
                return q * recip(sqrt(denom));
            });
            consts.push_back({false, 0.0});
        }
    }
    return SmoothFn::from_pieces(std::move(breaks), std::move(jets), std::move(consts));
}

T0Result find_t0(const ProfileParams& p) {
    require_valid(p);
    const PsiPair pair = build_psi_pair(p);
    const double target = std::sqrt(p.gamma) - std::sqrt(1.0 - p.beta);
    struct Eval {
        SmoothFn psi, rho, delta;
        double g;
    };
    auto eval = [&](double t) {
        SmoothFn psi = SmoothFn::mix(pair.psi0, pair.psi1, t);
        SmoothFn rho = solve_rho(psi, p);
        SmoothFn delta = delta_of(rho, p.beta_tilde);
        const double g = 0.5 * integrate(delta, p.alpha, p.beta, 1e-12) - target;
        return Eval{std::move(psi), std::move(rho), std::move(delta), g};
    };
    const double tol = 1e-9;
    Eval lo = eval(0.0);
    if (std::abs(lo.g) <= tol) return {0.0, lo.g, lo.psi, lo.rho, lo.delta};
    Eval hi = eval(1.0);
    if (std::abs(hi.g) <= tol) return {1.0, hi.g, hi.psi, hi.rho, hi.delta};
    if (lo.g > 0.0 || hi.g < 0.0) {
        std::ostringstream os;
        os << "find_t0: no sign bracket, G(0)=" << lo.g << ", G(1)=" << hi.g
           << "; try a smaller eps";
        throw std::runtime_error(os.str());
    }
    double a = 0.0, b = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        Eval m = eval(mid);
        if (std::abs(m.g) <= tol)
            return {mid, m.g, m.psi, m.rho, m.delta};
        if (m.g < 0.0)
            a = mid;
        else
            b = mid;
    }
    throw std::runtime_error("find_t0: bisection did not converge in 200 iterations");
}

SmoothFn build_mu(const ProfileParams& p, const SmoothFn& nu, const SmoothFn& delta) {
    const double a = p.alpha, b = p.beta;
    const double sg = std::sqrt(p.gamma);
    SmoothFn cum = SmoothFn::antiderivative([delta](double s) { return delta.jet(s); }, a, b);
    // sqrt(gamma) - J/2 must stay nonnegative or theta^2 goes negative
    for (int i = 0; i <= 1000; ++i) {
        const double r = a + (b - a) * i / 1000.0;
        if (sg - 0.5 * cum(r) < 0.0) {
            std::ostringstream os;
            os << "geometry error: sqrt(gamma) - 0.5 int Delta < 0 at r = " << r;
            throw std::runtime_error(os.str());
        }
    }
    auto mid = [nu, cum, sg](double r) {
        const Jet3 inner = sg - 0.5 * cum.jet(r);
        return (nu.jet(r) - sqr(inner)) * recip(Jet3::var(r));
    };
    return SmoothFn::from_pieces({0.0, a, b, 1.0}, {nullptr, mid, nullptr},
                                 {{true, 0.0}, {false, 0.0}, {true, 1.0}});
}

ProfileSolution assemble_profile(const ProfileParams& p) {
    require_valid(p);
    const double a = p.alpha, b = p.beta, g = p.gamma;
    SmoothFn nu = SmoothFn::step(a, b, g, 1.0);
    T0Result t0r = find_t0(p);
    SmoothFn mu = build_mu(p, nu, t0r.delta);

    auto c1_mid = [mu, nu](double r) {
        const Jet3 m = mu.jet(r), v = nu.jet(r);
        return m + Jet3::var(r) * deriv_shift(m) - deriv_shift(v);
    };
    SmoothFn c1 = SmoothFn::from_pieces({0.0, a, b, 1.0}, {nullptr, c1_mid, nullptr},
                                        {{true, 0.0}, {false, 0.0}, {true, 1.0}});
    auto c2_mid = [mu, nu, c1_mid](double r) {
        const Jet3 m = mu.jet(r), v = nu.jet(r);
        return sqrt(v + Jet3::var(r) * (sqr(c1_mid(r)) - m));
    };
    SmoothFn c2 = SmoothFn::from_pieces({0.0, a, b, 1.0}, {nullptr, c2_mid, nullptr},
                                        {{true, std::sqrt(g)}, {false, 0.0}, {true, 1.0}});
    auto theta_lo = [g](double r) { return sqrt(g * recip(1.0 - Jet3::var(r))); };
    auto theta_mid = [mu, nu](double r) {
        const Jet3 rr = Jet3::var(r);
        return sqrt((nu.jet(r) - rr * mu.jet(r)) * recip(1.0 - rr));
    };
    SmoothFn theta = SmoothFn::from_pieces({0.0, a, b, 1.0}, {theta_lo, theta_mid, nullptr},
                                           {{false, 0.0}, {false, 0.0}, {true, 1.0}});

    // last principal curvature 2 r rho' + rho, through the better-conditioned
    // rho route (equals c1/c2 analytically; the equality is a tested invariant)
    const SmoothFn rho = t0r.rho;
    std::vector<double> eff_breaks{0.0};
    for (double c : rho.breakpoints()) eff_breaks.push_back(c);
    eff_breaks.push_back(1.0);
    std::vector<SmoothFn::JetFn> eff_jets;
    std::vector<std::pair<bool, double>> eff_consts;
    for (size_t i = 0; i + 1 < eff_breaks.size(); ++i) {
        const double mid = 0.5 * (eff_breaks[i] + eff_breaks[i + 1]);
        if (mid < a) {
            eff_jets.push_back(nullptr);
            eff_consts.push_back({true, 0.0});
        } else if (mid > b) {
            eff_jets.push_back(nullptr);
            eff_consts.push_back({true, 1.0});
        } else {
            eff_jets.push_back([rho](double r) {
                const Jet3 q = rho.jet(r);
                return 2.0 * Jet3::var(r) * deriv_shift(q) + q;
            });
            eff_consts.push_back({false, 0.0});
        }
    }
    SmoothFn psi_eff = SmoothFn::from_pieces(std::move(eff_breaks), std::move(eff_jets),
                                             std::move(eff_consts));

    return ProfileSolution{p,
                           std::move(nu),
                           t0r.psi,
                           rho,
                           t0r.delta,
                           std::move(mu),
                           std::move(c1),
                           std::move(c2),
                           std::move(theta),
                           std::move(psi_eff),
                           t0r.t0,
                           t0r.residual};
}

void dump_profile_csv(const ProfileSolution& sol, std::ostream& os, int resolution) {
    os << "r,nu,psi,rho,delta,mu,c1,c2,theta,psi_eff\n";
    char buf[512];
    for (int i = 0; i < resolution; ++i) {
        const double r = static_cast<double>(i) / (resolution - 1);
        const double rho = sol.rho(r);
        const double denom = 1.0 - r * rho * rho;
        const double delta = denom > 0.0 ? rho / std::sqrt(denom)
                                         : std::numeric_limits<double>::infinity();
        std::snprintf(buf, sizeof buf,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r,
                      sol.nu(r), sol.psi(r), rho, delta, sol.mu(r), sol.c1(r), sol.c2(r),
                      sol.theta(r), sol.psi_eff(r));
        os << buf;
    }
}

} // namespace kforge
