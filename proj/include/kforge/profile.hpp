#ifndef KFORGE_PROFILE_HPP
#define KFORGE_PROFILE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "kforge/smoothfn.hpp"

namespace kforge {

/// Parameters of the cylinder-capped sphere immersion. r is always the
/// squared norm of the y-block; alpha/beta/gamma are the transition radii of
/// the profile functions, eps shapes the psi family, alpha_tilde/beta_tilde
/// bound the interval where the ODE solution is used verbatim, blend_width is
/// the window over which rho is glued to its constant tail.
struct ProfileParams {
    int n = 2;
    int k = 1;
    double alpha = 0.2;
    double beta = 0.5;
    double gamma = 0.7;
    double eps = 0.05;
    double alpha_tilde = 0.1;   // default alpha/2
    double beta_tilde = 0.75;   // default (1+beta)/2
    double blend_width = 0.05;

    static ProfileParams defaults(int n = 2, int k = 1);
};

/// Every violated inequality, with the offending values; empty means ok.
std::vector<std::string> validate_params(const ProfileParams& p);

struct PsiPair {
    SmoothFn psi0;  // rises within [beta-eps, beta]
    SmoothFn psi1;  // rises within [alpha, alpha+eps]; carries the calibrated
                    // overshoot bump that drives rho to 1-2eps by alpha+eps
    double bump_amplitude = 0.0;
};

PsiPair build_psi_pair(const ProfileParams& p);

/// Solve 2 r rho' + rho = psi with rho(alpha)=0 by the integrating factor:
/// rho(r) = (1/sqrt(r)) int_alpha^r psi/(2 sqrt(s)) ds on [alpha, beta-w],
/// then C-infinity blend to the constant 1 over [beta-w, beta].
SmoothFn solve_rho(const SmoothFn& psi, const ProfileParams& p);

/// Delta = rho / sqrt(1 - r rho^2) on [0, hi_cap] (must stay below r=1).
SmoothFn delta_of(const SmoothFn& rho, double hi_cap);

struct T0Result {
    double t0 = 0.0;
    double residual = 0.0;  // G(t0)
    SmoothFn psi, rho, delta;
};

/// Bisect G(t) = 0.5*int_alpha^beta Delta_t - (sqrt(gamma)-sqrt(1-beta)) over
/// the family psi_t = (1-t) psi0 + t psi1. Requires the bracket
/// G(0) <= 0 <= G(1); throws with advice to shrink eps otherwise.
T0Result find_t0(const ProfileParams& p);

/// mu = (1/r)[nu - (sqrt(gamma) - 0.5 int_alpha^r Delta)^2] on [alpha,beta],
/// 0 below alpha, 1 above beta.
SmoothFn build_mu(const ProfileParams& p, const SmoothFn& nu, const SmoothFn& delta);

/// The solved function family defining one immersion.
struct ProfileSolution {
    ProfileParams params;
    SmoothFn nu, psi, rho, delta, mu, c1, c2, theta, psi_eff;
    double t0 = 0.0;
    double root_residual = 0.0;
};

ProfileSolution assemble_profile(const ProfileParams& p);

/// CSV columns: r,nu,psi,rho,delta,mu,c1,c2,theta,psi_eff (17 significant
/// digits, fixed order, deterministic).
void dump_profile_csv(const ProfileSolution& sol, std::ostream& os, int resolution);

} // namespace kforge

#endif
