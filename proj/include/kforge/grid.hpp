#ifndef KFORGE_GRID_HPP
#define KFORGE_GRID_HPP

#include <cmath>
#include <stdexcept>

namespace kforge {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Rectangular sampling grid on the (u, v) chart of S^2:
/// x = sqrt(1-v^2)(cos u, sin u), y = v. When the u-range is the full circle
/// the grid wraps (u1 excluded); v endpoints are included but clamped away
/// from the poles by `margin`.
struct GridSpec {
    int nu = 64;
    int nv = 64;
    double margin = 1e-3;
    double u0 = 0.0, u1 = kTwoPi;
    double v0 = -1.0, v1 = 1.0;

    bool wraps_u() const { return std::abs((u1 - u0) - kTwoPi) < 1e-12; }
    double v_lo() const { return std::max(v0, -1.0 + margin); }
    double v_hi() const { return std::min(v1, 1.0 - margin); }
    double u_at(int i) const {
        return wraps_u() ? u0 + kTwoPi * i / nu : u0 + (u1 - u0) * i / (nu - 1);
    }
    double v_at(int j) const { return v_lo() + (v_hi() - v_lo()) * j / (nv - 1); }
    double u_spacing() const { return wraps_u() ? kTwoPi / nu : (u1 - u0) / (nu - 1); }
    double v_spacing() const { return (v_hi() - v_lo()) / (nv - 1); }

    void validate() const {
        if (nu < 8 || nv < 8) throw std::invalid_argument("grid resolution must be >= 8");
        if (!(margin > 0.0 && margin < 0.1))
            throw std::invalid_argument("grid margin must lie in (0, 0.1)");
        if (!(u1 > u0 && v1 > v0)) throw std::invalid_argument("empty grid range");
    }

    static GridSpec full(int nu, int nv) {
        GridSpec g;
        g.nu = nu;
        g.nv = nv;
        return g;
    }
    /// The cylinder band |v| <= sqrt(alpha), all u.
    static GridSpec cylinder_band(int nu, int nv, double alpha) {
        GridSpec g = full(nu, nv);
        g.v0 = -std::sqrt(alpha);
        g.v1 = std::sqrt(alpha);
        return g;
    }
    /// Chart shadow of a geodesic ball at angle uc with radius delta,
    /// restricted to |v| <= v_abs.
    static GridSpec ball_shadow(int nu, int nv, double uc, double delta, double v_abs) {
        GridSpec g;
        g.nu = nu;
        g.nv = nv;
        g.u0 = uc - delta;
        g.u1 = uc + delta;
        g.v0 = -v_abs;
        g.v1 = v_abs;
        return g;
    }
};

} // namespace kforge

#endif
