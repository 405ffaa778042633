#ifndef KFORGE_JETS_HPP
#define KFORGE_JETS_HPP

#include <cmath>

namespace kforge {

/// Truncated Taylor jet of a scalar function of one variable: value and the
/// first three derivatives. Arithmetic propagates derivatives exactly, so any
/// expression built from jets has analytic derivatives up to order 3.
///
/// Functions obtained by formally differentiating another jet (deriv_shift)
/// carry a valid jet only up to order 2; their d3 slot is zero-filled.
struct Jet3 {
    double f = 0, d1 = 0, d2 = 0, d3 = 0;

    static Jet3 var(double x) { return {x, 1.0, 0.0, 0.0}; }
    static Jet3 con(double c) { return {c, 0.0, 0.0, 0.0}; }
};

inline Jet3 operator+(const Jet3& a, const Jet3& b) {
    return {a.f + b.f, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
}
inline Jet3 operator-(const Jet3& a, const Jet3& b) {
    return {a.f - b.f, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
}
inline Jet3 operator-(const Jet3& a) { return {-a.f, -a.d1, -a.d2, -a.d3}; }
inline Jet3 operator*(double s, const Jet3& a) {
    return {s * a.f, s * a.d1, s * a.d2, s * a.d3};
}
inline Jet3 operator*(const Jet3& a, double s) { return s * a; }
inline Jet3 operator+(const Jet3& a, double s) { return {a.f + s, a.d1, a.d2, a.d3}; }
inline Jet3 operator+(double s, const Jet3& a) { return a + s; }
inline Jet3 operator-(const Jet3& a, double s) { return {a.f - s, a.d1, a.d2, a.d3}; }
inline Jet3 operator-(double s, const Jet3& a) { return {s - a.f, -a.d1, -a.d2, -a.d3}; }

inline Jet3 operator*(const Jet3& a, const Jet3& b) {
    return {a.f * b.f,
            a.d1 * b.f + a.f * b.d1,
            a.d2 * b.f + 2.0 * a.d1 * b.d1 + a.f * b.d2,
            a.d3 * b.f + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.f * b.d3};
}

inline Jet3 recip(const Jet3& g) {
    const double r = 1.0 / g.f;
    const double r2 = r * r, r3 = r2 * r, r4 = r2 * r2;
    return {r,
            -g.d1 * r2,
            -g.d2 * r2 + 2.0 * g.d1 * g.d1 * r3,
            -g.d3 * r2 + 6.0 * g.d1 * g.d2 * r3 - 6.0 * g.d1 * g.d1 * g.d1 * r4};
}
inline Jet3 operator/(const Jet3& a, const Jet3& b) { return a * recip(b); }
inline Jet3 operator/(const Jet3& a, double s) { return (1.0 / s) * a; }
inline Jet3 operator/(double s, const Jet3& b) { return s * recip(b); }

inline Jet3 sqrt(const Jet3& a) {
    const double s = std::sqrt(a.f);
    const double s1 = a.d1 / (2.0 * s);
    const double s2 = (a.d2 - 2.0 * s1 * s1) / (2.0 * s);
    const double s3 = (a.d3 - 6.0 * s1 * s2) / (2.0 * s);
    return {s, s1, s2, s3};
}

inline Jet3 exp(const Jet3& a) {
    const double e = std::exp(a.f);
    return {e,
            a.d1 * e,
            (a.d2 + a.d1 * a.d1) * e,
            (a.d3 + 3.0 * a.d1 * a.d2 + a.d1 * a.d1 * a.d1) * e};
}

inline Jet3 sqr(const Jet3& a) { return a * a; }

/// Jet of f' given the jet of f (order 3 slot is not recoverable).
inline Jet3 deriv_shift(const Jet3& a) { return {a.d1, a.d2, a.d3, 0.0}; }

/// Affine reparametrization: jet of x -> f(s*x + t) given jet of f at s*x+t.
inline Jet3 affine_chain(const Jet3& a, double s) {
    return {a.f, a.d1 * s, a.d2 * s * s, a.d3 * s * s * s};
}

/// Faa di Bruno to order 3: jet of x -> g(h(x)) from the jet of g at h(x0)
/// and the jet of h at x0.
inline Jet3 compose(const Jet3& g, const Jet3& h) {
    return {g.f,
            g.d1 * h.d1,
            g.d2 * h.d1 * h.d1 + g.d1 * h.d2,
            g.d3 * h.d1 * h.d1 * h.d1 + 3.0 * g.d2 * h.d1 * h.d2 + g.d1 * h.d3};
}

inline Jet3 cos_jet(double x) {
    const double c = std::cos(x), s = std::sin(x);
    return {c, -s, -c, s};
}
inline Jet3 sin_jet(double x) {
    const double s = std::sin(x), c = std::cos(x);
    return {s, c, -s, -c};
}

/// Bivariate jet to second order: value, first and second partials in (u,v).
/// Only the ring operations are provided; unary functions are applied in the
/// univariate factors before lifting (all expressions used here are separable).
struct Jet2D {
    double f = 0, fu = 0, fv = 0, fuu = 0, fuv = 0, fvv = 0;

    static Jet2D con(double c) { return {c, 0, 0, 0, 0, 0}; }
    /// Lift a univariate u-jet (order >= 2).
    static Jet2D lift_u(const Jet3& a) { return {a.f, a.d1, 0, a.d2, 0, 0}; }
    /// Lift a univariate v-jet (order >= 2).
    static Jet2D lift_v(const Jet3& a) { return {a.f, 0, a.d1, 0, 0, a.d2}; }
};

inline Jet2D operator+(const Jet2D& a, const Jet2D& b) {
    return {a.f + b.f, a.fu + b.fu, a.fv + b.fv,
            a.fuu + b.fuu, a.fuv + b.fuv, a.fvv + b.fvv};
}
inline Jet2D operator-(const Jet2D& a, const Jet2D& b) {
    return {a.f - b.f, a.fu - b.fu, a.fv - b.fv,
            a.fuu - b.fuu, a.fuv - b.fuv, a.fvv - b.fvv};
}
inline Jet2D operator*(double s, const Jet2D& a) {
    return {s * a.f, s * a.fu, s * a.fv, s * a.fuu, s * a.fuv, s * a.fvv};
}
inline Jet2D operator*(const Jet2D& a, const Jet2D& b) {
    return {a.f * b.f,
            a.fu * b.f + a.f * b.fu,
            a.fv * b.f + a.f * b.fv,
            a.fuu * b.f + 2.0 * a.fu * b.fu + a.f * b.fuu,
            a.fuv * b.f + a.fu * b.fv + a.fv * b.fu + a.f * b.fuv,
            a.fvv * b.f + 2.0 * a.fv * b.fv + a.f * b.fvv};
}

} // namespace kforge

#endif
