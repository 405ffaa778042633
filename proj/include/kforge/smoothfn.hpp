#ifndef KFORGE_SMOOTHFN_HPP
#define KFORGE_SMOOTHFN_HPP

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "kforge/jets.hpp"

namespace kforge {

/// Piecewise C-infinity function of one real variable on a closed interval.
///
/// Each piece is either an exact constant (evaluates bit-exactly) or a
/// closed-form jet callable giving the value and derivatives up to order 3.
/// Instances are immutable after construction and safe to share across
/// threads.
class SmoothFn {
public:
    using JetFn = std::function<Jet3(double)>;

    double operator()(double r) const { return jet_at(r, 0).f; }
    /// f, f' or f'' at r (order 0..2; order 3 available where the piece
    /// provides it, best effort for derivative-shifted constructions).
    double deriv(double r, int order) const;
    Jet3 jet(double r) const { return jet_at(r, 3); }

    double lo() const { return breaks_.front(); }
    double hi() const { return breaks_.back(); }
    /// Interior breakpoints (piece boundaries, endpoints excluded).
    std::vector<double> breakpoints() const;

    // -- factories ----------------------------------------------------------
    static SmoothFn constant(double c, double lo = 0.0, double hi = 1.0);
    /// c0 + c1*r on [lo,hi].
    static SmoothFn affine(double c0, double c1, double lo, double hi);
    /// C-infinity step: lo below a, hi above b, strictly monotone on (a,b),
    /// built from the symmetric exponential glue g(x)=h(x)/(h(x)+h(1-x)),
    /// h(x)=exp(-1/x). Throws std::invalid_argument if a >= b.
    static SmoothFn step(double a, double b, double lo_val, double hi_val,
                         double dom_lo = 0.0, double dom_hi = 1.0);
    /// 0 outside [a0,b0], 1 on [a1,b1], monotone C-infinity shoulders.
    static SmoothFn plateau(double a0, double a1, double b1, double b0,
                            double dom_lo = 0.0, double dom_hi = 1.0);
    /// (1-t)*f0 + t*f1 (domains must agree).
    static SmoothFn mix(const SmoothFn& f0, const SmoothFn& f1, double t);
    static SmoothFn sum(const SmoothFn& f0, const SmoothFn& f1);
    static SmoothFn product(const SmoothFn& f0, const SmoothFn& f1);
    /// Antiderivative F(x) = int_a^x p(s) ds on [a,b]. Values come from a
    /// dense per-cell adaptive-Simpson table with cubic Hermite
    /// interpolation; derivatives are the analytic jet of the integrand.
    static SmoothFn antiderivative(JetFn integrand, double a, double b,
                                   int cells = 8192, double cell_tol = 1e-14);
    /// Assemble from explicit pieces. breaks has size pieces+1 and must be
    /// strictly increasing; jets[i] (or constants for null jets) covers
    /// [breaks[i], breaks[i+1]].
    static SmoothFn from_pieces(std::vector<double> breaks,
                                std::vector<JetFn> jets,
                                std::vector<std::pair<bool, double>> consts);

private:
    struct Piece {
        JetFn jet;          // null for constants
        bool is_const = false;
        double const_val = 0.0;
    };

    Jet3 jet_at(double r, int order) const;
    int piece_index(double r) const;

    std::vector<double> breaks_;                 // size pieces+1
    std::shared_ptr<const std::vector<Piece>> pieces_;
};

/// The C-infinity glue jet g(x), g=0 for x<=0, g=1 for x>=1, g(1/2)=1/2.
Jet3 glue_jet(double x);

/// f, f' or f'' at r (spec surface for SmoothFn::deriv).
double eval_deriv(const SmoothFn& f, double r, int order);

/// Deterministic adaptive-Simpson quadrature with absolute error <= tol.
/// Throws kforge::integrand_error (std::runtime_error) on a non-finite
/// integrand sample, reporting the abscissa.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol);
double integrate(const SmoothFn& f, double a, double b, double tol);

} // namespace kforge

#endif
