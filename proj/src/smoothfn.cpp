#include "kforge/smoothfn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kforge {

Jet3 glue_jet(double x) {
    if (x <= 0.0) return Jet3::con(0.0);
    if (x >= 1.0) return Jet3::con(1.0);
    const Jet3 xj = Jet3::var(x);
    const Jet3 ha = exp(-recip(xj));          // exp(-1/x)
    const Jet3 hb = exp(-recip(1.0 - xj));    // exp(-1/(1-x))
    if (ha.f == 0.0 && hb.f == 0.0) return Jet3::con(x < 0.5 ? 0.0 : 1.0);
    return ha / (ha + hb);
}

double SmoothFn::deriv(double r, int order) const {
    if (order < 0 || order > 3) throw std::invalid_argument("derivative order must be 0..3");
    const Jet3 j = jet_at(r, order);
    switch (order) {
        case 0: return j.f;
        case 1: return j.d1;
        case 2: return j.d2;
        default: return j.d3;
    }
}

int SmoothFn::piece_index(double r) const {
    if (r < breaks_.front() || r > breaks_.back()) {
        std::ostringstream os;
        os << "argument " << r << " outside domain [" << breaks_.front() << ", "
           << breaks_.back() << "]";
        throw std::domain_error(os.str());
    }
    // pieces cover [b_i, b_{i+1}); the last piece is closed on the right
    const auto it = std::upper_bound(breaks_.begin() + 1, breaks_.end() - 1, r);
    return static_cast<int>(it - breaks_.begin()) - 1;
}

Jet3 SmoothFn::jet_at(double r, int /*order*/) const {
    const Piece& p = (*pieces_)[static_cast<size_t>(piece_index(r))];
    if (p.is_const) return Jet3::con(p.const_val);
    return p.jet(r);
}

std::vector<double> SmoothFn::breakpoints() const {
    if (breaks_.size() <= 2) return {};
    return std::vector<double>(breaks_.begin() + 1, breaks_.end() - 1);
}

SmoothFn SmoothFn::from_pieces(std::vector<double> breaks, std::vector<JetFn> jets,
                               std::vector<std::pair<bool, double>> consts) {
    if (breaks.size() != jets.size() + 1 || jets.size() != consts.size() || jets.empty())
        throw std::invalid_argument("inconsistent piece table");
    for (size_t i = 0; i + 1 < breaks.size(); ++i)
        if (!(breaks[i] < breaks[i + 1]))
            throw std::invalid_argument("breakpoints must be strictly increasing");
    auto pieces = std::make_shared<std::vector<Piece>>();
    for (size_t i = 0; i < jets.size(); ++i)
        pieces->push_back(Piece{std::move(jets[i]), consts[i].first, consts[i].second});
    SmoothFn f;
    f.breaks_ = std::move(breaks);
    f.pieces_ = std::move(pieces);
    return f;
}

SmoothFn SmoothFn::constant(double c, double lo, double hi) {
    return from_pieces({lo, hi}, {nullptr}, {{true, c}});
}

SmoothFn SmoothFn::affine(double c0, double c1, double lo, double hi) {
    return from_pieces({lo, hi},
                       {[c0, c1](double r) { return Jet3{c0 + c1 * r, c1, 0.0, 0.0}; }},
                       {{false, 0.0}});
}

SmoothFn SmoothFn::step(double a, double b, double lo_val, double hi_val,
                        double dom_lo, double dom_hi) {
    if (!(a < b)) throw std::invalid_argument("step: need a < b");
    if (!std::isfinite(lo_val) || !std::isfinite(hi_val))
        throw std::invalid_argument("step: plateau values must be finite");
    const double inv_w = 1.0 / (b - a);
    auto glue = [a, inv_w, lo_val, hi_val](double r) {
        const Jet3 g = affine_chain(glue_jet((r - a) * inv_w), inv_w);
        return lo_val + (hi_val - lo_val) * g;
    };
    std::vector<double> breaks;
    std::vector<JetFn> jets;
    std::vector<std::pair<bool, double>> consts;
    breaks.push_back(std::min(dom_lo, a));
    if (dom_lo < a) { jets.push_back(nullptr); consts.push_back({true, lo_val}); breaks.push_back(a); }
    jets.push_back(glue); consts.push_back({false, 0.0}); breaks.push_back(b);
    if (dom_hi > b) { jets.push_back(nullptr); consts.push_back({true, hi_val}); breaks.push_back(dom_hi); }
    return from_pieces(std::move(breaks), std::move(jets), std::move(consts));
}

SmoothFn SmoothFn::plateau(double a0, double a1, double b1, double b0,
                           double dom_lo, double dom_hi) {
    if (!(a0 <= a1 && a1 <= b1 && b1 <= b0))
        throw std::invalid_argument("plateau: need a0 <= a1 <= b1 <= b0");
    if (!(a1 < b1)) throw std::invalid_argument("plateau: empty top interval");
    std::vector<double> breaks;
    std::vector<JetFn> jets;
    std::vector<std::pair<bool, double>> consts;
    auto push = [&](double upto, JetFn j, bool is_c, double cv) {
        jets.push_back(std::move(j));
        consts.push_back({is_c, cv});
        breaks.push_back(upto);
    };
    breaks.push_back(std::min(dom_lo, a0));
    if (dom_lo < a0) push(a0, nullptr, true, 0.0);
    if (a0 < a1) {
        const double inv_w = 1.0 / (a1 - a0);
        push(a1, [a0, inv_w](double r) {
            return affine_chain(glue_jet((r - a0) * inv_w), inv_w);
        }, false, 0.0);
    }
    push(b1, nullptr, true, 1.0);
    if (b1 < b0) {
        const double inv_w = 1.0 / (b0 - b1);
        push(b0, [b0, inv_w](double r) {
            return affine_chain(glue_jet((b0 - r) * inv_w), -inv_w);
        }, false, 0.0);
    }
    if (dom_hi > b0) push(dom_hi, nullptr, true, 0.0);
    return from_pieces(std::move(breaks), std::move(jets), std::move(consts));
}

namespace {

std::vector<double> merged_breaks(const SmoothFn& f, const SmoothFn& g) {
    if (f.lo() != g.lo() || f.hi() != g.hi())
        throw std::invalid_argument("combining SmoothFns with different domains");
    std::vector<double> all{f.lo()};
    auto bf = f.breakpoints(), bg = g.breakpoints();
    std::vector<double> inner;
    std::merge(bf.begin(), bf.end(), bg.begin(), bg.end(), std::back_inserter(inner));
    inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
    all.insert(all.end(), inner.begin(), inner.end());
    all.push_back(f.hi());
    return all;
}

SmoothFn combine(const SmoothFn& f0, const SmoothFn& f1,
                 const std::function<Jet3(const Jet3&, const Jet3&)>& op) {
    auto breaks = merged_breaks(f0, f1);
    std::vector<SmoothFn::JetFn> jets;
    std::vector<std::pair<bool, double>> consts;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        jets.push_back([f0, f1, op](double r) { return op(f0.jet(r), f1.jet(r)); });
        consts.push_back({false, 0.0});
    }
    return SmoothFn::from_pieces(std::move(breaks), std::move(jets), std::move(consts));
}

} // namespace

SmoothFn SmoothFn::mix(const SmoothFn& f0, const SmoothFn& f1, double t) {
    return combine(f0, f1, [t](const Jet3& a, const Jet3& b) {
        return (1.0 - t) * a + t * b;
    });
}

SmoothFn SmoothFn::sum(const SmoothFn& f0, const SmoothFn& f1) {
    return combine(f0, f1, [](const Jet3& a, const Jet3& b) { return a + b; });
}

SmoothFn SmoothFn::product(const SmoothFn& f0, const SmoothFn& f1) {
    return combine(f0, f1, [](const Jet3& a, const Jet3& b) { return a * b; });
}

// ---------------------------------------------------------------------------
// quadrature

namespace {

struct SimpsonCtx {
    const std::function<double(double)>* f;
    int depth_limit = 60;
};

double sample(const SimpsonCtx& ctx, double x) {
    const double y = (*ctx.f)(x);
    if (!std::isfinite(y)) {
        std::ostringstream os;
        os << "non-finite integrand sample at x = " << x;
        throw std::runtime_error(os.str());
    }
    return y;
}

double simpson_rec(const SimpsonCtx& ctx, double a, double b, double fa, double fm,
                   double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = sample(ctx, lm), frm = sample(ctx, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth >= ctx.depth_limit || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(ctx, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_rec(ctx, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("integrate: tol must be positive");
    if (a == b) return 0.0;
    SimpsonCtx ctx{&f};
    const double fa = sample(ctx, a), fb = sample(ctx, b);
    const double m = 0.5 * (a + b);
    const double fm = sample(ctx, m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(ctx, a, b, fa, fm, fb, whole, tol, 0);
}

double integrate(const SmoothFn& f, double a, double b, double tol) {
    // split at breakpoints so the recursion never straddles a glue corner
    if (a > b) return -integrate(f, b, a, tol);
    std::vector<double> cuts{a};
    for (double c : f.breakpoints())
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    double total = 0.0;
    const double tol_each = tol / static_cast<double>(cuts.size() - 1);
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        total += integrate([&f](double x) { return f(x); }, cuts[i], cuts[i + 1], tol_each);
    return total;
}

double eval_deriv(const SmoothFn& f, double r, int order) { return f.deriv(r, order); }

// ---------------------------------------------------------------------------
// tabulated antiderivative

namespace {

struct CumTable {
    std::vector<double> x, val, slope;

    double value(double r) const {
        const auto it = std::upper_bound(x.begin() + 1, x.end() - 1, r);
        const size_t i = static_cast<size_t>(it - x.begin()) - 1;
        const double h = x[i + 1] - x[i];
        const double s = (r - x[i]) / h;
        const double s2 = s * s, s3 = s2 * s;
        return val[i] * (2 * s3 - 3 * s2 + 1) + val[i + 1] * (3 * s2 - 2 * s3) +
               h * (slope[i] * (s3 - 2 * s2 + s) + slope[i + 1] * (s3 - s2));
    }
};

} // namespace

SmoothFn SmoothFn::antiderivative(JetFn integrand, double a, double b, int cells,
                                  double cell_tol) {
    if (!(a < b) || cells < 1) throw std::invalid_argument("antiderivative: bad interval");
    auto table = std::make_shared<CumTable>();
    auto p = std::make_shared<JetFn>(std::move(integrand));
    const double h = (b - a) / cells;
    table->x.resize(static_cast<size_t>(cells) + 1);
    table->val.resize(table->x.size());
    table->slope.resize(table->x.size());
    auto pv = [&p](double x) { return (*p)(x).f; };
    table->x[0] = a;
    table->val[0] = 0.0;
    table->slope[0] = pv(a);
    double acc = 0.0;
    for (int i = 1; i <= cells; ++i) {
        const double xi = (i == cells) ? b : a + h * i;
        acc += integrate(pv, table->x[static_cast<size_t>(i) - 1], xi, cell_tol);
        table->x[static_cast<size_t>(i)] = xi;
        table->val[static_cast<size_t>(i)] = acc;
        table->slope[static_cast<size_t>(i)] = pv(xi);
    }
    auto jet = [table, p](double r) {
        const Jet3 q = (*p)(r);
        return Jet3{table->value(r), q.f, q.d1, q.d2};
    };
    return from_pieces({a, b}, {jet}, {{false, 0.0}});
}

} // namespace kforge
