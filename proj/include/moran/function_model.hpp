#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "moran/interval_set.hpp"

namespace moran {

/// Axis-aligned rectangle I x J, the internal currency of image computation.
template <class S>
struct Rect {
    Interval<S> x;
    Interval<S> y;

    bool contains(const S& px, const S& py) const { return x.contains(px) && y.contains(py); }

    friend bool operator==(const Rect& a, const Rect& b) { return a.x == b.x && a.y == b.y; }
};

// ---- interval arithmetic on endpoints (outward rounded on doubles) ----

template <class S>
Interval<S> iv_point(const S& v) {
    return {v, v};
}

template <class S>
Interval<S> iv_add(const Interval<S>& a, const Interval<S>& b) {
    return {round_down(a.lo + b.lo), round_up(a.hi + b.hi)};
}

template <class S>
Interval<S> iv_sub(const Interval<S>& a, const Interval<S>& b) {
    return {round_down(a.lo - b.hi), round_up(a.hi - b.lo)};
}

template <class S>
Interval<S> iv_neg(const Interval<S>& a) {
    return {-a.hi, -a.lo};
}

template <class S>
Interval<S> iv_mul(const Interval<S>& a, const Interval<S>& b) {
    const S c1 = a.lo * b.lo, c2 = a.lo * b.hi, c3 = a.hi * b.lo, c4 = a.hi * b.hi;
    const S lo = std::min(std::min(c1, c2), std::min(c3, c4));
    const S hi = std::max(std::max(c1, c2), std::max(c3, c4));
    return {round_down(lo), round_up(hi)};
}

template <class S>
Interval<S> iv_div(const Interval<S>& a, const Interval<S>& b) {
    if (b.lo <= S(0) && S(0) <= b.hi) throw DomainError("interval division by range meeting 0");
    const S c1 = a.lo / b.lo, c2 = a.lo / b.hi, c3 = a.hi / b.lo, c4 = a.hi / b.hi;
    const S lo = std::min(std::min(c1, c2), std::min(c3, c4));
    const S hi = std::max(std::max(c1, c2), std::max(c3, c4));
    return {round_down(lo), round_up(hi)};
}

/// Open set U as a finite union of open boxes (or the whole plane).
template <class S>
class DomainU {
public:
    static DomainU whole_plane() {
        DomainU u;
        u.all_ = true;
        return u;
    }

    static DomainU from_boxes(std::vector<Rect<S>> boxes) {
        for (const auto& b : boxes)
            if (!(b.x.lo < b.x.hi && b.y.lo < b.y.hi))
                throw InvalidInput("U: boxes must be nondegenerate open rectangles");
        DomainU u;
        u.boxes_ = std::move(boxes);
        return u;
    }

    bool is_whole_plane() const { return all_; }
    const std::vector<Rect<S>>& boxes() const { return boxes_; }

    bool contains_point(const S& x, const S& y) const {
        if (all_) return true;
        for (const auto& b : boxes_)
            if (b.x.lo < x && x < b.x.hi && b.y.lo < y && y < b.y.hi) return true;
        return false;
    }

    /// Exact test: closed rectangle inside the open union. Works by
    /// subtracting each open box from a worklist of closed leftovers
    /// (degenerate slivers included); covered iff nothing remains.
    bool contains_rect(const Rect<S>& r) const {
        if (all_) return true;
        std::vector<Rect<S>> work{r};
        for (const auto& b : boxes_) {
            std::vector<Rect<S>> next;
            for (const auto& piece : work) subtract_open_box(piece, b, next);
            work = std::move(next);
            if (work.empty()) return true;
        }
        return work.empty();
    }

    /// Pieces of r lying in U (closures of the per-box intersections;
    /// degenerate slivers carry no interior and are dropped). A superset of
    /// r ∩ U, exact when r does not straddle the union's boundary.
    std::vector<Rect<S>> clip_rect(const Rect<S>& r) const {
        if (all_) return {r};
        std::vector<Rect<S>> out;
        for (const auto& b : boxes_) {
            Rect<S> p{intersect(r.x, b.x), intersect(r.y, b.y)};
            if (p.x.lo < p.x.hi && p.y.lo < p.y.hi) out.push_back(std::move(p));
        }
        return out;
    }

private:
    bool all_ = false;
    std::vector<Rect<S>> boxes_;

    static void subtract_open_box(const Rect<S>& r, const Rect<S>& b, std::vector<Rect<S>>& out) {
        // no interior overlap: nothing removed
        if (r.x.hi <= b.x.lo || b.x.hi <= r.x.lo || r.y.hi <= b.y.lo || b.y.hi <= r.y.lo) {
            out.push_back(r);
            return;
        }
        if (r.x.lo <= b.x.lo) out.push_back({{r.x.lo, b.x.lo}, r.y});
        if (b.x.hi <= r.x.hi) out.push_back({{b.x.hi, r.x.hi}, r.y});
        const Interval<S> mid{std::max(r.x.lo, b.x.lo), std::min(r.x.hi, b.x.hi)};
        if (r.y.lo <= b.y.lo) out.push_back({mid, {r.y.lo, b.y.lo}});
        if (b.y.hi <= r.y.hi) out.push_back({mid, {b.y.hi, r.y.hi}});
    }
};

/// A C^1 function on U: point evaluators for f and its partials plus
/// rectangle range enclosures for all three. `range_f_exact` marks models
/// whose range_f returns the true range (all built-ins; their extrema sit at
/// rectangle corners), letting rect images skip subdivision.
template <class S>
struct FunctionModel {
    std::string name;
    bool exact_capable = false;
    bool range_f_exact = false;
    std::function<S(const S&, const S&)> eval;
    std::function<S(const S&, const S&)> dx;
    std::function<S(const S&, const S&)> dy;
    std::function<Interval<S>(const Rect<S>&)> range_f;
    std::function<Interval<S>(const Rect<S>&)> range_dx;
    std::function<Interval<S>(const Rect<S>&)> range_dy;
};

namespace models {

template <class S>
FunctionModel<S> add() {
    FunctionModel<S> m;
    m.name = "add";
    m.exact_capable = true;
    m.range_f_exact = true;
    m.eval = [](const S& x, const S& y) { return x + y; };
    m.dx = [](const S&, const S&) { return S(1); };
    m.dy = [](const S&, const S&) { return S(1); };
    m.range_f = [](const Rect<S>& r) { return iv_add(r.x, r.y); };
    m.range_dx = [](const Rect<S>&) { return iv_point(S(1)); };
    m.range_dy = [](const Rect<S>&) { return iv_point(S(1)); };
    return m;
}

template <class S>
FunctionModel<S> sub() {
    FunctionModel<S> m;
    m.name = "sub";
    m.exact_capable = true;
    m.range_f_exact = true;
    m.eval = [](const S& x, const S& y) { return x - y; };
    m.dx = [](const S&, const S&) { return S(1); };
    m.dy = [](const S&, const S&) { return S(-1); };
    m.range_f = [](const Rect<S>& r) { return iv_sub(r.x, r.y); };
    m.range_dx = [](const Rect<S>&) { return iv_point(S(1)); };
    m.range_dy = [](const Rect<S>&) { return iv_point(S(-1)); };
    return m;
}

template <class S>
FunctionModel<S> mul() {
    FunctionModel<S> m;
    m.name = "mul";
    m.exact_capable = true;
    m.range_f_exact = true; // bilinear: extrema at corners on any rectangle
    m.eval = [](const S& x, const S& y) { return x * y; };
    m.dx = [](const S&, const S& y) { return y; };
    m.dy = [](const S& x, const S&) { return x; };
    m.range_f = [](const Rect<S>& r) { return iv_mul(r.x, r.y); };
    m.range_dx = [](const Rect<S>& r) { return r.y; };
    m.range_dy = [](const Rect<S>& r) { return r.x; };
    return m;
}

/// x / y on rectangles with y bounded away from 0.
inline FunctionModel<double> divide() {
    FunctionModel<double> m;
    m.name = "div";
    m.exact_capable = false;
    m.range_f_exact = true; // monotone along each edge: extrema at corners
    m.eval = [](double x, double y) { return x / y; };
    m.dx = [](double, double y) { return 1.0 / y; };
    m.dy = [](double x, double y) { return -x / (y * y); };
    m.range_f = [](const Rect<double>& r) { return iv_div(r.x, r.y); };
    m.range_dx = [](const Rect<double>& r) {
        return iv_div(iv_point(1.0), r.y);
    };
    m.range_dy = [](const Rect<double>& r) {
        return iv_neg(iv_div(r.x, iv_mul(r.y, r.y)));
    };
    return m;
}

/// sqrt(x) + sqrt(y) on the closed positive quadrant.
inline FunctionModel<double> sqrt_sum() {
    FunctionModel<double> m;
    m.name = "sqrtsum";
    m.exact_capable = false;
    m.range_f_exact = true; // increasing in both variables
    m.eval = [](double x, double y) { return std::sqrt(x) + std::sqrt(y); };
    m.dx = [](double x, double) { return 1.0 / (2.0 * std::sqrt(x)); };
    m.dy = [](double, double y) { return 1.0 / (2.0 * std::sqrt(y)); };
    m.range_f = [](const Rect<double>& r) {
        if (r.x.lo < 0.0 || r.y.lo < 0.0)
            throw DomainError("sqrtsum range over negative rectangle");
        const double lo = round_down(round_down(std::sqrt(r.x.lo)) + round_down(std::sqrt(r.y.lo)));
        const double hi = round_up(round_up(std::sqrt(r.x.hi)) + round_up(std::sqrt(r.y.hi)));
        return Interval<double>{lo, hi};
    };
    m.range_dx = [](const Rect<double>& r) {
        if (r.x.lo <= 0.0) throw DomainError("sqrtsum dx range requires x > 0");
        return Interval<double>{round_down(0.5 / std::sqrt(r.x.hi)),
                                round_up(0.5 / std::sqrt(r.x.lo))};
    };
    m.range_dy = [](const Rect<double>& r) {
        if (r.y.lo <= 0.0) throw DomainError("sqrtsum dy range requires y > 0");
        return Interval<double>{round_down(0.5 / std::sqrt(r.y.hi)),
                                round_up(0.5 / std::sqrt(r.y.lo))};
    };
    return m;
}

namespace detail {

/// Horner evaluation of sum_i x^i * (sum_j c[i][j] y^j), point and interval forms.
template <class S>
S poly_eval(const std::vector<std::vector<S>>& c, const S& x, const S& y) {
    S acc(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        S row(0);
        for (auto jt = it->rbegin(); jt != it->rend(); ++jt) row = row * y + *jt;
        acc = acc * x + row;
    }
    return acc;
}

template <class S>
Interval<S> poly_range(const std::vector<std::vector<S>>& c, const Rect<S>& r) {
    Interval<S> acc = iv_point(S(0));
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        Interval<S> row = iv_point(S(0));
        for (auto jt = it->rbegin(); jt != it->rend(); ++jt)
            row = iv_add(iv_mul(row, r.y), iv_point(*jt));
        acc = iv_add(iv_mul(acc, r.x), row);
    }
    return acc;
}

template <class S>
std::vector<std::vector<S>> poly_dx(const std::vector<std::vector<S>>& c) {
    if (c.size() <= 1) return {{S(0)}};
    std::vector<std::vector<S>> d(c.begin() + 1, c.end());
    for (std::size_t i = 0; i < d.size(); ++i)
        for (auto& v : d[i]) v = v * S(static_cast<long long>(i + 1));
    return d;
}

template <class S>
std::vector<std::vector<S>> poly_dy(const std::vector<std::vector<S>>& c) {
    std::vector<std::vector<S>> d;
    d.reserve(c.size());
    for (const auto& row : c) {
        if (row.size() <= 1) {
            d.push_back({S(0)});
            continue;
        }
        std::vector<S> drow(row.begin() + 1, row.end());
        for (std::size_t j = 0; j < drow.size(); ++j)
            drow[j] = drow[j] * S(static_cast<long long>(j + 1));
        d.push_back(std::move(drow));
    }
    return d;
}

} // namespace detail

/// Polynomial model sum_{i,j} c[i][j] x^i y^j from a coefficient grid.
/// Range enclosures come from interval Horner evaluation; they are
/// conservative, so rect images fall back to sign-constancy subdivision.
template <class S>
FunctionModel<S> polynomial(std::vector<std::vector<S>> coeffs) {
    if (coeffs.empty()) throw InvalidInput("polynomial: empty coefficient grid");
    for (const auto& row : coeffs)
        if (row.empty()) throw InvalidInput("polynomial: empty coefficient row");
    auto cdx = detail::poly_dx(coeffs);
    auto cdy = detail::poly_dy(coeffs);
    FunctionModel<S> m;
    m.name = "poly";
    m.exact_capable = true;
    m.range_f_exact = false;
    m.eval = [coeffs](const S& x, const S& y) { return detail::poly_eval(coeffs, x, y); };
    m.dx = [cdx](const S& x, const S& y) { return detail::poly_eval(cdx, x, y); };
    m.dy = [cdy](const S& x, const S& y) { return detail::poly_eval(cdy, x, y); };
    m.range_f = [coeffs](const Rect<S>& r) { return detail::poly_range(coeffs, r); };
    m.range_dx = [cdx](const Rect<S>& r) { return detail::poly_range(cdx, r); };
    m.range_dy = [cdy](const Rect<S>& r) { return detail::poly_range(cdy, r); };
    return m;
}

/// Built-in lookup. div and sqrtsum exist only on the floating backend.
template <class S>
FunctionModel<S> by_name(const std::string& name) {
    if (name == "add") return add<S>();
    if (name == "sub") return sub<S>();
    if (name == "mul") return mul<S>();
    if constexpr (!is_exact_v<S>) {
        if (name == "div") return divide();
        if (name == "sqrtsum") return sqrt_sum();
    } else {
        if (name == "div" || name == "sqrtsum")
            throw InvalidInput("model '" + name + "' requires the float backend");
    }
    throw InvalidInput("unknown function model '" + name + "'");
}

} // namespace models

} // namespace moran
