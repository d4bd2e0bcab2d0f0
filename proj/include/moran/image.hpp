#pragma once

#include <cstdint>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "moran/function_model.hpp"
#include "moran/moran_set.hpp"

namespace moran {

template <class S>
struct ImageOptions {
    S merge_eps = S(0);  // set-merge tolerance (floating backend only)
    S range_tol = S(0);  // enclosure tolerance for the subdivision fallback
    int max_subdivision_depth = 40;
    Caps caps{};
    unsigned threads = 1;

    static ImageOptions defaults() {
        ImageOptions opt;
        if constexpr (!is_exact_v<S>) {
            opt.merge_eps = 1e-12;
            opt.range_tol = 1e-10;
        }
        return opt;
    }
};

template <class S>
struct RectImage {
    Interval<S> box;
    bool exact = true;
};

namespace detail {

template <class S>
Interval<S> iv_abs(const Interval<S>& a) {
    if (a.lo >= S(0)) return a;
    if (a.hi <= S(0)) return {-a.hi, -a.lo};
    return {S(0), std::max(-a.lo, a.hi)};
}

template <class S>
int range_sign(const Interval<S>& r) {
    if (r.lo >= S(0)) return 1;
    if (r.hi <= S(0)) return -1;
    return 0;
}

template <class S>
RectImage<S> rect_image_rec(const FunctionModel<S>& f, const Rect<S>& r,
                            const ImageOptions<S>& opt, int depth) {
    const int sx = range_sign(f.range_dx(r));
    const int sy = range_sign(f.range_dy(r));
    if (sx != 0 && sy != 0) {
        const S& x_min = sx > 0 ? r.x.lo : r.x.hi;
        const S& x_max = sx > 0 ? r.x.hi : r.x.lo;
        const S& y_min = sy > 0 ? r.y.lo : r.y.hi;
        const S& y_max = sy > 0 ? r.y.hi : r.y.lo;
        return {{round_down(f.eval(x_min, y_min)), round_up(f.eval(x_max, y_max))}, true};
    }
    const Interval<S> enc = f.range_f(r);
    if (depth >= opt.max_subdivision_depth) return {enc, false};
    if (!(opt.range_tol < enc.length())) return {enc, false};
    // split the axis whose partial blocks sign-constancy (longer side on ties)
    bool split_x;
    if (sx == 0 && sy != 0)
        split_x = true;
    else if (sy == 0 && sx != 0)
        split_x = false;
    else
        split_x = !(r.x.length() < r.y.length());
    Rect<S> a = r, b = r;
    if (split_x) {
        const S mid = (r.x.lo + r.x.hi) / S(2);
        a.x.hi = mid;
        b.x.lo = mid;
    } else {
        const S mid = (r.y.lo + r.y.hi) / S(2);
        a.y.hi = mid;
        b.y.lo = mid;
    }
    const RectImage<S> ia = rect_image_rec(f, a, opt, depth + 1);
    const RectImage<S> ib = rect_image_rec(f, b, opt, depth + 1);
    // f is continuous and the sub-rectangles share a face, so the union is an interval
    return {{std::min(ia.box.lo, ib.box.lo), std::max(ia.box.hi, ib.box.hi)},
            ia.exact && ib.exact};
}

} // namespace detail

/// Range of f over a rectangle. Exact (corner-attained) whenever the partials
/// have constant sign on r; built-ins short-circuit through their exact
/// range_f. Models without exact ranges are bisected until sign-constancy,
/// tolerance, or the depth limit; the `exact` flag records which happened.
template <class S>
RectImage<S> rect_image(const FunctionModel<S>& f, const Rect<S>& r,
                        const ImageOptions<S>& opt = ImageOptions<S>::defaults()) {
    if (f.range_f_exact) return {f.range_f(r), true};
    return detail::rect_image_rec(f, r, opt, 0);
}

/// Range of |dy f / dx f| over a rectangle via interval enclosures.
/// nullopt when the dx enclosure meets 0 (ratio unbounded) or the partials
/// are undefined somewhere on r.
template <class S>
std::optional<Interval<S>> ratio_range(const FunctionModel<S>& f, const Rect<S>& r) {
    Interval<S> rdx, rdy;
    try {
        rdx = f.range_dx(r);
        rdy = f.range_dy(r);
    } catch (const DomainError&) {
        return std::nullopt;
    }
    if (rdx.lo <= S(0) && S(0) <= rdx.hi) return std::nullopt; // ratio unbounded
    return iv_div(detail::iv_abs(rdy), detail::iv_abs(rdx));
}

template <class S>
struct PairImage {
    IntervalSet<S> set;
    bool exact = true;
};

namespace detail {

template <class S>
IntervalSet<S> merge_row(std::vector<Interval<S>>& row, const S& eps) {
    bool sorted = true;
    for (std::size_t i = 1; i < row.size(); ++i) {
        if (row[i].lo < row[i - 1].lo) {
            sorted = false;
            break;
        }
    }
    if (!sorted) return IntervalSet<S>::normalize(std::move(row), eps);
    std::vector<Interval<S>> merged;
    merged.reserve(row.size());
    for (auto& iv : row) {
        if (!merged.empty() && iv.lo <= merged.back().hi + eps) {
            if (merged.back().hi < iv.hi) merged.back().hi = std::move(iv.hi);
        } else {
            merged.push_back(std::move(iv));
        }
    }
    return IntervalSet<S>::from_canonical(std::move(merged));
}

template <class S>
PairImage<S> pair_image_rows(const FunctionModel<S>& f, const std::vector<Interval<S>>& A,
                             std::size_t row_begin, std::size_t row_end,
                             const std::vector<Interval<S>>& B, const DomainU<S>& U,
                             const ImageOptions<S>& opt) {
    UnionAccumulator<S> acc(opt.merge_eps);
    bool exact = true;
    std::vector<Interval<S>> row;
    row.reserve(B.size());
    for (std::size_t i = row_begin; i < row_end; ++i) {
        row.clear();
        for (const auto& b : B) {
            const Rect<S> r{A[i], b};
            if (U.is_whole_plane()) {
                const RectImage<S> ri = rect_image(f, r, opt);
                exact = exact && ri.exact;
                row.push_back(ri.box);
            } else {
                for (const auto& piece : U.clip_rect(r)) {
                    const RectImage<S> ri = rect_image(f, piece, opt);
                    exact = exact && ri.exact;
                    row.push_back(ri.box);
                }
            }
        }
        if (!row.empty()) acc.add(merge_row(row, opt.merge_eps));
    }
    return {acc.finish(), exact};
}

} // namespace detail

/// f(A, B) restricted to U for two interval lists: the canonical union of
/// rect images over all pairs meeting U. Rows are merged as they stream so
/// memory tracks the union, not the pair count. Deterministic for any
/// thread count (canonical unions are associative).
template <class S>
PairImage<S> pair_image(const FunctionModel<S>& f, const std::vector<Interval<S>>& A,
                        const std::vector<Interval<S>>& B, const DomainU<S>& U,
                        const ImageOptions<S>& opt = ImageOptions<S>::defaults()) {
    const std::int64_t pairs =
        static_cast<std::int64_t>(A.size()) * static_cast<std::int64_t>(B.size());
    if (B.size() && pairs / static_cast<std::int64_t>(B.size()) !=
                        static_cast<std::int64_t>(A.size()))
        throw CapExceeded("pair enumeration overflows the pair counter");
    if (pairs > opt.caps.max_pair_evals)
        throw CapExceeded("pair enumeration exceeds max_pair_evals");

    const unsigned threads =
        std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(A.size() ? A.size() : 1)));
    if (threads == 1) return detail::pair_image_rows(f, A, 0, A.size(), B, U, opt);

    std::vector<PairImage<S>> partial(threads);
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (A.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                const std::size_t lo = std::min(A.size(), static_cast<std::size_t>(t) * chunk);
                const std::size_t hi = std::min(A.size(), lo + chunk);
                partial[t] = detail::pair_image_rows(f, A, lo, hi, B, U, opt);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    PairImage<S> out;
    for (auto& p : partial) {
        out.set = IntervalSet<S>::unite(out.set, p.set, opt.merge_eps);
        out.exact = out.exact && p.exact;
    }
    return out;
}

template <class S>
std::vector<Interval<S>> extents(const std::vector<BasicInterval<S>>& intervals) {
    std::vector<Interval<S>> out;
    out.reserve(intervals.size());
    for (const auto& bi : intervals) out.push_back(bi.extent);
    return out;
}

template <class S>
PairImage<S> pair_image(const FunctionModel<S>& f, const std::vector<BasicInterval<S>>& A,
                        const std::vector<BasicInterval<S>>& B, const DomainU<S>& U,
                        const ImageOptions<S>& opt = ImageOptions<S>::defaults()) {
    return pair_image(f, extents(A), extents(B), U, opt);
}

/// f(A, B) ∩ window without materializing the whole image. When the model is
/// monotone in y over the joint hull (and U is the whole plane), each row is
/// entered by binary search, so the cost is driven by the pairs that actually
/// land near the window.
template <class S>
IntervalSet<S> pair_image_window(const FunctionModel<S>& f, const std::vector<Interval<S>>& A,
                                 const std::vector<Interval<S>>& B, const DomainU<S>& U,
                                 const Interval<S>& window,
                                 const ImageOptions<S>& opt = ImageOptions<S>::defaults()) {
    if (A.empty() || B.empty()) return {};

    int dy_sign = 0;
    if (U.is_whole_plane()) {
        const Rect<S> joint{{A.front().lo, A.back().hi}, {B.front().lo, B.back().hi}};
        try {
            dy_sign = detail::range_sign(f.range_dy(joint));
        } catch (const DomainError&) {
            dy_sign = 0;
        }
    }

    UnionAccumulator<S> acc(opt.merge_eps);
    std::vector<Interval<S>> row;
    for (const auto& a : A) {
        row.clear();
        if (dy_sign != 0) {
            // image lo/hi are monotone in j; find the first j that can reach the window
            const auto img = [&](std::size_t j) {
                return rect_image(f, Rect<S>{a, B[dy_sign > 0 ? j : B.size() - 1 - j]}, opt).box;
            };
            std::size_t lo = 0, hi = B.size();
            while (lo < hi) {
                const std::size_t mid = lo + (hi - lo) / 2;
                if (img(mid).hi < window.lo)
                    lo = mid + 1;
                else
                    hi = mid;
            }
            for (std::size_t j = lo; j < B.size(); ++j) {
                const Interval<S> box = img(j);
                if (window.hi < box.lo) break;
                row.push_back({std::max(box.lo, window.lo), std::min(box.hi, window.hi)});
            }
        } else {
            // generic scan with a conservative row prune
            const Rect<S> row_rect{a, {B.front().lo, B.back().hi}};
            const Interval<S> row_enc = f.range_f(row_rect);
            if (row_enc.hi < window.lo || window.hi < row_enc.lo) continue;
            for (const auto& b : B) {
                const Rect<S> r{a, b};
                for (const auto& piece :
                     U.is_whole_plane() ? std::vector<Rect<S>>{r} : U.clip_rect(r)) {
                    const Interval<S> box = rect_image(f, piece, opt).box;
                    if (box.hi < window.lo || window.hi < box.lo) continue;
                    row.push_back({std::max(box.lo, window.lo), std::min(box.hi, window.hi)});
                }
            }
        }
        if (!row.empty()) acc.add(detail::merge_row(row, opt.merge_eps));
    }
    return acc.finish();
}

template <class S>
struct RankImage {
    std::size_t k = 0;
    IntervalSet<S> set;
    S measure{};
    S max_gap{};
    bool exact = true;
};

template <class S>
struct ImageSequence {
    std::vector<RankImage<S>> ranks;
    bool truncated = false;
    std::size_t achieved_k = 0;
};

/// Outer approximations f(E_k^(1), E_k^(2)) ∩ U for k = 1..k_max. Each rank
/// is a superset of the true image; measures are non-increasing. Hitting a
/// resource cap truncates the sequence rather than failing.
template <class S>
ImageSequence<S> image_sequence(const FunctionModel<S>& f, const MoranSpec<S>& spec1,
                                const MoranSpec<S>& spec2, const DomainU<S>& U,
                                std::size_t k_max,
                                const ImageOptions<S>& opt = ImageOptions<S>::defaults()) {
    ImageSequence<S> out;
    for (std::size_t k = 1; k <= k_max; ++k) {
        RankImage<S> row;
        row.k = k;
        try {
            const LevelSet<S> a = level_set(spec1, k, opt.caps);
            const LevelSet<S> b = level_set(spec2, k, opt.caps);
            const PairImage<S> img = pair_image(f, a.intervals, b.intervals, U, opt);
            row.set = img.set;
            row.exact = img.exact;
        } catch (const CapExceeded&) {
            out.truncated = true;
            return out;
        }
        row.measure = row.set.measure();
        if (const auto hull = row.set.hull()) row.max_gap = row.set.max_gap(*hull);
        out.ranks.push_back(std::move(row));
        out.achieved_k = k;
    }
    return out;
}

template <class S>
struct StabilizationReport {
    std::vector<std::pair<std::size_t, bool>> equal_at; // n -> image(n) == image(n+1)
    bool all_equal = true;
    bool ratio_uniform = false;
    std::optional<IntervalSet<S>> exact_image; // present when both conditions hold
};

/// Per-rank image stabilization over a window pair: reports, for each n in
/// [k0, k_max), whether the rank-n and rank-(n+1) images coincide (exactly on
/// the exact backend, within tol otherwise). When every checked rank agrees
/// AND the derivative-ratio window condition holds uniformly on the window
/// rectangle, the rank-k0 image is reported as the exact image.
template <class S>
StabilizationReport<S> stabilization_check(const FunctionModel<S>& f, const MoranSpec<S>& spec1,
                                           const MoranSpec<S>& spec2, const Interval<S>& window1,
                                           const Interval<S>& window2, std::size_t k0,
                                           std::size_t k_max, const S& tol,
                                           const DomainU<S>& U = DomainU<S>::whole_plane(),
                                           const ImageOptions<S>& opt = ImageOptions<S>::defaults()) {
    const RestrictedFamily<S> fam1(spec1, k0, window1, opt.caps);
    const RestrictedFamily<S> fam2(spec2, k0, window2, opt.caps);

    StabilizationReport<S> report;
    IntervalSet<S> prev = pair_image(f, fam1.level(k0).intervals, fam2.level(k0).intervals, U, opt).set;
    IntervalSet<S> first = prev;
    for (std::size_t n = k0; n < k_max; ++n) {
        IntervalSet<S> next =
            pair_image(f, fam1.level(n + 1).intervals, fam2.level(n + 1).intervals, U, opt).set;
        const bool equal =
            is_exact_v<S> ? prev == next : approx_equal(prev, next, tol);
        report.equal_at.emplace_back(n, equal);
        report.all_equal = report.all_equal && equal;
        prev = std::move(next);
    }

    if (spec1.same_parameters(spec2)) {
        const RatioWindow<S> bounds = theorem_bounds(spec1);
        if (bounds.nonempty) {
            const auto rr = ratio_range(f, Rect<S>{window1, window2});
            report.ratio_uniform =
                rr.has_value() && bounds.lower < rr->lo && rr->hi < bounds.upper;
        }
    }
    if (report.all_equal && report.ratio_uniform) report.exact_image = std::move(first);
    return report;
}

} // namespace moran
