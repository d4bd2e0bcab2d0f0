#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "moran/certify.hpp"
#include "moran/image.hpp"

namespace moran {
namespace cases {

/// Overlapping three-map IFS {x -> Lx, x -> Lx + c - L, x -> Lx + 1 - L}.
/// The first two images must overlap, both must stay clear of the third, and
/// the attractor's convex hull must be [0,1] (which forces c >= lambda).
template <class S>
struct OverlapSpec {
    S lambda;
    S c;

    void validate() const {
        if (!(S(0) < lambda && lambda < S(1)))
            throw InvalidInput("overlap spec: lambda must be in (0,1)");
        if (c < lambda)
            throw InvalidInput("overlap spec: c >= lambda is required for hull [0,1]");
        if (S(2) * lambda < c)
            throw InvalidInput("overlap spec: c <= 2*lambda is required for f1(I) ∩ f2(I) != empty");
        if (!(c < S(1) - lambda))
            throw InvalidInput("overlap spec: c < 1 - lambda is required to separate f3(I)");
    }
};

/// Union of all k-fold map compositions applied to [0,1], as a canonical set.
/// Each composition is affine with scale lambda^k, so only the translation
/// offsets need enumerating.
template <class S>
IntervalSet<S> ifs_level_set(const OverlapSpec<S>& spec, std::size_t k, const Caps& caps = Caps{}) {
    spec.validate();
    const S offsets[3] = {S(0), spec.c - spec.lambda, S(1) - spec.lambda};
    std::vector<S> translations{S(0)};
    S scale(1);
    for (std::size_t level = 0; level < k; ++level) {
        if (static_cast<std::int64_t>(translations.size()) > caps.max_level_intervals / 3)
            throw CapExceeded("IFS level set exceeds max_level_intervals");
        std::vector<S> next;
        next.reserve(translations.size() * 3);
        for (const auto& b : offsets)
            for (const auto& t : translations) next.push_back(b + spec.lambda * t);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        translations = std::move(next);
        scale = scale * spec.lambda;
    }
    std::vector<Interval<S>> parts;
    parts.reserve(translations.size());
    for (const auto& t : translations) parts.push_back({t, t + scale});
    return IntervalSet<S>::normalize(std::move(parts));
}

struct CaseRankRow {
    std::size_t k = 0;
    std::size_t parts = 0;
    std::string measure;
    std::string max_gap;
    double measure_value = 0.0;
    double max_gap_value = 0.0;
};

struct GapRecord {
    std::string lo;
    std::string hi;
    double lo_value = 0.0;
    double hi_value = 0.0;
};

struct CaseReport {
    std::string name;
    std::string lambda; // empty when the case has no IFS parameters
    std::string c;
    std::size_t k_max = 0;
    bool criterion_holds = false;
    std::vector<CaseRankRow> ranks;
    bool truncated = false;
    std::string verdict;
    bool consistent = false;
    std::optional<GapRecord> gap;
    std::size_t gap_stable_from = 0;
    std::size_t gap_stable_to = 0;
};

namespace detail {

template <class S>
CaseRankRow make_row(std::size_t k, const IntervalSet<S>& set, const Interval<S>& hull) {
    CaseRankRow row;
    row.k = k;
    row.parts = set.size();
    const S measure = set.measure();
    const S gap = set.max_gap(hull);
    row.measure = ScalarTraits<S>::str(measure);
    row.max_gap = ScalarTraits<S>::str(gap);
    row.measure_value = to_double(measure);
    row.max_gap_value = to_double(gap);
    return row;
}

/// Longest component of hull \ set (leftmost among ties).
template <class S>
std::optional<Interval<S>> largest_gap(const IntervalSet<S>& set, const Interval<S>& hull) {
    std::optional<Interval<S>> best;
    auto consider = [&](const S& lo, const S& hi) {
        if (!(lo < hi)) return;
        if (!best || best->length() < hi - lo) best = Interval<S>{lo, hi};
    };
    if (set.empty()) {
        consider(hull.lo, hull.hi);
        return best;
    }
    consider(hull.lo, set.parts().front().lo);
    for (std::size_t i = 0; i + 1 < set.size(); ++i)
        consider(set.parts()[i].hi, set.parts()[i + 1].lo);
    consider(set.parts().back().hi, hull.hi);
    return best;
}

inline std::vector<Interval<double>> to_double_parts(const IntervalSet<Rational>& set) {
    std::vector<Interval<double>> out;
    out.reserve(set.size());
    for (const auto& p : set.parts()) out.push_back({p.lo.to_double(), p.hi.to_double()});
    return out;
}

inline MoranSpec<Rational> middle_third() {
    return {ParamSeq<Rational>::constant(Rational(1, 3)), ParamSeq<long long>::constant(2),
            Layout::uniform, 0};
}

/// The gap is still a maximal hole of the rank-n image iff the image clipped
/// to [gap.lo, gap.hi] is exactly the two endpoint points.
template <class S>
bool gap_unchanged(const FunctionModel<S>& f, const std::vector<Interval<S>>& parts,
                   const Interval<S>& gap, const S& tol, const ImageOptions<S>& opt) {
    const IntervalSet<S> w =
        pair_image_window(f, parts, parts, DomainU<S>::whole_plane(), gap, opt);
    if (w.size() != 2) return false;
    const auto& a = w.parts().front();
    const auto& b = w.parts().back();
    return abs_of(a.lo - gap.lo) <= tol && abs_of(a.hi - gap.lo) <= tol &&
           abs_of(b.lo - gap.hi) <= tol && abs_of(b.hi - gap.hi) <= tol;
}

} // namespace detail

inline CaseReport run_steinhaus(std::size_t k_max, const Caps& caps, unsigned threads) {
    using S = Rational;
    const MoranSpec<S> spec = detail::middle_third();
    const FunctionModel<S> f = models::sub<S>();
    const DomainU<S> U = DomainU<S>::whole_plane();
    ImageOptions<S> opt;
    opt.caps = caps;
    opt.threads = threads;
    const Interval<S> hull{S(-1), S(1)};
    const IntervalSet<S> target = IntervalSet<S>::single(hull);

    CaseReport rep;
    rep.name = "steinhaus";
    rep.k_max = k_max;
    bool all_equal = true;
    for (std::size_t k = 1; k <= k_max; ++k) {
        const LevelSet<S> ls = level_set(spec, k, caps);
        const PairImage<S> img = pair_image(f, ls.intervals, ls.intervals, U, opt);
        rep.ranks.push_back(detail::make_row(k, img.set, hull));
        all_equal = all_equal && img.set == target;
    }
    rep.verdict = all_equal ? "exact-match" : "mismatch";
    rep.consistent = all_equal;
    return rep;
}

inline CaseReport run_cantor_product(std::size_t k_max, const Caps& caps, unsigned threads) {
    using S = Rational;
    const MoranSpec<S> spec = detail::middle_third();
    const FunctionModel<S> f = models::mul<S>();
    const DomainU<S> U = DomainU<S>::whole_plane();
    ImageOptions<S> opt;
    opt.caps = caps;
    opt.threads = threads;
    const Interval<S> hull{S(0), S(1)};
    const S lower_bound(17, 21);

    CaseReport rep;
    rep.name = "cantor_product";
    rep.k_max = k_max;
    bool ok = true;
    S prev_measure(2);
    for (std::size_t k = 1; k <= k_max; ++k) {
        const LevelSet<S> ls = level_set(spec, k, caps);
        const PairImage<S> img = pair_image(f, ls.intervals, ls.intervals, U, opt);
        const S measure = img.set.measure();
        ok = ok && measure <= prev_measure && lower_bound <= measure;
        prev_measure = measure;
        rep.ranks.push_back(detail::make_row(k, img.set, hull));
    }
    rep.verdict = ok ? "bounds-consistent" : "bounds-violated";
    rep.consistent = ok;
    return rep;
}

namespace detail {

/// Shared signature logic for the threshold cases: full images while the pair
/// count is affordable; persistence of the rank-6 largest gap checked by
/// windowed queries up to rank 12 independently of row truncation.
template <class S>
void threshold_signature(CaseReport& rep, const FunctionModel<S>& f,
                         const std::vector<IntervalSet<S>>& levels, const Interval<S>& hull,
                         const S& tol, const Caps& caps, unsigned threads) {
    ImageOptions<S> opt = ImageOptions<S>::defaults();
    opt.caps = caps;
    opt.threads = threads;
    const DomainU<S> U = DomainU<S>::whole_plane();

    bool vanished = false;
    bool gaps_non_increasing = true;
    double prev_gap = -1.0;
    std::vector<IntervalSet<S>> images;
    for (std::size_t k = 1; k <= rep.k_max; ++k) {
        const auto& parts = levels[k].parts();
        const std::int64_t n = static_cast<std::int64_t>(parts.size());
        if (n * n > caps.max_pair_evals) {
            rep.truncated = true;
            break;
        }
        const PairImage<S> img = pair_image(f, parts, parts, U, opt);
        const IntervalSet<S> clipped = img.set.clip(hull);
        CaseRankRow row = make_row(k, clipped, hull);
        if (prev_gap >= 0.0 && row.max_gap_value > prev_gap + 1e-15) gaps_non_increasing = false;
        prev_gap = row.max_gap_value;
        vanished = vanished || row.max_gap_value < 1e-3;
        rep.ranks.push_back(row);
        images.push_back(clipped);
    }

    if (vanished && gaps_non_increasing) {
        rep.verdict = "gap-vanishing";
    } else {
        // record the largest rank-6 hole and track it through rank 12
        const std::size_t base = std::min<std::size_t>(6, rep.k_max);
        if (base == 0 || images.size() < base) {
            rep.verdict = "indeterminate";
            rep.consistent = false;
            return;
        }
        const auto gap = largest_gap(images[base - 1], hull);
        if (!gap) {
            rep.verdict = "indeterminate";
            rep.consistent = false;
            return;
        }
        rep.gap = GapRecord{ScalarTraits<S>::str(gap->lo), ScalarTraits<S>::str(gap->hi),
                            to_double(gap->lo), to_double(gap->hi)};
        rep.gap_stable_from = base;
        rep.gap_stable_to = base;
        const std::size_t last = std::min<std::size_t>(rep.k_max, 12);
        bool stable = true;
        for (std::size_t n = base + 1; n <= last && stable; ++n) {
            stable = gap_unchanged(f, levels[n].parts(), *gap, tol, opt);
            if (stable) rep.gap_stable_to = n;
        }
        rep.verdict = stable ? "gap-persistent" : "indeterminate";
    }
    rep.consistent = rep.criterion_holds ? rep.verdict == "gap-vanishing"
                                         : rep.verdict == "gap-persistent";
}

} // namespace detail

inline CaseReport run_kk_product(const Rational& lambda, const Rational& c, std::size_t k_max,
                                 const Caps& caps, unsigned threads) {
    using S = Rational;
    const OverlapSpec<S> spec{lambda, c};
    spec.validate();

    CaseReport rep;
    rep.name = "kk_product";
    rep.lambda = lambda.to_string();
    rep.c = c.to_string();
    rep.k_max = k_max;
    const S one_minus = S(1) - lambda;
    rep.criterion_holds = one_minus * one_minus <= c;

    std::vector<IntervalSet<S>> levels(k_max + 1);
    for (std::size_t k = 0; k <= k_max; ++k) levels[k] = ifs_level_set(spec, k, caps);
    detail::threshold_signature<S>(rep, models::mul<S>(), levels, {S(0), S(1)}, S(0), caps,
                                   threads);
    return rep;
}

inline CaseReport run_sqrt_sum(const Rational& lambda, const Rational& c, std::size_t k_max,
                               const Caps& caps, unsigned threads) {
    const OverlapSpec<Rational> spec{lambda, c};
    spec.validate();

    CaseReport rep;
    rep.name = "sqrt_sum";
    rep.lambda = lambda.to_string();
    rep.c = c.to_string();
    rep.k_max = k_max;
    rep.criterion_holds =
        std::sqrt(c.to_double()) + 1.0 >= 2.0 * std::sqrt(1.0 - lambda.to_double());

    std::vector<IntervalSet<double>> levels(k_max + 1);
    for (std::size_t k = 0; k <= k_max; ++k) {
        const IntervalSet<Rational> exact = ifs_level_set(spec, k, caps);
        levels[k] = IntervalSet<double>::from_canonical(detail::to_double_parts(exact));
    }
    detail::threshold_signature<double>(rep, models::sqrt_sum(), levels, {0.0, 2.0}, 1e-12,
                                        caps, threads);
    return rep;
}

/// K/K explored on the window [0, 10] with U excluding the |y| < 0.01 strip.
inline CaseReport run_kk_div(const Rational& lambda, const Rational& c, std::size_t k_max,
                             const Caps& caps, unsigned threads) {
    const OverlapSpec<Rational> spec{lambda, c};
    spec.validate();

    CaseReport rep;
    rep.name = "kk_div";
    rep.lambda = lambda.to_string();
    rep.c = c.to_string();
    rep.k_max = k_max;
    const Rational one_minus = Rational(1) - lambda;
    rep.criterion_holds = one_minus * one_minus <= c;

    const FunctionModel<double> f = models::divide();
    const DomainU<double> U =
        DomainU<double>::from_boxes({Rect<double>{{-1.0, 2.0}, {0.01, 2.0}}});
    const Interval<double> window{0.0, 10.0};
    ImageOptions<double> opt = ImageOptions<double>::defaults();
    opt.caps = caps;
    opt.threads = threads;

    bool covered_at_end = false;
    for (std::size_t k = 1; k <= k_max; ++k) {
        const IntervalSet<Rational> exact = ifs_level_set(spec, k, caps);
        const auto parts = detail::to_double_parts(exact);
        const std::int64_t n = static_cast<std::int64_t>(parts.size());
        if (n * n > caps.max_pair_evals) {
            rep.truncated = true;
            break;
        }
        const PairImage<double> img = pair_image(f, parts, parts, U, opt);
        const IntervalSet<double> clipped = img.set.clip(window);
        CaseRankRow row = detail::make_row(k, clipped, window);
        covered_at_end = row.max_gap_value < 1e-3;
        rep.ranks.push_back(row);
    }
    rep.verdict = covered_at_end ? "window-covered" : "gap-persistent";
    rep.consistent = rep.criterion_holds == covered_at_end;
    return rep;
}

inline const std::vector<std::string>& case_names() {
    static const std::vector<std::string> names{"steinhaus", "cantor_product", "kk_product",
                                                "sqrt_sum", "kk_div"};
    return names;
}

inline CaseReport run_case(const std::string& name, std::optional<Rational> lambda,
                           std::optional<Rational> c, std::size_t k_max,
                           const Caps& caps = Caps{}, unsigned threads = 1) {
    if (name == "steinhaus") return run_steinhaus(k_max, caps, threads);
    if (name == "cantor_product") return run_cantor_product(k_max, caps, threads);
    if (name == "kk_product" || name == "sqrt_sum" || name == "kk_div") {
        if (!lambda || !c)
            throw InvalidInput("case '" + name + "' requires lambda and c parameters");
        if (name == "kk_product") return run_kk_product(*lambda, *c, k_max, caps, threads);
        if (name == "sqrt_sum") return run_sqrt_sum(*lambda, *c, k_max, caps, threads);
        return run_kk_div(*lambda, *c, k_max, caps, threads);
    }
    throw InvalidInput("unknown case '" + name + "'");
}

/// Shipped parameter presets straddling each threshold criterion.
struct ThresholdPreset {
    Rational lambda;
    Rational c;
    bool criterion_holds;
};

inline std::vector<ThresholdPreset> kk_product_presets() {
    return {{Rational(3, 10), Rational(49, 100), true},
            {Rational(3, 10), Rational(11, 20), true},
            {Rational(3, 10), Rational(2, 5), false},
            {Rational(1, 4), Rational(9, 20), false}};
}

inline std::vector<ThresholdPreset> sqrt_sum_presets() {
    return {{Rational(3, 10), Rational(1, 2), true},
            {Rational(3, 10), Rational(11, 20), true},
            {Rational(3, 10), Rational(2, 5), false},
            {Rational(3, 10), Rational(7, 20), false}};
}

} // namespace cases
} // namespace moran
