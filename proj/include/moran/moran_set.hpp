#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "moran/interval_set.hpp"

namespace moran {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Eventually periodic parameter sequence: `head` followed by `period`
/// repeated forever. Indexing is 1-based to match rank numbering.
template <class T>
struct ParamSeq {
    std::vector<T> head;
    std::vector<T> period;

    const T& at(std::size_t k) const {
        if (k == 0 || period.empty()) throw InvalidInput("parameter sequence index/period invalid");
        if (k <= head.size()) return head[k - 1];
        return period[(k - head.size() - 1) % period.size()];
    }

    static ParamSeq constant(T value) { return {{}, {std::move(value)}}; }

    friend bool operator==(const ParamSeq& a, const ParamSeq& b) {
        return a.head == b.head && a.period == b.period;
    }
};

enum class Layout { uniform, left, right, random_seeded };

inline std::string layout_name(Layout l) {
    switch (l) {
        case Layout::uniform: return "uniform";
        case Layout::left: return "left";
        case Layout::right: return "right";
        case Layout::random_seeded: return "random";
    }
    throw InvalidInput("unknown layout");
}

inline Layout layout_from_name(const std::string& name) {
    if (name == "uniform") return Layout::uniform;
    if (name == "left") return Layout::left;
    if (name == "right") return Layout::right;
    if (name == "random") return Layout::random_seeded;
    throw InvalidInput("layout must be one of uniform|left|right|random");
}

/// One element of the Moran class: contraction ratios c_k in (0,1), branch
/// counts n_k >= 2 with c_k * n_k < 1, and the policy that places the interior
/// gaps (every policy pins the first child to the parent's left endpoint and
/// the last child to the right endpoint).
template <class S>
struct MoranSpec {
    ParamSeq<S> c;
    ParamSeq<long long> n;
    Layout layout = Layout::uniform;
    std::uint64_t seed = 0;

    /// Indices 1..check_horizon() visit every (c_k, n_k) combination.
    std::size_t check_horizon() const {
        const std::size_t head = std::max(c.head.size(), n.head.size());
        const std::size_t lcm = std::lcm(std::max<std::size_t>(c.period.size(), 1),
                                         std::max<std::size_t>(n.period.size(), 1));
        return head + lcm;
    }

    void validate() const {
        if (c.period.empty() || n.period.empty())
            throw InvalidInput("Moran spec: period must be nonempty");
        for (std::size_t k = 1; k <= check_horizon(); ++k) {
            const S& ck = c.at(k);
            const long long nk = n.at(k);
            if (!(S(0) < ck && ck < S(1))) throw InvalidInput("Moran spec: c_k must be in (0,1)");
            if (nk < 2) throw InvalidInput("Moran spec: n_k must be >= 2");
            if (!(ck * S(nk) < S(1))) throw InvalidInput("Moran spec: c_k * n_k must be < 1");
        }
    }

    bool same_parameters(const MoranSpec& other) const {
        return c == other.c && n == other.n;
    }
};

/// Index word sigma = (sigma_1, ..., sigma_k), 1 <= sigma_j <= n_j.
struct Word {
    std::vector<int> letters;

    std::size_t rank() const { return letters.size(); }

    Word child(int i) const {
        Word w = *this;
        w.letters.push_back(i);
        return w;
    }

    friend bool operator==(const Word& a, const Word& b) { return a.letters == b.letters; }
};

/// Basic interval T_sigma: the word and its geometric extent.
/// |extent| = c_1 c_2 ... c_k for a rank-k word.
template <class S>
struct BasicInterval {
    Word word;
    Interval<S> extent;
};

namespace detail {

template <class S>
std::vector<S> interior_gaps(const MoranSpec<S>& spec, const Word& parent_word,
                             const S& slack, long long nk) {
    const long long gaps = nk - 1;
    std::vector<S> out(static_cast<std::size_t>(gaps));
    switch (spec.layout) {
        case Layout::uniform:
            for (auto& g : out) g = slack / S(gaps);
            break;
        case Layout::left:
            // children 1..n-1 packed at the parent's left edge, child n pinned right
            for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = S(0);
            out.back() = slack;
            break;
        case Layout::right:
            out.front() = slack;
            for (std::size_t i = 1; i < out.size(); ++i) out[i] = S(0);
            break;
        case Layout::random_seeded: {
            std::uint64_t state = spec.seed ^ 0xa0761d6478bd642fULL;
            for (int letter : parent_word.letters)
                state = splitmix64(state) ^ static_cast<std::uint64_t>(letter);
            state = splitmix64(state) ^ static_cast<std::uint64_t>(parent_word.rank());
            std::vector<long long> w(out.size());
            long long total = 0;
            for (auto& wi : w) {
                wi = static_cast<long long>(splitmix64(state) % 64);
                total += wi;
            }
            if (total == 0) {
                for (auto& g : out) g = slack / S(gaps);
            } else {
                for (std::size_t i = 0; i < out.size(); ++i)
                    out[i] = slack * S(w[i]) / S(total);
            }
            break;
        }
    }
    return out;
}

} // namespace detail

/// The n_k children of a rank-(k-1) basic interval: equal length c_k * |parent|,
/// disjoint interiors, first child starting at parent.lo, last child ending at
/// parent.hi, ordered left to right.
template <class S>
std::vector<BasicInterval<S>> children(const BasicInterval<S>& parent, const MoranSpec<S>& spec) {
    const std::size_t k = parent.word.rank() + 1;
    const S& ck = spec.c.at(k);
    const long long nk = spec.n.at(k);
    const S parent_len = parent.extent.length();
    const S child_len = ck * parent_len;
    const S slack = parent_len - S(nk) * child_len;
    if (slack < S(0)) throw InvalidInput("Moran spec: children do not fit (c_k * n_k >= 1)");

    const std::vector<S> gaps = detail::interior_gaps(spec, parent.word, slack, nk);

    std::vector<BasicInterval<S>> out;
    out.reserve(static_cast<std::size_t>(nk));
    S lo = parent.extent.lo;
    for (long long i = 1; i <= nk; ++i) {
        S hi = (i == nk) ? parent.extent.hi : lo + child_len;
        out.push_back({parent.word.child(static_cast<int>(i)), Interval<S>{lo, hi}});
        if (i < nk) lo = hi + gaps[static_cast<std::size_t>(i - 1)];
    }
    return out;
}

template <class S>
struct LevelSet {
    std::vector<BasicInterval<S>> intervals; // in word order (left to right)
    IntervalSet<S> set;                      // canonical union
};

namespace detail {

template <class S>
IntervalSet<S> canonical_from_ordered(const std::vector<BasicInterval<S>>& intervals) {
    std::vector<Interval<S>> parts;
    parts.reserve(intervals.size());
    for (const auto& bi : intervals) parts.push_back(bi.extent);
    // extents are already sorted; merge touching neighbours
    IntervalSet<S> out;
    std::vector<Interval<S>> merged;
    for (auto& iv : parts) {
        if (!merged.empty() && iv.lo <= merged.back().hi) {
            if (merged.back().hi < iv.hi) merged.back().hi = iv.hi;
        } else {
            merged.push_back(iv);
        }
    }
    return IntervalSet<S>::from_canonical(std::move(merged));
}

template <class S>
std::vector<BasicInterval<S>> expand_to_rank(std::vector<BasicInterval<S>> frontier,
                                             const MoranSpec<S>& spec, std::size_t from_rank,
                                             std::size_t to_rank, const Caps& caps) {
    std::int64_t count = static_cast<std::int64_t>(frontier.size());
    for (std::size_t k = from_rank; k < to_rank; ++k) {
        const long long nk = spec.n.at(k + 1);
        if (count > caps.max_level_intervals / nk)
            throw CapExceeded("level set exceeds max_level_intervals");
        count *= nk;
        std::vector<BasicInterval<S>> next;
        next.reserve(static_cast<std::size_t>(count));
        for (const auto& parent : frontier)
            for (auto& child : children(parent, spec)) next.push_back(std::move(child));
        frontier = std::move(next);
    }
    return frontier;
}

} // namespace detail

/// E_k: all n_1 ... n_k rank-k basic intervals plus their canonical union.
/// Rank 0 is the single interval [0,1].
template <class S>
LevelSet<S> level_set(const MoranSpec<S>& spec, std::size_t k, const Caps& caps = Caps{}) {
    spec.validate();
    std::vector<BasicInterval<S>> frontier{BasicInterval<S>{Word{}, Interval<S>{S(0), S(1)}}};
    frontier = detail::expand_to_rank(std::move(frontier), spec, 0, k, caps);
    LevelSet<S> out;
    out.set = detail::canonical_from_ordered(frontier);
    out.intervals = std::move(frontier);
    return out;
}

/// Sorted distinct endpoints of the rank-k basic intervals. Every returned
/// point lies in E (child pinning keeps each endpoint an endpoint forever).
template <class S>
std::vector<S> endpoint_points(const MoranSpec<S>& spec, std::size_t k, const Caps& caps = Caps{}) {
    const LevelSet<S> ls = level_set(spec, k, caps);
    std::vector<S> pts;
    pts.reserve(2 * ls.intervals.size());
    for (const auto& bi : ls.intervals) {
        pts.push_back(bi.extent.lo);
        pts.push_back(bi.extent.hi);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

/// The G_n family: rank-n basic intervals inside a window [A,B] whose
/// endpoints are rank-k0 basic-interval endpoints. G_{n+1} is a subset of G_n.
template <class S>
class RestrictedFamily {
public:
    RestrictedFamily(MoranSpec<S> spec, std::size_t k0, Interval<S> window,
                     const Caps& caps = Caps{})
        : spec_(std::move(spec)), k0_(k0), window_(std::move(window)), caps_(caps) {
        spec_.validate();
        if (!(window_.lo < window_.hi))
            throw InvalidInput("restrict: window must be nondegenerate");
        const LevelSet<S> ls = level_set(spec_, k0_, caps_);
        bool lo_ok = false, hi_ok = false;
        for (const auto& bi : ls.intervals) {
            lo_ok = lo_ok || bi.extent.lo == window_.lo;
            hi_ok = hi_ok || bi.extent.hi == window_.hi;
        }
        if (!lo_ok || !hi_ok)
            throw InvalidInput("restrict: window endpoints must be rank-k0 basic-interval endpoints");
        for (const auto& bi : ls.intervals)
            if (window_.contains(bi.extent)) base_.push_back(bi);
    }

    std::size_t base_rank() const { return k0_; }
    const Interval<S>& window() const { return window_; }

    /// G_n for n >= k0.
    LevelSet<S> level(std::size_t n) const {
        if (n < k0_) throw InvalidInput("restrict: level below base rank");
        std::vector<BasicInterval<S>> frontier =
            detail::expand_to_rank(base_, spec_, k0_, n, caps_);
        LevelSet<S> out;
        out.set = detail::canonical_from_ordered(frontier);
        out.intervals = std::move(frontier);
        return out;
    }

private:
    MoranSpec<S> spec_;
    std::size_t k0_;
    Interval<S> window_;
    Caps caps_;
    std::vector<BasicInterval<S>> base_;
};

/// The derivative-ratio window of the containment theorem:
/// lower = sup_k {1 - c_k n_k}, upper = inf_k { c_k / (1 - n_k c_k) }.
/// Exactly computable because sequences are eventually periodic.
template <class S>
struct RatioWindow {
    S lower;
    S upper;
    bool nonempty;
};

template <class S>
RatioWindow<S> theorem_bounds(const MoranSpec<S>& spec) {
    spec.validate();
    bool first = true;
    S lower{}, upper{};
    for (std::size_t k = 1; k <= spec.check_horizon(); ++k) {
        const S& ck = spec.c.at(k);
        const S nk = S(spec.n.at(k));
        const S lo_k = S(1) - ck * nk;
        const S up_k = ck / (S(1) - nk * ck);
        if (first) {
            lower = lo_k;
            upper = up_k;
            first = false;
        } else {
            if (lower < lo_k) lower = lo_k;
            if (up_k < upper) upper = up_k;
        }
    }
    return {lower, upper, lower < upper};
}

} // namespace moran
