#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "moran/errors.hpp"
#include "moran/scalar.hpp"

namespace moran {

/// Closed interval [lo, hi]. Degenerate points (lo == hi) are allowed.
template <class S>
struct Interval {
    S lo{};
    S hi{};

    Interval() = default;
    Interval(S lo_, S hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {}

    S length() const { return hi - lo; }

    bool contains(const S& x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
    bool intersects(const Interval& other) const { return lo <= other.hi && other.lo <= hi; }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

template <class S>
Interval<S> intersect(const Interval<S>& a, const Interval<S>& b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; // may be inverted when disjoint
}

/// Canonical union of pairwise-disjoint closed intervals, sorted ascending,
/// with strictly positive gaps between parts. The universal currency for
/// level sets and images.
///
/// On the exact backend merging happens exactly on touch; on the floating
/// backend a merge tolerance eps may be supplied, with the guarantee that
/// parts separated by more than eps are never merged.
template <class S>
class IntervalSet {
public:
    IntervalSet() = default;

    static IntervalSet normalize(std::vector<Interval<S>> raw, const S& eps = S(0)) {
        for (const auto& iv : raw) {
            if (!(iv.lo <= iv.hi)) throw InvalidInput("interval with lo > hi");
        }
        std::sort(raw.begin(), raw.end(), [](const Interval<S>& a, const Interval<S>& b) {
            return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
        });
        IntervalSet out;
        out.parts_.reserve(raw.size());
        for (auto& iv : raw) {
            if (!out.parts_.empty() && iv.lo <= out.parts_.back().hi + eps) {
                if (out.parts_.back().hi < iv.hi) out.parts_.back().hi = std::move(iv.hi);
            } else {
                out.parts_.push_back(std::move(iv));
            }
        }
        return out;
    }

    /// Wraps a vector that is already canonical (sorted, positive gaps).
    static IntervalSet from_canonical(std::vector<Interval<S>> parts) {
        IntervalSet out;
        out.parts_ = std::move(parts);
        return out;
    }

    static IntervalSet single(Interval<S> iv) {
        if (!(iv.lo <= iv.hi)) throw InvalidInput("interval with lo > hi");
        IntervalSet out;
        out.parts_.push_back(std::move(iv));
        return out;
    }

    const std::vector<Interval<S>>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    std::size_t size() const { return parts_.size(); }

    S measure() const {
        S total(0);
        for (const auto& p : parts_) total = total + (p.hi - p.lo);
        return total;
    }

    std::optional<Interval<S>> hull() const {
        if (parts_.empty()) return std::nullopt;
        return Interval<S>{parts_.front().lo, parts_.back().hi};
    }

    /// Length of the largest open interval of hull \ this; 0 iff this covers hull.
    S max_gap(const Interval<S>& hull) const {
        if (parts_.empty()) return hull.length();
        if (parts_.front().lo < hull.lo || hull.hi < parts_.back().hi)
            throw InvalidInput("max_gap: set exceeds hull");
        S best = parts_.front().lo - hull.lo;
        for (std::size_t i = 0; i + 1 < parts_.size(); ++i) {
            const S gap = parts_[i + 1].lo - parts_[i].hi;
            if (best < gap) best = gap;
        }
        const S tail = hull.hi - parts_.back().hi;
        if (best < tail) best = tail;
        return best;
    }

    bool contains_point(const S& x) const {
        auto it = std::partition_point(parts_.begin(), parts_.end(),
                                       [&](const Interval<S>& p) { return p.hi < x; });
        return it != parts_.end() && it->lo <= x;
    }

    /// True iff some single part contains i entirely.
    bool contains_interval(const Interval<S>& i) const {
        auto it = std::partition_point(parts_.begin(), parts_.end(),
                                       [&](const Interval<S>& p) { return p.hi < i.lo; });
        return it != parts_.end() && it->contains(i);
    }

    /// Canonical union of two canonical sets (two-pointer sweep).
    static IntervalSet unite(const IntervalSet& a, const IntervalSet& b, const S& eps = S(0)) {
        IntervalSet out;
        out.parts_.reserve(a.parts_.size() + b.parts_.size());
        std::size_t i = 0, j = 0;
        while (i < a.parts_.size() || j < b.parts_.size()) {
            const Interval<S>* next = nullptr;
            if (j == b.parts_.size() ||
                (i < a.parts_.size() && a.parts_[i].lo <= b.parts_[j].lo)) {
                next = &a.parts_[i++];
            } else {
                next = &b.parts_[j++];
            }
            if (!out.parts_.empty() && next->lo <= out.parts_.back().hi + eps) {
                if (out.parts_.back().hi < next->hi) out.parts_.back().hi = next->hi;
            } else {
                out.parts_.push_back(*next);
            }
        }
        return out;
    }

    /// Intersection with a single window interval.
    IntervalSet clip(const Interval<S>& window) const {
        IntervalSet out;
        for (const auto& p : parts_) {
            if (p.hi < window.lo || window.hi < p.lo) continue;
            out.parts_.push_back({std::max(p.lo, window.lo), std::min(p.hi, window.hi)});
        }
        return out;
    }

    /// Component of hull \ this whose interior contains x, if any.
    std::optional<Interval<S>> gap_at(const Interval<S>& hull, const S& x) const {
        if (!hull.contains(x) || contains_point(x)) return std::nullopt;
        S lo = hull.lo;
        S hi = hull.hi;
        for (const auto& p : parts_) {
            if (p.hi < x && lo < p.hi) lo = p.hi;
            if (x < p.lo && p.lo < hi) hi = p.lo;
        }
        return Interval<S>{lo, hi};
    }

    friend bool operator==(const IntervalSet& a, const IntervalSet& b) {
        return a.parts_ == b.parts_;
    }

private:
    std::vector<Interval<S>> parts_;
};

/// Endpoint-wise comparison within tol (used by the floating backend where
/// exact identity is not meaningful).
template <class S>
bool approx_equal(const IntervalSet<S>& a, const IntervalSet<S>& b, const S& tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (abs_of(a.parts()[i].lo - b.parts()[i].lo) > tol) return false;
        if (abs_of(a.parts()[i].hi - b.parts()[i].hi) > tol) return false;
    }
    return true;
}

/// Streaming union builder for huge unions: keeps a binary counter of
/// partial canonical sets so each interval takes part in O(log n) merges
/// and memory stays proportional to the final union, not the input stream.
template <class S>
class UnionAccumulator {
public:
    explicit UnionAccumulator(S eps = S(0)) : eps_(std::move(eps)) {}

    void add(IntervalSet<S> set) {
        std::size_t level = 0;
        while (level < levels_.size() && !levels_[level].empty()) {
            set = IntervalSet<S>::unite(levels_[level], set, eps_);
            levels_[level] = IntervalSet<S>{};
            ++level;
        }
        if (level == levels_.size()) levels_.emplace_back();
        levels_[level] = std::move(set);
    }

    IntervalSet<S> finish() {
        IntervalSet<S> out;
        for (auto& lvl : levels_) {
            if (!lvl.empty()) out = IntervalSet<S>::unite(out, lvl, eps_);
            lvl = IntervalSet<S>{};
        }
        levels_.clear();
        return out;
    }

private:
    S eps_;
    std::vector<IntervalSet<S>> levels_;
};

} // namespace moran
