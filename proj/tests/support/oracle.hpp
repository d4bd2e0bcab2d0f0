#pragma once

// Independent brute-force reference for image computation: a naive double
// loop over every rectangle pair, per-rectangle corner arithmetic (plus dense
// grid sampling on the floating backend), one flat sort-and-merge at the end.
// Deliberately shares none of the streaming/row machinery of the library.

#include <algorithm>
#include <vector>

#include "moran/function_model.hpp"

namespace oracle {

template <class S>
std::vector<moran::Interval<S>> flat_merge(std::vector<moran::Interval<S>> parts, const S& eps) {
    std::sort(parts.begin(), parts.end(),
              [](const moran::Interval<S>& a, const moran::Interval<S>& b) {
                  return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
              });
    std::vector<moran::Interval<S>> merged;
    for (const auto& iv : parts) {
        if (!merged.empty() && iv.lo <= merged.back().hi + eps) {
            if (merged.back().hi < iv.hi) merged.back().hi = iv.hi;
        } else {
            merged.push_back(iv);
        }
    }
    return merged;
}

/// Exact corner arithmetic: valid for the built-ins, whose extrema over any
/// admissible rectangle sit at corners.
template <class S>
moran::Interval<S> corner_range(const moran::FunctionModel<S>& f, const moran::Rect<S>& r) {
    const S vals[4] = {f.eval(r.x.lo, r.y.lo), f.eval(r.x.lo, r.y.hi), f.eval(r.x.hi, r.y.lo),
                       f.eval(r.x.hi, r.y.hi)};
    S lo = vals[0], hi = vals[0];
    for (int i = 1; i < 4; ++i) {
        if (vals[i] < lo) lo = vals[i];
        if (hi < vals[i]) hi = vals[i];
    }
    return {lo, hi};
}

/// Corner-plus-grid sampling enclosure for floating models (50 x 50 interior
/// samples); underestimates by at most the function's modulus of continuity
/// at the grid pitch, which the comparison tolerance absorbs.
inline moran::Interval<double> sampled_range(const moran::FunctionModel<double>& f,
                                             const moran::Rect<double>& r, int grid = 50) {
    moran::Interval<double> out = corner_range(f, r);
    for (int i = 0; i <= grid; ++i) {
        const double x = r.x.lo + (r.x.hi - r.x.lo) * i / grid;
        for (int j = 0; j <= grid; ++j) {
            const double y = r.y.lo + (r.y.hi - r.y.lo) * j / grid;
            const double v = f.eval(x, y);
            if (v < out.lo) out.lo = v;
            if (out.hi < v) out.hi = v;
        }
    }
    return out;
}

template <class S>
std::vector<moran::Rect<S>> clip_to_boxes(const moran::Rect<S>& r, const moran::DomainU<S>& U) {
    if (U.is_whole_plane()) return {r};
    std::vector<moran::Rect<S>> out;
    for (const auto& b : U.boxes()) {
        const S xlo = std::max(r.x.lo, b.x.lo), xhi = std::min(r.x.hi, b.x.hi);
        const S ylo = std::max(r.y.lo, b.y.lo), yhi = std::min(r.y.hi, b.y.hi);
        if (xlo < xhi && ylo < yhi) out.push_back({{xlo, xhi}, {ylo, yhi}});
    }
    return out;
}

template <class S>
std::vector<moran::Interval<S>> pair_image(const moran::FunctionModel<S>& f,
                                           const std::vector<moran::Interval<S>>& A,
                                           const std::vector<moran::Interval<S>>& B,
                                           const moran::DomainU<S>& U, const S& eps = S(0)) {
    std::vector<moran::Interval<S>> all;
    for (const auto& a : A) {
        for (const auto& b : B) {
            for (const auto& piece : clip_to_boxes(moran::Rect<S>{a, b}, U)) {
                if constexpr (moran::is_exact_v<S>) {
                    all.push_back(corner_range(f, piece));
                } else {
                    all.push_back(sampled_range(f, piece));
                }
            }
        }
    }
    return flat_merge(std::move(all), eps);
}

} // namespace oracle
