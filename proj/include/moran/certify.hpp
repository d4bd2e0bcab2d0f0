#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "moran/image.hpp"

namespace moran {

enum class CertStatus { satisfied, not_found, empty_window, inconclusive_boundary };

inline std::string cert_status_name(CertStatus s) {
    switch (s) {
        case CertStatus::satisfied: return "satisfied";
        case CertStatus::not_found: return "not_found";
        case CertStatus::empty_window: return "empty_window";
        case CertStatus::inconclusive_boundary: return "inconclusive_boundary";
    }
    return "unknown";
}

struct AuditRow {
    std::size_t rank = 0;
    bool overlap_ok = false;
};

/// The verdict of the containment theorem, with everything an independent
/// verifier needs: the witness point, its derivative ratio, the ratio window
/// from the parameter sequences, the basic rectangle on which the window
/// holds uniformly, and the certified subinterval of the image.
template <class S>
struct Certificate {
    CertStatus status = CertStatus::not_found;
    std::string reason;
    RatioWindow<S> bounds{S(0), S(0), false};
    std::optional<std::pair<S, S>> witness;
    std::optional<S> ratio;
    std::size_t witness_rank = 0;
    std::optional<Rect<S>> neighborhood;
    std::size_t neighborhood_rank = 0;
    std::optional<Interval<S>> certified;
    std::vector<AuditRow> audit;
};

struct CertifyOptions {
    std::size_t witness_rank_max = 4;      // deepest endpoint rank scanned for a witness
    std::size_t neighborhood_rank_max = 24; // deepest basic rectangle tried for uniformity
    std::size_t audit_depth = 3;           // extra ranks spot-checked by overlap_check
};

namespace detail {

template <class S>
bool finite_scalar(const S&) {
    return true;
}
inline bool finite_scalar(double v) { return std::isfinite(v); }

template <class S>
void require_same_class(const MoranSpec<S>& spec1, const MoranSpec<S>& spec2) {
    spec1.validate();
    spec2.validate();
    if (!spec1.same_parameters(spec2))
        throw InvalidInput("certification requires both factors from the same (c_k, n_k) class");
}

/// Rank-k basic interval containing x, following leftmost children on ties.
template <class S>
std::optional<BasicInterval<S>> descend_once(const BasicInterval<S>& parent,
                                             const MoranSpec<S>& spec, const S& x) {
    for (const auto& child : children(parent, spec))
        if (child.extent.contains(x)) return child;
    return std::nullopt;
}

} // namespace detail

/// Scans endpoint pairs at increasing rank (0..search_rank, lexicographic
/// within each rank) for a point of E1 x E2 inside U whose derivative ratio
/// lies strictly inside the ratio window. Candidates where dx vanishes are
/// skipped; candidates that hit the window boundary exactly are remembered
/// and produce inconclusive_boundary when nothing lands strictly inside.
template <class S>
Certificate<S> find_witness(const MoranSpec<S>& spec1, const MoranSpec<S>& spec2,
                            const FunctionModel<S>& f, const DomainU<S>& U,
                            std::size_t search_rank, const Caps& caps = Caps{}) {
    detail::require_same_class(spec1, spec2);

    Certificate<S> cert;
    cert.bounds = theorem_bounds(spec1);
    if (!cert.bounds.nonempty) {
        cert.status = CertStatus::empty_window;
        cert.reason = "ratio window is empty: sup{1 - c_k n_k} >= inf{c_k / (1 - n_k c_k)}";
        return cert;
    }

    bool saw_boundary = false;
    std::size_t skipped_dx_zero = 0;
    std::size_t considered = 0;
    for (std::size_t rank = 0; rank <= search_rank; ++rank) {
        const std::vector<S> xs = endpoint_points(spec1, rank, caps);
        const std::vector<S> ys = endpoint_points(spec2, rank, caps);
        for (const S& x : xs) {
            for (const S& y : ys) {
                if (!U.contains_point(x, y)) continue;
                ++considered;
                S dxv, dyv;
                try {
                    dxv = f.dx(x, y);
                    dyv = f.dy(x, y);
                } catch (const DomainError&) {
                    continue;
                }
                if (!detail::finite_scalar(dxv) || !detail::finite_scalar(dyv)) continue;
                if (dxv == S(0)) {
                    ++skipped_dx_zero;
                    continue;
                }
                const S ratio = abs_of(dyv / dxv);
                if (cert.bounds.lower < ratio && ratio < cert.bounds.upper) {
                    cert.status = CertStatus::satisfied;
                    cert.witness = std::make_pair(x, y);
                    cert.ratio = ratio;
                    cert.witness_rank = rank;
                    return cert;
                }
                if (ratio == cert.bounds.lower || ratio == cert.bounds.upper)
                    saw_boundary = true;
            }
        }
    }

    if (saw_boundary) {
        cert.status = CertStatus::inconclusive_boundary;
        cert.reason = "derivative ratio meets the window boundary; the strict inequality fails "
                      "and the criterion is silent there";
    } else if (considered == 0) {
        cert.status = CertStatus::not_found;
        cert.reason = "no endpoint pair up to the search rank lies in U";
    } else if (skipped_dx_zero == considered) {
        cert.status = CertStatus::not_found;
        cert.reason = "dx vanishes at every candidate point";
    } else {
        cert.status = CertStatus::not_found;
        cert.reason = "no endpoint pair up to the search rank has its ratio inside the window";
    }
    return cert;
}

/// Upgrades a point-level certificate to a neighborhood-level one: finds the
/// smallest rank k* whose basic rectangle around the witness keeps the ratio
/// range strictly inside the window and sits inside U, then certifies
/// rect_image(f, that rectangle) as a subinterval of the limit image.
template <class S>
Certificate<S> tighten_neighborhood(Certificate<S> cert, const MoranSpec<S>& spec1,
                                    const MoranSpec<S>& spec2, const FunctionModel<S>& f,
                                    const DomainU<S>& U,
                                    const CertifyOptions& copt = CertifyOptions{},
                                    const ImageOptions<S>& iopt = ImageOptions<S>::defaults()) {
    if (cert.status != CertStatus::satisfied || !cert.witness)
        throw InvalidInput("tighten_neighborhood requires a point-level satisfied certificate");
    detail::require_same_class(spec1, spec2);

    const S& x0 = cert.witness->first;
    const S& y0 = cert.witness->second;
    BasicInterval<S> nodeX{Word{}, Interval<S>{S(0), S(1)}};
    BasicInterval<S> nodeY{Word{}, Interval<S>{S(0), S(1)}};

    for (std::size_t k = 0; k <= copt.neighborhood_rank_max; ++k) {
        if (k > 0) {
            auto cx = detail::descend_once(nodeX, spec1, x0);
            auto cy = detail::descend_once(nodeY, spec2, y0);
            if (!cx || !cy) {
                cert.status = CertStatus::not_found;
                cert.reason = "witness is not a point of the construction at rank " +
                              std::to_string(k);
                return cert;
            }
            nodeX = std::move(*cx);
            nodeY = std::move(*cy);
        }
        const Rect<S> rect{nodeX.extent, nodeY.extent};
        const auto rr = ratio_range(f, rect);
        if (!rr) continue;
        if (!(cert.bounds.lower < rr->lo && rr->hi < cert.bounds.upper)) continue;
        if (!U.contains_rect(rect)) continue;
        const RectImage<S> img = rect_image(f, rect, iopt);
        if (!img.exact) continue; // never certify from an approximate range
        cert.neighborhood = rect;
        cert.neighborhood_rank = k;
        cert.certified = img.box;
        return cert;
    }

    cert.status = CertStatus::not_found;
    cert.reason = "no basic rectangle within the rank cap keeps the ratio range inside the window";
    cert.neighborhood.reset();
    cert.certified.reset();
    return cert;
}

struct RowChain {
    int child = 0;
    bool row_single_interval = false;
    bool overlaps_previous_row = false;
};

struct OverlapReport {
    bool ok = false;                  // union of child images == image of the parent rectangle
    bool union_single_interval = false;
    std::vector<RowChain> rows;
};

/// Direct rectangle-arithmetic check of the child-expansion identity
/// f(I, J) = f(I~, J~): the n_k x n_k child rectangle images must chain into
/// the single interval f(I x J).
template <class S>
OverlapReport overlap_check(const FunctionModel<S>& f, const MoranSpec<S>& spec1,
                            const MoranSpec<S>& spec2, const BasicInterval<S>& parent1,
                            const BasicInterval<S>& parent2,
                            const DomainU<S>& U = DomainU<S>::whole_plane(),
                            const ImageOptions<S>& opt = ImageOptions<S>::defaults()) {
    detail::require_same_class(spec1, spec2);
    const Rect<S> parent_rect{parent1.extent, parent2.extent};
    if (!U.contains_rect(parent_rect))
        throw DomainError("overlap_check: parent rectangle not inside U");

    const auto kidsI = children(parent1, spec1);
    const auto kidsJ = children(parent2, spec2);

    OverlapReport report;
    IntervalSet<S> total;
    IntervalSet<S> prev_row;
    for (std::size_t i = 0; i < kidsI.size(); ++i) {
        std::vector<Interval<S>> row;
        row.reserve(kidsJ.size());
        for (const auto& kidJ : kidsJ)
            row.push_back(rect_image(f, Rect<S>{kidsI[i].extent, kidJ.extent}, opt).box);
        IntervalSet<S> row_set = IntervalSet<S>::normalize(std::move(row), opt.merge_eps);

        RowChain chain;
        chain.child = static_cast<int>(i + 1);
        chain.row_single_interval = row_set.size() == 1;
        if (i > 0) {
            const IntervalSet<S> joined = IntervalSet<S>::unite(prev_row, row_set, opt.merge_eps);
            chain.overlaps_previous_row = joined.size() < prev_row.size() + row_set.size();
        }
        report.rows.push_back(chain);
        total = IntervalSet<S>::unite(total, row_set, opt.merge_eps);
        prev_row = std::move(row_set);
    }

    report.union_single_interval = total.size() == 1;
    const Interval<S> parent_image = rect_image(f, parent_rect, opt).box;
    report.ok = total == IntervalSet<S>::single(parent_image);
    return report;
}

/// End-to-end certification: witness search, neighborhood tightening, and a
/// spot audit of the child-expansion identity at the next few ranks inside
/// the certified neighborhood.
template <class S>
Certificate<S> certify(const MoranSpec<S>& spec1, const MoranSpec<S>& spec2,
                       const FunctionModel<S>& f, const DomainU<S>& U,
                       const CertifyOptions& copt = CertifyOptions{},
                       const ImageOptions<S>& iopt = ImageOptions<S>::defaults()) {
    Certificate<S> cert =
        find_witness(spec1, spec2, f, U, copt.witness_rank_max, iopt.caps);
    if (cert.status != CertStatus::satisfied) return cert;
    cert = tighten_neighborhood(std::move(cert), spec1, spec2, f, U, copt, iopt);
    if (cert.status != CertStatus::satisfied) return cert;

    // audit: overlap identity for the witness-containing pair at deeper ranks
    const S& x0 = cert.witness->first;
    const S& y0 = cert.witness->second;
    BasicInterval<S> nodeX{Word{}, Interval<S>{S(0), S(1)}};
    BasicInterval<S> nodeY{Word{}, Interval<S>{S(0), S(1)}};
    for (std::size_t k = 0; k < cert.neighborhood_rank + copt.audit_depth; ++k) {
        if (k >= cert.neighborhood_rank) {
            const OverlapReport rep = overlap_check(f, spec1, spec2, nodeX, nodeY, U, iopt);
            cert.audit.push_back({k + 1, rep.ok});
        }
        auto cx = detail::descend_once(nodeX, spec1, x0);
        auto cy = detail::descend_once(nodeY, spec2, y0);
        if (!cx || !cy) break;
        nodeX = std::move(*cx);
        nodeY = std::move(*cy);
    }
    return cert;
}

/// Independent re-check of a satisfied certificate: recomputes the bounds,
/// the witness descent, the ratio enclosure, the U containments and the
/// certified rectangle image, without re-running any search.
template <class S>
bool verify_certificate(const Certificate<S>& cert, const MoranSpec<S>& spec1,
                        const MoranSpec<S>& spec2, const FunctionModel<S>& f,
                        const DomainU<S>& U,
                        const ImageOptions<S>& iopt = ImageOptions<S>::defaults()) {
    if (cert.status != CertStatus::satisfied) return false;
    if (!cert.witness || !cert.ratio || !cert.neighborhood || !cert.certified) return false;
    detail::require_same_class(spec1, spec2);

    const RatioWindow<S> bounds = theorem_bounds(spec1);
    if (!bounds.nonempty) return false;
    if (!(bounds.lower == cert.bounds.lower && bounds.upper == cert.bounds.upper)) return false;

    const S& x0 = cert.witness->first;
    const S& y0 = cert.witness->second;
    if (!U.contains_point(x0, y0)) return false;

    const S dxv = f.dx(x0, y0);
    if (dxv == S(0)) return false;
    const S ratio = abs_of(f.dy(x0, y0) / dxv);
    if (!(ratio == *cert.ratio)) return false;
    if (!(bounds.lower < ratio && ratio < bounds.upper)) return false;

    // the neighborhood must be the witness's basic rectangle at its rank
    BasicInterval<S> nodeX{Word{}, Interval<S>{S(0), S(1)}};
    BasicInterval<S> nodeY{Word{}, Interval<S>{S(0), S(1)}};
    for (std::size_t k = 0; k < cert.neighborhood_rank; ++k) {
        auto cx = detail::descend_once(nodeX, spec1, x0);
        auto cy = detail::descend_once(nodeY, spec2, y0);
        if (!cx || !cy) return false;
        nodeX = std::move(*cx);
        nodeY = std::move(*cy);
    }
    const Rect<S> rect{nodeX.extent, nodeY.extent};
    if (!(rect == *cert.neighborhood)) return false;
    if (!U.contains_rect(rect)) return false;

    const auto rr = ratio_range(f, rect);
    if (!rr || !(bounds.lower < rr->lo && rr->hi < bounds.upper)) return false;

    const RectImage<S> img = rect_image(f, rect, iopt);
    return img.exact && img.box == *cert.certified;
}

} // namespace moran
