#pragma once

#include <string>

#include <json.hpp>

#include "moran/cases.hpp"
#include "moran/certify.hpp"

namespace moran {

using json = nlohmann::ordered_json;

// ---- scalars ----

inline json scalar_to_json(const Rational& v) { return v.to_string(); }
inline json scalar_to_json(double v) { return v; }

template <class S>
S scalar_from_json(const json& j) {
    if (j.is_string()) return ScalarTraits<S>::parse(j.get<std::string>());
    if constexpr (is_exact_v<S>) {
        if (j.is_number_integer()) return S(j.get<long long>());
        throw InvalidInput("exact scalar must be a \"p/q\" string or an integer");
    } else {
        if (j.is_number()) return j.get<double>();
        throw InvalidInput("float scalar must be a number or a \"p/q\" string");
    }
}

// ---- interval sets ----

template <class S>
json to_json(const IntervalSet<S>& set) {
    json arr = json::array();
    for (const auto& p : set.parts()) arr.push_back(json::array({scalar_to_json(p.lo), scalar_to_json(p.hi)}));
    return arr;
}

template <class S>
IntervalSet<S> interval_set_from_json(const json& j) {
    if (!j.is_array()) throw InvalidInput("interval set must be an array of [lo, hi] pairs");
    std::vector<Interval<S>> parts;
    parts.reserve(j.size());
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 2)
            throw InvalidInput("interval must be a [lo, hi] pair");
        parts.push_back({scalar_from_json<S>(item[0]), scalar_from_json<S>(item[1])});
    }
    return IntervalSet<S>::normalize(std::move(parts));
}

// ---- Moran specs ----

template <class T, class Convert>
json param_seq_to_json(const ParamSeq<T>& seq, Convert&& conv) {
    json head = json::array();
    for (const auto& v : seq.head) head.push_back(conv(v));
    json period = json::array();
    for (const auto& v : seq.period) period.push_back(conv(v));
    return json{{"head", std::move(head)}, {"period", std::move(period)}};
}

template <class S>
json to_json(const MoranSpec<S>& spec) {
    json j;
    j["c"] = param_seq_to_json(spec.c, [](const S& v) { return scalar_to_json(v); });
    j["n"] = param_seq_to_json(spec.n, [](long long v) { return v; });
    j["layout"] = layout_name(spec.layout);
    j["seed"] = spec.seed;
    return j;
}

template <class S>
MoranSpec<S> moran_spec_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("Moran spec must be a JSON object");
    MoranSpec<S> spec;
    const auto read_seq = [&](const json& sj, auto& seq, auto&& conv) {
        if (!sj.is_object() || !sj.contains("head") || !sj.contains("period"))
            throw InvalidInput("parameter sequence must have head and period arrays");
        for (const auto& v : sj.at("head")) seq.head.push_back(conv(v));
        for (const auto& v : sj.at("period")) seq.period.push_back(conv(v));
    };
    if (!j.contains("c") || !j.contains("n")) throw InvalidInput("Moran spec needs c and n");
    read_seq(j.at("c"), spec.c, [](const json& v) { return scalar_from_json<S>(v); });
    read_seq(j.at("n"), spec.n, [](const json& v) {
        if (!v.is_number_integer()) throw InvalidInput("n entries must be integers");
        return v.get<long long>();
    });
    spec.layout = layout_from_name(j.value("layout", std::string("uniform")));
    spec.seed = j.value("seed", 0ULL);
    spec.validate();
    return spec;
}

// ---- certificates ----

template <class S>
json to_json(const Certificate<S>& cert) {
    json j;
    j["status"] = cert_status_name(cert.status);
    if (!cert.reason.empty()) j["reason"] = cert.reason;
    j["bounds"] = json::array({scalar_to_json(cert.bounds.lower), scalar_to_json(cert.bounds.upper)});
    j["window_nonempty"] = cert.bounds.nonempty;
    if (cert.witness) {
        j["witness"] =
            json::array({scalar_to_json(cert.witness->first), scalar_to_json(cert.witness->second)});
        j["witness_rank"] = cert.witness_rank;
    }
    if (cert.ratio) j["ratio"] = scalar_to_json(*cert.ratio);
    if (cert.neighborhood) {
        j["neighborhood"] = json{
            {"x", json::array({scalar_to_json(cert.neighborhood->x.lo),
                               scalar_to_json(cert.neighborhood->x.hi)})},
            {"y", json::array({scalar_to_json(cert.neighborhood->y.lo),
                               scalar_to_json(cert.neighborhood->y.hi)})},
            {"rank", cert.neighborhood_rank}};
    }
    if (cert.certified)
        j["certified"] =
            json::array({scalar_to_json(cert.certified->lo), scalar_to_json(cert.certified->hi)});
    json audit = json::array();
    for (const auto& row : cert.audit)
        audit.push_back(json{{"rank", row.rank}, {"overlap_ok", row.overlap_ok}});
    j["audit"] = std::move(audit);
    return j;
}

// ---- case reports ----

inline json to_json(const cases::CaseReport& rep) {
    json j;
    j["schema"] = 1;
    j["case"] = rep.name;
    json params = json::object();
    if (!rep.lambda.empty()) params["lambda"] = rep.lambda;
    if (!rep.c.empty()) params["c"] = rep.c;
    j["params"] = std::move(params);
    j["k_max"] = rep.k_max;
    if (!rep.lambda.empty()) j["criterion_holds"] = rep.criterion_holds;
    json ranks = json::array();
    for (const auto& row : rep.ranks) {
        json r;
        r["k"] = row.k;
        r["count"] = row.parts;
        r["measure"] = row.measure;
        r["max_gap"] = row.max_gap;
        ranks.push_back(std::move(r));
    }
    j["ranks"] = std::move(ranks);
    j["truncated"] = rep.truncated;
    if (rep.gap) {
        j["gap"] = json::array({rep.gap->lo, rep.gap->hi});
        j["gap_stable_from"] = rep.gap_stable_from;
        j["gap_stable_to"] = rep.gap_stable_to;
    }
    j["verdict"] = rep.verdict;
    j["consistent"] = rep.consistent;
    return j;
}

} // namespace moran
