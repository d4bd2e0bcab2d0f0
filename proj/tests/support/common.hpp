#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <initializer_list>
#include <string>
#include <utility>

#include "moran/cases.hpp"
#include "moran/certify.hpp"
#include "moran/image.hpp"

namespace testing {

using Rat = moran::Rational;
using RInterval = moran::Interval<Rat>;
using RSet = moran::IntervalSet<Rat>;

inline Rat rat(const std::string& s) { return Rat::parse(s); }

inline RInterval riv(const std::string& lo, const std::string& hi) {
    return {rat(lo), rat(hi)};
}

inline RSet rset(std::initializer_list<std::pair<const char*, const char*>> parts) {
    std::vector<RInterval> raw;
    for (const auto& [lo, hi] : parts) raw.push_back(riv(lo, hi));
    return RSet::normalize(std::move(raw));
}

inline moran::MoranSpec<Rat> const_spec(const std::string& c, long long n,
                                        moran::Layout layout = moran::Layout::uniform,
                                        std::uint64_t seed = 0) {
    return {moran::ParamSeq<Rat>::constant(rat(c)), moran::ParamSeq<long long>::constant(n),
            layout, seed};
}

inline moran::MoranSpec<Rat> middle_third() { return const_spec("1/3", 2); }

// Deterministic generator for property-style tests.
struct Lcg {
    std::uint64_t state;
    explicit Lcg(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return state >> 11;
    }

    // inclusive bounds
    long long uniform(long long lo, long long hi) {
        return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    Rat rational(long long max_abs_num, long long max_den) {
        const long long den = uniform(1, max_den);
        const long long num = uniform(-max_abs_num, max_abs_num);
        return Rat(num, den);
    }
};

} // namespace testing
