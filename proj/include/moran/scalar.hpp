#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <string_view>

#include "moran/rational.hpp"

namespace moran {

/// Backend traits. Rational is the exact backend (no rounding anywhere);
/// double is the floating backend, whose set operations carry an explicit
/// merge tolerance.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static Rational parse(std::string_view text) { return Rational::parse(text); }
    static double to_double(const Rational& v) { return v.to_double(); }
    static std::string str(const Rational& v) { return v.to_string(); }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;

    static double parse(std::string_view text) {
        if (auto slash = text.find('/'); slash != std::string_view::npos) {
            const Rational r = Rational::parse(text);
            return r.to_double();
        }
        double v = 0.0;
        const char* first = text.data();
        const char* last = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last) throw InvalidInput("invalid float literal");
        return v;
    }

    static double to_double(double v) { return v; }

    static std::string str(double v) {
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, ptr);
    }
};

template <class S>
inline constexpr bool is_exact_v = ScalarTraits<S>::exact;

template <class S>
double to_double(const S& v) {
    return ScalarTraits<S>::to_double(v);
}

template <class S>
S abs_of(const S& v) {
    return v < S(0) ? -v : v;
}

/// Directed rounding helpers: identity on the exact backend, one-ulp nudges on
/// the floating backend so computed enclosures stay enclosures.
inline Rational round_down(const Rational& v) { return v; }
inline Rational round_up(const Rational& v) { return v; }
inline double round_down(double v) {
    return std::nextafter(v, -std::numeric_limits<double>::infinity());
}
inline double round_up(double v) {
    return std::nextafter(v, std::numeric_limits<double>::infinity());
}

} // namespace moran
