#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "moran/errors.hpp"

namespace moran {

namespace detail {

using i128 = __int128;
using u128 = unsigned __int128;

inline u128 uabs128(i128 v) {
    return v < 0 ? u128(0) - static_cast<u128>(v) : static_cast<u128>(v);
}

inline int trailing_zeros(u128 v) {
    // v != 0
    std::uint64_t lo = static_cast<std::uint64_t>(v);
    if (lo != 0) return __builtin_ctzll(lo);
    return 64 + __builtin_ctzll(static_cast<std::uint64_t>(v >> 64));
}

inline u128 gcd128(u128 a, u128 b) {
    if (a == 0) return b;
    if (b == 0) return a;
    const int shift = trailing_zeros(a | b);
    a >>= trailing_zeros(a);
    while (b != 0) {
        b >>= trailing_zeros(b);
        if (a > b) {
            u128 t = a;
            a = b;
            b = t;
        }
        b -= a;
    }
    return a << shift;
}

inline i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw NumericOverflow("exact add out of range");
    return r;
}

inline i128 checked_sub(i128 a, i128 b) {
    i128 r;
    if (__builtin_sub_overflow(a, b, &r)) throw NumericOverflow("exact sub out of range");
    return r;
}

inline i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw NumericOverflow("exact mul out of range");
    return r;
}

inline i128 checked_neg(i128 a) { return checked_sub(0, a); }

std::string i128_to_string(i128 v);

} // namespace detail

/// Exact rational scalar on 128-bit integers. Always stored reduced with a
/// positive denominator. Arithmetic that would leave the representable range
/// throws NumericOverflow instead of wrapping.
class Rational {
public:
    using int_t = detail::i128;

    Rational() = default;
    Rational(int n) : num_(n) {}
    Rational(long long n) : num_(n) {}
    Rational(long long num, long long den) : num_(num), den_(den) { reduce(); }

    static Rational from_i128(int_t num, int_t den) {
        Rational r;
        r.num_ = num;
        r.den_ = den;
        r.reduce();
        return r;
    }

    /// Accepts "p/q", integers ("-3") and exact decimals ("0.49").
    static Rational parse(std::string_view text);

    int_t num() const { return num_; }
    int_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }
    bool is_integer() const { return den_ == 1; }

    Rational operator-() const {
        Rational r;
        r.num_ = detail::checked_neg(num_);
        r.den_ = den_;
        return r;
    }

    Rational& operator+=(const Rational& o) {
        using namespace detail;
        const i128 g = static_cast<i128>(gcd128(uabs128(den_), uabs128(o.den_)));
        const i128 bg = o.den_ / g;
        const i128 num = checked_add(checked_mul(num_, bg), checked_mul(o.num_, den_ / g));
        const i128 den = checked_mul(den_, bg);
        num_ = num;
        den_ = den;
        reduce();
        return *this;
    }

    Rational& operator-=(const Rational& o) { return *this += -o; }

    Rational& operator*=(const Rational& o) {
        using namespace detail;
        // inputs are reduced, so cross-cancellation yields a reduced result
        const i128 g1 = static_cast<i128>(gcd128(uabs128(num_), uabs128(o.den_)));
        const i128 g2 = static_cast<i128>(gcd128(uabs128(o.num_), uabs128(den_)));
        num_ = checked_mul(num_ / g1, o.num_ / g2);
        den_ = checked_mul(den_ / g2, o.den_ / g1);
        return *this;
    }

    Rational& operator/=(const Rational& o) {
        if (o.num_ == 0) throw InvalidInput("rational division by zero");
        Rational inv;
        inv.num_ = o.den_;
        inv.den_ = o.num_;
        if (inv.den_ < 0) {
            inv.num_ = detail::checked_neg(inv.num_);
            inv.den_ = detail::checked_neg(inv.den_);
        }
        return *this *= inv;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        using namespace detail;
        if (a.den_ == b.den_) return cmp(a.num_, b.num_);
        const i128 g = static_cast<i128>(gcd128(uabs128(a.den_), uabs128(b.den_)));
        return cmp(checked_mul(a.num_, b.den_ / g), checked_mul(b.num_, a.den_ / g));
    }

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    double to_double() const {
        return static_cast<double>(static_cast<long double>(num_) /
                                   static_cast<long double>(den_));
    }

    /// "p/q", or just "p" when the value is an integer.
    std::string to_string() const {
        std::string s = detail::i128_to_string(num_);
        if (den_ != 1) {
            s += '/';
            s += detail::i128_to_string(den_);
        }
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        return os << r.to_string();
    }

private:
    int_t num_ = 0;
    int_t den_ = 1;

    static std::strong_ordering cmp(detail::i128 a, detail::i128 b) {
        if (a < b) return std::strong_ordering::less;
        if (a > b) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    void reduce() {
        using namespace detail;
        if (den_ == 0) throw InvalidInput("rational with zero denominator");
        if (den_ < 0) {
            num_ = checked_neg(num_);
            den_ = checked_neg(den_);
        }
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        const i128 g = static_cast<i128>(gcd128(uabs128(num_), uabs128(den_)));
        num_ /= g;
        den_ /= g;
    }
};

namespace detail {

inline std::string i128_to_string(i128 v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    u128 u = uabs128(v);
    char buf[48];
    int pos = 48;
    while (u != 0) {
        buf[--pos] = static_cast<char>('0' + static_cast<int>(u % 10));
        u /= 10;
    }
    std::string s;
    if (neg) s += '-';
    s.append(buf + pos, buf + 48);
    return s;
}

inline i128 parse_digits(std::string_view digits) {
    if (digits.empty()) throw InvalidInput("empty digit run in rational literal");
    i128 v = 0;
    for (char ch : digits) {
        if (ch < '0' || ch > '9') throw InvalidInput("invalid character in rational literal");
        v = checked_add(checked_mul(v, 10), ch - '0');
    }
    return v;
}

} // namespace detail

inline Rational Rational::parse(std::string_view text) {
    using namespace detail;
    std::string_view s = text;
    bool neg = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) throw InvalidInput("empty rational literal");

    Rational r;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        const i128 p = parse_digits(s.substr(0, slash));
        const i128 q = parse_digits(s.substr(slash + 1));
        r = from_i128(p, q);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        const std::string_view ip = s.substr(0, dot);
        const std::string_view fp = s.substr(dot + 1);
        i128 scale = 1;
        for (size_t i = 0; i < fp.size(); ++i) scale = checked_mul(scale, 10);
        const i128 whole = ip.empty() ? 0 : parse_digits(ip);
        const i128 frac = fp.empty() ? 0 : parse_digits(fp);
        r = from_i128(checked_add(checked_mul(whole, scale), frac), scale);
    } else {
        r = from_i128(parse_digits(s), 1);
    }
    return neg ? -r : r;
}

} // namespace moran
