#pragma once

// Exact rational numbers over 64-bit integers.
//
// Every operation is computed in 128-bit intermediates and reduced; a result
// that does not fit back into int64 throws OverflowError rather than wrapping.

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wp {

class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

namespace checked {

inline std::int64_t narrow(__int128 v, const char* what = "int64 overflow") {
    if (v > INT64_MAX || v < INT64_MIN) throw OverflowError(what);
    return static_cast<std::int64_t>(v);
}

inline std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int64 overflow in add");
    return r;
}

inline std::int64_t sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("int64 overflow in sub");
    return r;
}

inline std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int64 overflow in mul");
    return r;
}

inline std::int64_t lcm(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0;
    const std::int64_t g = std::gcd(a, b);
    return mul(a / g, b);
}

}  // namespace checked

class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num) : num_(num), den_(1) {}  // NOLINT(implicit)
    Rational(std::int64_t num, std::int64_t den);

    /// Parses "n", "-n" or "p/q" (whitespace not allowed).
    static Rational parse(std::string_view text);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return (num_ > 0) - (num_ < 0); }

    /// Always "p/q", with q > 0 and gcd(p, q) = 1.
    std::string str() const;
    /// "p" when the denominator is 1, otherwise "p/q".
    std::string short_str() const;
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const __int128 l = static_cast<__int128>(a.num_) * b.den_;
        const __int128 r = static_cast<__int128>(b.num_) * a.den_;
        return l <=> r;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.short_str(); }

private:
    static Rational from_wide(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace wp
