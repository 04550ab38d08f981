#include "wp/rational.hpp"

#include <charconv>

namespace wp {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t v = 0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    if (!s.empty() && s.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec == std::errc::result_out_of_range) throw OverflowError("integer out of range: " + std::string(whole));
    if (ec != std::errc() || ptr != last || first == last)
        throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
    return v;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const __int128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    Rational r;
    r.num_ = checked::narrow(num, "rational numerator overflow");
    r.den_ = checked::narrow(den, "rational denominator overflow");
    return r;
}

Rational Rational::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text, text));
    const std::int64_t p = parse_int(text.substr(0, slash), text);
    const std::int64_t q = parse_int(text.substr(slash + 1), text);
    if (q == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    return Rational(p, q);
}

std::string Rational::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

std::string Rational::short_str() const { return den_ == 1 ? std::to_string(num_) : str(); }

Rational Rational::operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return Rational::from_wide(static_cast<__int128>(a.num_) + b.num_, a.den_);
    return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                               static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    // Cross-reduce first so that products of already-reduced values stay small.
    const std::int64_t g1 = std::gcd(a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_, a.den_);
    const __int128 n = static_cast<__int128>(a.num_ / g1) * (b.num_ / g2);
    const __int128 d = static_cast<__int128>(a.den_ / g2) * (b.den_ / g1);
    return Rational::from_wide(n, d);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return a * Rational::from_wide(b.den_, b.num_);
}

}  // namespace wp
