#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace betarep {

using BigInt = mpz_class;

std::size_t hash_value(const BigInt& z) noexcept;
BigInt lcm(const BigInt& a, const BigInt& b);
BigInt gcd(const BigInt& a, const BigInt& b);
BigInt parse_bigint(std::string_view text);

/// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
    Rational(const BigInt& value) : q_(value) {}  // NOLINT(google-explicit-constructor)
    Rational(const BigInt& num, const BigInt& den);
    explicit Rational(const mpq_class& q);

    /// Accepts "p", "p/q" and finite decimals such as "-0.125".
    static Rational parse(std::string_view text);

    const mpq_class& get() const noexcept { return q_; }
    BigInt numerator() const { return q_.get_num(); }
    BigInt denominator() const { return q_.get_den(); }

    bool is_zero() const noexcept { return sgn(q_) == 0; }
    bool is_integer() const noexcept { return q_.get_den() == 1; }
    int sign() const noexcept { return sgn(q_); }

    Rational abs() const { return Rational(::abs(q_)); }
    Rational reciprocal() const;
    double to_double() const { return q_.get_d(); }
    std::string str() const { return q_.get_str(); }

    /// Exponent of p in this number; INT_MAX for zero.
    int valuation(unsigned long p) const;
    /// p-adic absolute value p^{-v_p(x)}, exact.
    Rational padic_abs(unsigned long p) const;

    BigInt floor() const;
    BigInt ceil() const;
    /// Nearest integer, halves rounded toward +infinity.
    BigInt round() const;

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    std::size_t hash() const noexcept;

private:
    mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational pow(const Rational& base, int exponent);

/// Smallest dyadic k/2^bits with k/2^bits >= value (upward rounding of a double).
Rational dyadic_ceil(double value, int bits = 20);
/// Largest dyadic k/2^bits with k/2^bits <= value.
Rational dyadic_floor(double value, int bits = 20);

}  // namespace betarep

template <>
struct std::hash<betarep::Rational> {
    std::size_t operator()(const betarep::Rational& r) const noexcept { return r.hash(); }
};
