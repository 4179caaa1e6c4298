#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "betarep/rational.hpp"

namespace betarep {

/// Dense integer polynomial, constant term first. The zero polynomial has no coefficients.
class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<BigInt> coefficients);
    IntPolynomial(std::initializer_list<long> coefficients);

    /// Parses expressions such as "x^4-x^3-x^2-x+1" or "2*x - 3".
    static IntPolynomial parse(std::string_view text);

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    const std::vector<BigInt>& coefficients() const noexcept { return c_; }
    BigInt operator[](int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : BigInt(0); }
    const BigInt& leading() const { return c_.back(); }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }

    /// x^d p(1/x).
    IntPolynomial reversed() const;
    /// p(-x), multiplied by (-1)^d so that the leading sign is kept.
    IntPolynomial negated_variable() const;
    IntPolynomial derivative() const;
    BigInt content() const;

    Rational eval(const Rational& x) const;

    friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
    friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
    friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
    IntPolynomial operator-() const;
    friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) { return a.c_ == b.c_; }

    /// Exact division over Z; returns false when the quotient is not integral or the remainder is nonzero.
    bool divides_into(const IntPolynomial& numerator, IntPolynomial* quotient = nullptr) const;

    std::string str() const;

private:
    void normalize();
    std::vector<BigInt> c_;
};

std::ostream& operator<<(std::ostream& os, const IntPolynomial& p);

/// Dense polynomial over Q, constant term first; used for Euclidean algorithms.
class RatPolynomial {
public:
    RatPolynomial() = default;
    explicit RatPolynomial(std::vector<Rational> coefficients);
    explicit RatPolynomial(const IntPolynomial& p);

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    const std::vector<Rational>& coefficients() const noexcept { return c_; }
    Rational operator[](int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : Rational(0); }
    const Rational& leading() const { return c_.back(); }

    RatPolynomial monic() const;

    friend RatPolynomial operator+(const RatPolynomial& a, const RatPolynomial& b);
    friend RatPolynomial operator-(const RatPolynomial& a, const RatPolynomial& b);
    friend RatPolynomial operator*(const RatPolynomial& a, const RatPolynomial& b);
    friend bool operator==(const RatPolynomial& a, const RatPolynomial& b) { return a.c_ == b.c_; }

    /// Quotient and remainder; throws DivisionByZero for a zero divisor.
    std::pair<RatPolynomial, RatPolynomial> divmod(const RatPolynomial& divisor) const;

private:
    void normalize();
    std::vector<Rational> c_;
};

/// Monic gcd over Q.
RatPolynomial gcd(const RatPolynomial& a, const RatPolynomial& b);

/// Returns (g, s) with s*a = g mod b, g the monic gcd.
std::pair<RatPolynomial, RatPolynomial> half_xgcd(const RatPolynomial& a, const RatPolynomial& b);

}  // namespace betarep
