#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "betarep/number_field.hpp"

namespace betarep {

/// Element of Q(beta) in the power basis 1, beta, ..., beta^{d-1}. The coefficient
/// vector always has length d and reduced rationals, so equal elements compare and
/// hash identically.
class FieldElement {
public:
    explicit FieldElement(FieldPtr field);
    /// Coefficients of any length; reduced modulo the minimal polynomial.
    FieldElement(FieldPtr field, std::vector<Rational> coeffs);

    static FieldElement from_rational(FieldPtr field, const Rational& value);
    /// The base beta itself.
    static FieldElement generator(FieldPtr field);

    const FieldPtr& field() const noexcept { return field_; }
    const std::vector<Rational>& coeffs() const noexcept { return c_; }
    int degree() const noexcept { return static_cast<int>(c_.size()); }

    bool is_zero() const noexcept;
    bool is_rational() const noexcept;
    /// Throws InvalidArgument unless is_rational().
    const Rational& rational_value() const;

    FieldElement operator-() const;
    FieldElement& operator+=(const FieldElement& o);
    FieldElement& operator-=(const FieldElement& o);
    FieldElement& operator*=(const FieldElement& o);
    FieldElement& operator/=(const FieldElement& o);
    FieldElement& operator*=(const Rational& r);

    friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
    friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
    friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
    friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
    friend FieldElement operator*(FieldElement a, const Rational& b) { return a *= b; }

    friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.c_ == b.c_; }

    /// beta * x.
    FieldElement mul_generator() const;
    FieldElement inverse() const;
    FieldElement pow(int exponent) const;

    /// lcm of the coefficient denominators.
    BigInt denominator_bound() const;

    std::size_t hash() const noexcept;
    std::string str() const;

private:
    void check_same_field(const FieldElement& o) const;
    void reduce(std::vector<Rational> poly);

    FieldPtr field_;
    std::vector<Rational> c_;
};

std::ostream& operator<<(std::ostream& os, const FieldElement& x);

bool same_field(const NumberField& a, const NumberField& b) noexcept;

}  // namespace betarep

template <>
struct std::hash<betarep::FieldElement> {
    std::size_t operator()(const betarep::FieldElement& x) const noexcept { return x.hash(); }
};
