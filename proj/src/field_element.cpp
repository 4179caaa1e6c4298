#include "betarep/field_element.hpp"

#include <ostream>
#include <sstream>

namespace betarep {

bool same_field(const NumberField& a, const NumberField& b) noexcept {
    return &a == &b || a.min_poly() == b.min_poly();
}

FieldElement::FieldElement(FieldPtr field) : field_(std::move(field)) {
    c_.assign(static_cast<std::size_t>(field_->degree()), Rational(0));
}

FieldElement::FieldElement(FieldPtr field, std::vector<Rational> coeffs) : field_(std::move(field)) {
    reduce(std::move(coeffs));
}

FieldElement FieldElement::from_rational(FieldPtr field, const Rational& value) {
    FieldElement x(std::move(field));
    x.c_[0] = value;
    return x;
}

FieldElement FieldElement::generator(FieldPtr field) {
    if (field->degree() == 1) {
        const Rational b = field->rational_base();
        return from_rational(std::move(field), b);
    }
    FieldElement x(std::move(field));
    x.c_[1] = Rational(1);
    return x;
}

void FieldElement::reduce(std::vector<Rational> poly) {
    const int d = field_->degree();
    const IntPolynomial& m = field_->min_poly();
    if (d == 1) {
        // Q itself: substitute beta = s/t for every power.
        const Rational b = field_->rational_base();
        Rational acc(0);
        for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * b + *it;
        c_.assign(1, acc);
        return;
    }
    for (int k = static_cast<int>(poly.size()) - 1; k >= d; --k) {
        const Rational top = poly[static_cast<std::size_t>(k)];
        if (top.is_zero()) continue;
        for (int j = 0; j < d; ++j) {
            const BigInt& mj = m.coefficients()[static_cast<std::size_t>(j)];
            if (mj != 0) poly[static_cast<std::size_t>(k - d + j)] -= top * Rational(mj);
        }
    }
    poly.resize(static_cast<std::size_t>(d));
    c_ = std::move(poly);
}

bool FieldElement::is_zero() const noexcept {
    for (const auto& c : c_) {
        if (!c.is_zero()) return false;
    }
    return true;
}

bool FieldElement::is_rational() const noexcept {
    for (std::size_t i = 1; i < c_.size(); ++i) {
        if (!c_[i].is_zero()) return false;
    }
    return true;
}

const Rational& FieldElement::rational_value() const {
    if (!is_rational()) throw Error(ErrorKind::InvalidArgument, "element is not rational: " + str());
    return c_[0];
}

void FieldElement::check_same_field(const FieldElement& o) const {
    if (!same_field(*field_, *o.field_)) {
        throw Error(ErrorKind::FieldMismatch,
                    "elements of Q[x]/(" + field_->min_poly().str() + ") and Q[x]/(" + o.field_->min_poly().str() + ")");
    }
}

FieldElement FieldElement::operator-() const {
    FieldElement r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
    check_same_field(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
    check_same_field(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
    check_same_field(o);
    const std::size_t d = c_.size();
    std::vector<Rational> prod(2 * d - 1, Rational(0));
    for (std::size_t i = 0; i < d; ++i) {
        if (c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < d; ++j) {
            if (!o.c_[j].is_zero()) prod[i + j] += c_[i] * o.c_[j];
        }
    }
    reduce(std::move(prod));
    return *this;
}

FieldElement& FieldElement::operator*=(const Rational& r) {
    for (auto& c : c_) c *= r;
    return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) {
    check_same_field(o);
    return *this *= o.inverse();
}

FieldElement FieldElement::mul_generator() const {
    if (field_->degree() == 1) return *this * field_->rational_base();
    std::vector<Rational> shifted(c_.size() + 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) shifted[i + 1] = c_[i];
    return FieldElement(field_, std::move(shifted));
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero in Q(beta)");
    if (field_->degree() == 1) return from_rational(field_, c_[0].reciprocal());
    auto [g, s] = half_xgcd(RatPolynomial(c_), RatPolynomial(field_->min_poly()));
    // g = 1 because the minimal polynomial is irreducible.
    return FieldElement(field_, s.coefficients());
}

FieldElement FieldElement::pow(int exponent) const {
    if (exponent < 0) return inverse().pow(-exponent);
    FieldElement result = from_rational(field_, Rational(1));
    FieldElement base = *this;
    unsigned e = static_cast<unsigned>(exponent);
    while (e != 0) {
        if (e & 1U) result *= base;
        base *= base;
        e >>= 1U;
    }
    return result;
}

BigInt FieldElement::denominator_bound() const {
    BigInt l(1);
    for (const auto& c : c_) l = lcm(l, c.denominator());
    return l;
}

std::size_t FieldElement::hash() const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& c : c_) h ^= c.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

std::string FieldElement::str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? ", " : "") << c_[i];
    os << "]";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const FieldElement& x) { return os << x.str(); }

}  // namespace betarep
