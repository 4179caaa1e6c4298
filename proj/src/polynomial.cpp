#include "betarep/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

#include "betarep/error.hpp"

namespace betarep {

IntPolynomial::IntPolynomial(std::vector<BigInt> coefficients) : c_(std::move(coefficients)) { normalize(); }

IntPolynomial::IntPolynomial(std::initializer_list<long> coefficients) {
    for (long c : coefficients) c_.emplace_back(c);
    normalize();
}

void IntPolynomial::normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

IntPolynomial IntPolynomial::parse(std::string_view text) {
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    }
    if (s.empty()) throw Error(ErrorKind::Parse, "empty polynomial");
    std::vector<BigInt> coeffs;
    std::size_t i = 0;
    auto add_term = [&coeffs](const BigInt& c, std::size_t power) {
        if (coeffs.size() <= power) coeffs.resize(power + 1);
        coeffs[power] += c;
    };
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            throw Error(ErrorKind::Parse, "expected sign at position " + std::to_string(i) + " in '" + s + "'");
        }
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        BigInt coeff = start == i ? BigInt(1) : BigInt(s.substr(start, i - start), 10);
        bool has_digits = start != i;
        if (i < s.size() && s[i] == '*') {
            if (!has_digits) throw Error(ErrorKind::Parse, "dangling '*' in '" + s + "'");
            ++i;
        }
        std::size_t power = 0;
        if (i < s.size() && (s[i] == 'x' || s[i] == 'X')) {
            ++i;
            power = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t ps = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (ps == i) throw Error(ErrorKind::Parse, "missing exponent in '" + s + "'");
                power = std::stoul(s.substr(ps, i - ps));
            }
        } else if (!has_digits) {
            throw Error(ErrorKind::Parse, "bad term in '" + s + "'");
        }
        if (power > 4096) throw Error(ErrorKind::Parse, "degree too large in '" + s + "'");
        add_term(sign * coeff, power);
    }
    return IntPolynomial(std::move(coeffs));
}

IntPolynomial IntPolynomial::reversed() const {
    std::vector<BigInt> r(c_.rbegin(), c_.rend());
    return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::negated_variable() const {
    std::vector<BigInt> r = c_;
    const int d = degree();
    for (int i = 0; i <= d; ++i) {
        if ((d - i) % 2 != 0) r[i] = -r[i];
    }
    return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::derivative() const {
    std::vector<BigInt> r;
    for (std::size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i] * static_cast<unsigned long>(i));
    return IntPolynomial(std::move(r));
}

BigInt IntPolynomial::content() const {
    BigInt g(0);
    for (const auto& c : c_) g = gcd(g, c);
    return g;
}

Rational IntPolynomial::eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + Rational(*it);
    return acc;
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<BigInt> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[static_cast<int>(i)] + b[static_cast<int>(i)];
    return IntPolynomial(std::move(r));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<BigInt> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[static_cast<int>(i)] - b[static_cast<int>(i)];
    return IntPolynomial(std::move(r));
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<BigInt> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::operator-() const {
    std::vector<BigInt> r = c_;
    for (auto& c : r) c = -c;
    return IntPolynomial(std::move(r));
}

bool IntPolynomial::divides_into(const IntPolynomial& numerator, IntPolynomial* quotient) const {
    if (is_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero polynomial");
    std::vector<BigInt> rem = numerator.c_;
    const int dd = degree();
    if (numerator.degree() < dd) {
        if (quotient) *quotient = IntPolynomial();
        return numerator.is_zero();
    }
    std::vector<BigInt> q(static_cast<std::size_t>(numerator.degree() - dd + 1));
    for (int k = numerator.degree(); k >= dd; --k) {
        const BigInt& top = rem[static_cast<std::size_t>(k)];
        if (top == 0) continue;
        if (!mpz_divisible_p(top.get_mpz_t(), leading().get_mpz_t())) return false;
        BigInt f = top / leading();
        q[static_cast<std::size_t>(k - dd)] = f;
        for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(k - dd + j)] -= f * c_[static_cast<std::size_t>(j)];
    }
    for (const auto& r : rem) {
        if (r != 0) return false;
    }
    if (quotient) *quotient = IntPolynomial(std::move(q));
    return true;
}

std::string IntPolynomial::str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const BigInt& c = c_[static_cast<std::size_t>(k)];
        if (c == 0) continue;
        BigInt mag = abs(c);
        if (c < 0) os << (first ? "-" : "-");
        else if (!first) os << "+";
        if (k == 0 || mag != 1) os << mag.get_str();
        if (k >= 1) os << "x";
        if (k >= 2) os << "^" << k;
        first = false;
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const IntPolynomial& p) { return os << p.str(); }

RatPolynomial::RatPolynomial(std::vector<Rational> coefficients) : c_(std::move(coefficients)) { normalize(); }

RatPolynomial::RatPolynomial(const IntPolynomial& p) {
    for (const auto& c : p.coefficients()) c_.emplace_back(c);
    normalize();
}

void RatPolynomial::normalize() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

RatPolynomial RatPolynomial::monic() const {
    if (is_zero()) return *this;
    std::vector<Rational> r = c_;
    const Rational lead = leading();
    for (auto& c : r) c /= lead;
    return RatPolynomial(std::move(r));
}

RatPolynomial operator+(const RatPolynomial& a, const RatPolynomial& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[static_cast<int>(i)] + b[static_cast<int>(i)];
    return RatPolynomial(std::move(r));
}

RatPolynomial operator-(const RatPolynomial& a, const RatPolynomial& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[static_cast<int>(i)] - b[static_cast<int>(i)];
    return RatPolynomial(std::move(r));
}

RatPolynomial operator*(const RatPolynomial& a, const RatPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return RatPolynomial(std::move(r));
}

std::pair<RatPolynomial, RatPolynomial> RatPolynomial::divmod(const RatPolynomial& divisor) const {
    if (divisor.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero polynomial");
    std::vector<Rational> rem = c_;
    const int dd = divisor.degree();
    if (degree() < dd) return {RatPolynomial(), *this};
    std::vector<Rational> q(static_cast<std::size_t>(degree() - dd + 1));
    const Rational lead = divisor.leading();
    for (int k = degree(); k >= dd; --k) {
        const Rational top = rem[static_cast<std::size_t>(k)];
        if (top.is_zero()) continue;
        const Rational f = top / lead;
        q[static_cast<std::size_t>(k - dd)] = f;
        for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(k - dd + j)] -= f * divisor.c_[static_cast<std::size_t>(j)];
    }
    rem.resize(static_cast<std::size_t>(dd));
    return {RatPolynomial(std::move(q)), RatPolynomial(std::move(rem))};
}

RatPolynomial gcd(const RatPolynomial& a, const RatPolynomial& b) {
    RatPolynomial x = a;
    RatPolynomial y = b;
    while (!y.is_zero()) {
        auto r = x.divmod(y).second;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

std::pair<RatPolynomial, RatPolynomial> half_xgcd(const RatPolynomial& a, const RatPolynomial& b) {
    // Invariant: s0*a = r0 (mod b), s1*a = r1 (mod b).
    RatPolynomial r0 = a;
    RatPolynomial r1 = b;
    RatPolynomial s0(std::vector<Rational>{Rational(1)});
    RatPolynomial s1;
    while (!r1.is_zero()) {
        auto [q, r] = r0.divmod(r1);
        RatPolynomial s = s0 - q * s1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    if (r0.is_zero()) return {RatPolynomial(), RatPolynomial()};
    const Rational lead = r0.leading();
    std::vector<Rational> sc = s0.coefficients();
    for (auto& c : sc) c /= lead;
    return {r0.monic(), RatPolynomial(std::move(sc))};
}

}  // namespace betarep
