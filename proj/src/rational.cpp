#include "betarep/rational.hpp"

#include <cctype>
#include <climits>
#include <cmath>
#include <ostream>

#include "betarep/error.hpp"

namespace betarep {

std::size_t hash_value(const BigInt& z) noexcept {
    const mpz_srcptr p = z.get_mpz_t();
    std::size_t h = static_cast<std::size_t>(p->_mp_size) * 0x9e3779b97f4a7c15ULL;
    const int n = std::abs(p->_mp_size);
    for (int i = 0; i < n; ++i) {
        h ^= static_cast<std::size_t>(p->_mp_d[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

BigInt gcd(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

BigInt parse_bigint(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw Error(ErrorKind::Parse, "empty integer");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw Error(ErrorKind::Parse, "bad integer '" + s + "'");
    for (std::size_t k = i; k < s.size(); ++k) {
        if (!std::isdigit(static_cast<unsigned char>(s[k])))
            throw Error(ErrorKind::Parse, "bad integer '" + s + "'");
    }
    if (s[0] == '+') s.erase(0, 1);
    return BigInt(s, 10);
}

Rational::Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational::Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    if (s.empty()) throw Error(ErrorKind::Parse, "empty rational");
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        return Rational(parse_bigint(s.substr(0, slash)), parse_bigint(s.substr(slash + 1)));
    }
    if (const auto dot = s.find('.'); dot != std::string::npos) {
        std::string whole = s.substr(0, dot);
        const std::string frac = s.substr(dot + 1);
        bool negative = false;
        if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) {
            negative = whole[0] == '-';
            whole.erase(0, 1);
        }
        if (whole.empty()) whole = "0";
        if (frac.empty()) return Rational(negative ? -parse_bigint(whole) : parse_bigint(whole));
        if (frac[0] == '+' || frac[0] == '-') throw Error(ErrorKind::Parse, "bad decimal '" + s + "'");
        BigInt den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        BigInt num = parse_bigint(whole) * den + parse_bigint(frac);
        return Rational(negative ? BigInt(-num) : num, den);
    }
    return Rational(parse_bigint(s));
}

Rational Rational::reciprocal() const {
    if (is_zero()) throw Error(ErrorKind::DivisionByZero, "reciprocal of zero");
    return Rational(q_.get_den(), q_.get_num());
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(ErrorKind::DivisionByZero, "rational division by zero");
    q_ /= o.q_;
    return *this;
}

int Rational::valuation(unsigned long p) const {
    if (is_zero()) return INT_MAX;
    BigInt pz(p);
    BigInt rem;
    int v = 0;
    BigInt n = q_.get_num();
    while (mpz_divisible_p(n.get_mpz_t(), pz.get_mpz_t())) {
        n /= pz;
        ++v;
    }
    BigInt d = q_.get_den();
    while (mpz_divisible_p(d.get_mpz_t(), pz.get_mpz_t())) {
        d /= pz;
        --v;
    }
    return v;
}

Rational Rational::padic_abs(unsigned long p) const {
    if (is_zero()) return Rational(0);
    const int v = valuation(p);
    BigInt pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), p, static_cast<unsigned long>(std::abs(v)));
    return v >= 0 ? Rational(BigInt(1), pk) : Rational(pk);
}

BigInt Rational::floor() const {
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
}

BigInt Rational::ceil() const {
    BigInt r;
    mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
}

BigInt Rational::round() const { return (*this + Rational(BigInt(1), BigInt(2))).floor(); }

std::size_t Rational::hash() const noexcept {
    const std::size_t a = hash_value(q_.get_num());
    const std::size_t b = hash_value(q_.get_den());
    return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational pow(const Rational& base, int exponent) {
    if (exponent < 0) return pow(base.reciprocal(), -exponent);
    Rational result(1);
    Rational b = base;
    unsigned e = static_cast<unsigned>(exponent);
    while (e != 0) {
        if (e & 1U) result *= b;
        b *= b;
        e >>= 1U;
    }
    return result;
}

Rational dyadic_ceil(double value, int bits) {
    const double scaled = std::ceil(std::ldexp(value, bits));
    BigInt num(scaled);
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(bits));
    return Rational(num, den);
}

Rational dyadic_floor(double value, int bits) {
    const double scaled = std::floor(std::ldexp(value, bits));
    BigInt num(scaled);
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(bits));
    return Rational(num, den);
}

}  // namespace betarep
