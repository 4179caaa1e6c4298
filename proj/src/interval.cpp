#include "betarep/interval.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "betarep/error.hpp"

namespace betarep {

namespace {

mpfr_prec_t max_prec(const Interval& a, const Interval& b) { return std::max(a.prec(), b.prec()); }

}  // namespace

Rational Real::to_rational() const {
    if (!mpfr_number_p(get())) throw Error(ErrorKind::InvalidArgument, "non-finite mpfr value");
    if (mpfr_zero_p(get())) return Rational(0);
    BigInt mant;
    const mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), get());
    if (e >= 0) {
        BigInt scaled = mant;
        mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
        return Rational(scaled);
    }
    BigInt den(1);
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
    return Rational(mant, den);
}

std::string Real::str(int digits) const {
    std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, get());
    return std::string(buf.data());
}

Interval::Interval(const Rational& value, mpfr_prec_t prec) : lo_(prec), hi_(prec) {
    mpfr_set_q(lo_.get(), value.get().get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_.get(), value.get().get_mpq_t(), MPFR_RNDU);
}

Interval Interval::from_bounds(const Real& lo, const Real& hi) {
    Interval r(std::max(lo.prec(), hi.prec()));
    mpfr_set(r.lo_.get(), lo.get(), MPFR_RNDD);
    mpfr_set(r.hi_.get(), hi.get(), MPFR_RNDU);
    return r;
}

Interval Interval::from_doubles(double lo, double hi, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_d(r.lo_.get(), lo, MPFR_RNDD);
    mpfr_set_d(r.hi_.get(), hi, MPFR_RNDU);
    return r;
}

double Interval::mid_d() const {
    Real m(prec() + 1);
    mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
    mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
    return m.to_double();
}

double Interval::rad_d() const {
    Real w(prec());
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    mpfr_div_2ui(w.get(), w.get(), 1, MPFR_RNDU);
    return mpfr_get_d(w.get(), MPFR_RNDU);
}

bool Interval::contains(const Rational& value) const {
    return mpfr_cmp_q(lo_.get(), value.get().get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), value.get().get_mpq_t()) >= 0;
}

bool Interval::subset_of(const Interval& o) const {
    return mpfr_greaterequal_p(lo_.get(), o.lo_.get()) && mpfr_lessequal_p(hi_.get(), o.hi_.get());
}

Interval operator+(const Interval& a, const Interval& b) {
    Interval r(max_prec(a, b));
    mpfr_add(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_add(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return r;
}

Interval operator-(const Interval& a, const Interval& b) {
    Interval r(max_prec(a, b));
    mpfr_sub(r.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
    mpfr_sub(r.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
    return r;
}

Interval Interval::operator-() const {
    Interval r(prec());
    mpfr_neg(r.lo_.get(), hi_.get(), MPFR_RNDD);
    mpfr_neg(r.hi_.get(), lo_.get(), MPFR_RNDU);
    return r;
}

Interval operator*(const Interval& a, const Interval& b) {
    const mpfr_prec_t p = max_prec(a, b);
    Interval r(p);
    Real t(p);
    bool first = true;
    const Real* xs[2] = {&a.lo_, &a.hi_};
    const Real* ys[2] = {&b.lo_, &b.hi_};
    for (const Real* x : xs) {
        for (const Real* y : ys) {
            mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDD);
            if (first || mpfr_less_p(t.get(), r.lo_.get())) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
            mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDU);
            if (first || mpfr_greater_p(t.get(), r.hi_.get())) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
            first = false;
        }
    }
    return r;
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw Error(ErrorKind::DivisionByZero, "interval divisor contains zero");
    const mpfr_prec_t p = max_prec(a, b);
    Interval r(p);
    Real t(p);
    bool first = true;
    const Real* xs[2] = {&a.lo_, &a.hi_};
    const Real* ys[2] = {&b.lo_, &b.hi_};
    for (const Real* x : xs) {
        for (const Real* y : ys) {
            mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDD);
            if (first || mpfr_less_p(t.get(), r.lo_.get())) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
            mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDU);
            if (first || mpfr_greater_p(t.get(), r.hi_.get())) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
            first = false;
        }
    }
    return r;
}

Interval Interval::abs() const {
    if (mpfr_sgn(lo_.get()) >= 0) return *this;
    if (mpfr_sgn(hi_.get()) <= 0) return -*this;
    Interval r(prec());
    mpfr_set_zero(r.lo_.get(), 1);
    if (mpfr_cmpabs(lo_.get(), hi_.get()) > 0) mpfr_neg(r.hi_.get(), lo_.get(), MPFR_RNDU);
    else mpfr_set(r.hi_.get(), hi_.get(), MPFR_RNDU);
    return r;
}

Interval Interval::sqr() const {
    const Interval a = abs();
    Interval r(prec());
    mpfr_sqr(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
    mpfr_sqr(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
    return r;
}

Interval Interval::sqrt() const {
    if (mpfr_sgn(hi_.get()) < 0) throw Error(ErrorKind::InvalidArgument, "sqrt of a negative interval");
    Interval r(prec());
    if (mpfr_sgn(lo_.get()) <= 0) mpfr_set_zero(r.lo_.get(), 1);
    else mpfr_sqrt(r.lo_.get(), lo_.get(), MPFR_RNDD);
    mpfr_sqrt(r.hi_.get(), hi_.get(), MPFR_RNDU);
    return r;
}

Interval Interval::pow(int exponent) const {
    if (exponent < 0) return Interval(Rational(1), prec()) / pow(-exponent);
    Interval result(Rational(1), prec());
    for (int i = 0; i < exponent; ++i) result = result * *this;
    return result;
}

Interval Interval::hull(const Interval& o) const {
    Interval r(max_prec(*this, o));
    mpfr_min(r.lo_.get(), lo_.get(), o.lo_.get(), MPFR_RNDD);
    mpfr_max(r.hi_.get(), hi_.get(), o.hi_.get(), MPFR_RNDU);
    return r;
}

Interval Interval::widened(const Real& rad) const {
    Interval r(prec());
    mpfr_sub(r.lo_.get(), lo_.get(), rad.get(), MPFR_RNDD);
    mpfr_add(r.hi_.get(), hi_.get(), rad.get(), MPFR_RNDU);
    return r;
}

std::string Interval::str() const { return "[" + lo_.str(17) + ", " + hi_.str(17) + "]"; }

Interval max(const Interval& a, const Interval& b) {
    Interval r(max_prec(a, b));
    Real lo(r.prec());
    Real hi(r.prec());
    mpfr_max(lo.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
    mpfr_max(hi.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
    return Interval::from_bounds(lo, hi);
}

Interval min(const Interval& a, const Interval& b) {
    Interval r(max_prec(a, b));
    Real lo(r.prec());
    Real hi(r.prec());
    mpfr_min(lo.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
    mpfr_min(hi.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
    return Interval::from_bounds(lo, hi);
}

Interval CInterval::norm_sq() const { return re.sqr() + im.sqr(); }

Interval CInterval::abs() const { return norm_sq().sqrt(); }

CInterval operator*(const CInterval& a, const CInterval& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

CInterval operator/(const CInterval& a, const CInterval& b) {
    const Interval n = b.norm_sq();
    const CInterval num = a * b.conj();
    return {num.re / n, num.im / n};
}

}  // namespace betarep
