#pragma once

#include <string>
#include <utility>

#include <mpfr.h>

#include "betarep/rational.hpp"

namespace betarep {

/// Owning wrapper for one mpfr_t with value semantics.
class Real {
public:
    explicit Real(mpfr_prec_t prec = 64) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(double value, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, value, MPFR_RNDN); }
    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() noexcept { return v_; }
    mpfr_srcptr get() const noexcept { return v_; }
    mpfr_prec_t prec() const noexcept { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    /// Exact conversion (every finite mpfr value is a dyadic rational).
    Rational to_rational() const;
    std::string str(int digits = 20) const;

private:
    mpfr_t v_;
};

/// Closed real interval [lo, hi] with outward-rounded endpoint arithmetic.
class Interval {
public:
    explicit Interval(mpfr_prec_t prec = 64) : lo_(prec), hi_(prec) {}
    Interval(const Rational& value, mpfr_prec_t prec);
    Interval(long value, mpfr_prec_t prec) : Interval(Rational(value), prec) {}
    static Interval from_bounds(const Real& lo, const Real& hi);
    static Interval from_doubles(double lo, double hi, mpfr_prec_t prec);

    mpfr_prec_t prec() const noexcept { return lo_.prec(); }
    const Real& lo() const noexcept { return lo_; }
    const Real& hi() const noexcept { return hi_; }
    double lo_d() const { return mpfr_get_d(lo_.get(), MPFR_RNDD); }
    double hi_d() const { return mpfr_get_d(hi_.get(), MPFR_RNDU); }
    double mid_d() const;
    /// Upper bound of the half-width.
    double rad_d() const;

    bool contains_zero() const { return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0; }
    bool is_point() const { return mpfr_equal_p(lo_.get(), hi_.get()) != 0; }
    bool certainly_positive() const { return mpfr_sgn(lo_.get()) > 0; }
    bool certainly_negative() const { return mpfr_sgn(hi_.get()) < 0; }
    bool contains(const Rational& value) const;
    bool subset_of(const Interval& o) const;

    /// a < b for every choice of points.
    friend bool certainly_less(const Interval& a, const Interval& b) {
        return mpfr_less_p(a.hi_.get(), b.lo_.get()) != 0;
    }
    friend bool certainly_less_equal(const Interval& a, const Interval& b) {
        return mpfr_lessequal_p(a.hi_.get(), b.lo_.get()) != 0;
    }

    friend Interval operator+(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a, const Interval& b);
    friend Interval operator*(const Interval& a, const Interval& b);
    /// Throws DivisionByZero when b contains zero.
    friend Interval operator/(const Interval& a, const Interval& b);
    Interval operator-() const;

    Interval sqr() const;
    Interval sqrt() const;
    Interval abs() const;
    Interval pow(int exponent) const;
    /// Convex hull.
    Interval hull(const Interval& o) const;
    /// Widen both ends by r (r >= 0).
    Interval widened(const Real& r) const;

    std::string str() const;

private:
    Real lo_;
    Real hi_;
};

Interval max(const Interval& a, const Interval& b);
Interval min(const Interval& a, const Interval& b);

/// Rectangular complex interval.
struct CInterval {
    Interval re;
    Interval im;

    explicit CInterval(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
    CInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}

    mpfr_prec_t prec() const noexcept { return re.prec(); }
    CInterval conj() const { return {re, -im}; }
    Interval abs() const;
    Interval norm_sq() const;
    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }

    friend CInterval operator+(const CInterval& a, const CInterval& b) { return {a.re + b.re, a.im + b.im}; }
    friend CInterval operator-(const CInterval& a, const CInterval& b) { return {a.re - b.re, a.im - b.im}; }
    friend CInterval operator*(const CInterval& a, const CInterval& b);
    friend CInterval operator*(const CInterval& a, const Interval& b) { return {a.re * b, a.im * b}; }
    /// Throws DivisionByZero when b may vanish.
    friend CInterval operator/(const CInterval& a, const CInterval& b);
    CInterval operator-() const { return {-re, -im}; }
};

}  // namespace betarep
