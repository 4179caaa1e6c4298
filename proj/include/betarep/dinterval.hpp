#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace betarep {

/// Double-precision interval. Sums and products recover the exact rounding error
/// (TwoSum, FMA) and widen by one ulp only in the direction the result was rounded.
struct DInterval {
    double lo = 0.0;
    double hi = 0.0;

    static double down(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
    static double up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

    static double add_down(double a, double b) {
        const double s = a + b;
        if (!std::isfinite(s)) return s;
        const double bb = s - a;
        const double e = (a - (s - bb)) + (b - bb);
        return e < 0.0 ? down(s) : s;
    }
    static double add_up(double a, double b) {
        const double s = a + b;
        if (!std::isfinite(s)) return s;
        const double bb = s - a;
        const double e = (a - (s - bb)) + (b - bb);
        return e > 0.0 ? up(s) : s;
    }
    static double mul_down(double a, double b) {
        const double p = a * b;
        if (!std::isfinite(p)) return p;
        const double e = std::fma(a, b, -p);
        return e < 0.0 || (std::fabs(p) < 1e-290 && a != 0.0 && b != 0.0) ? down(p) : p;
    }
    static double mul_up(double a, double b) {
        const double p = a * b;
        if (!std::isfinite(p)) return p;
        const double e = std::fma(a, b, -p);
        return e > 0.0 || (std::fabs(p) < 1e-290 && a != 0.0 && b != 0.0) ? up(p) : p;
    }

    static DInterval point(double v) { return {v, v}; }

    double mid() const { return 0.5 * (lo + hi); }
    double rad() const { return up(0.5 * (hi - lo)); }
    bool contains_zero() const { return lo <= 0.0 && hi >= 0.0; }

    friend DInterval operator+(DInterval a, DInterval b) { return {add_down(a.lo, b.lo), add_up(a.hi, b.hi)}; }
    friend DInterval operator-(DInterval a, DInterval b) { return {add_down(a.lo, -b.hi), add_up(a.hi, -b.lo)}; }
    DInterval operator-() const { return {-hi, -lo}; }
    friend DInterval operator*(DInterval a, DInterval b) {
        return {std::min({mul_down(a.lo, b.lo), mul_down(a.lo, b.hi), mul_down(a.hi, b.lo), mul_down(a.hi, b.hi)}),
                std::max({mul_up(a.lo, b.lo), mul_up(a.lo, b.hi), mul_up(a.hi, b.lo), mul_up(a.hi, b.hi)})};
    }
    DInterval abs() const {
        if (lo >= 0.0) return *this;
        if (hi <= 0.0) return -*this;
        return {0.0, std::max(-lo, hi)};
    }
    DInterval sqr() const {
        const DInterval a = abs();
        return {mul_down(a.lo, a.lo), mul_up(a.hi, a.hi)};
    }
    DInterval sqrt() const {
        const double l = std::sqrt(std::max(lo, 0.0));
        const double h = std::sqrt(std::max(hi, 0.0));
        return {std::fma(l, l, -std::max(lo, 0.0)) > 0.0 ? down(l) : l, std::fma(h, h, -std::max(hi, 0.0)) < 0.0 ? up(h) : h};
    }
    DInterval hull(DInterval o) const { return {std::min(lo, o.lo), std::max(hi, o.hi)}; }
};

inline DInterval dmax(DInterval a, DInterval b) { return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)}; }
inline DInterval dmin(DInterval a, DInterval b) { return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)}; }

}  // namespace betarep
