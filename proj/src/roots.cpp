#include "betarep/roots.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "betarep/error.hpp"

namespace betarep {
namespace {

/// Round-to-nearest complex number for the iteration itself; certification is separate.
struct Approx {
    Real re;
    Real im;

    explicit Approx(mpfr_prec_t p) : re(p), im(p) {}
};

class ApproxOps {
public:
    explicit ApproxOps(mpfr_prec_t p) : p_(p), t1_(p), t2_(p), t3_(p) {}

    Approx make() const { return Approx(p_); }

    void add(Approx& r, const Approx& a, const Approx& b) {
        mpfr_add(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
        mpfr_add(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    }
    void sub(Approx& r, const Approx& a, const Approx& b) {
        mpfr_sub(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
        mpfr_sub(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    }
    void mul(Approx& r, const Approx& a, const Approx& b) {
        mpfr_mul(t1_.get(), a.re.get(), b.re.get(), MPFR_RNDN);
        mpfr_mul(t2_.get(), a.im.get(), b.im.get(), MPFR_RNDN);
        mpfr_mul(t3_.get(), a.re.get(), b.im.get(), MPFR_RNDN);
        mpfr_fma(r.im.get(), a.im.get(), b.re.get(), t3_.get(), MPFR_RNDN);
        mpfr_sub(r.re.get(), t1_.get(), t2_.get(), MPFR_RNDN);
    }
    /// Returns false when b is zero.
    bool div(Approx& r, const Approx& a, const Approx& b) {
        Real n(p_);
        mpfr_sqr(n.get(), b.re.get(), MPFR_RNDN);
        mpfr_fma(n.get(), b.im.get(), b.im.get(), n.get(), MPFR_RNDN);
        if (mpfr_zero_p(n.get())) return false;
        Real nr(p_);
        Real ni(p_);
        mpfr_mul(t1_.get(), a.re.get(), b.re.get(), MPFR_RNDN);
        mpfr_fma(nr.get(), a.im.get(), b.im.get(), t1_.get(), MPFR_RNDN);
        mpfr_mul(t1_.get(), a.re.get(), b.im.get(), MPFR_RNDN);
        mpfr_fms(ni.get(), a.im.get(), b.re.get(), t1_.get(), MPFR_RNDN);
        mpfr_div(r.re.get(), nr.get(), n.get(), MPFR_RNDN);
        mpfr_div(r.im.get(), ni.get(), n.get(), MPFR_RNDN);
        return true;
    }
    double abs_d(const Approx& a) {
        return std::hypot(a.re.to_double(), a.im.to_double());
    }

private:
    mpfr_prec_t p_;
    Real t1_;
    Real t2_;
    Real t3_;
};

/// p(z) and p'(z) by Horner.
void horner(ApproxOps& ops, const std::vector<Approx>& coeffs, const Approx& z, Approx& value, Approx& deriv) {
    mpfr_set_zero(value.re.get(), 1);
    mpfr_set_zero(value.im.get(), 1);
    mpfr_set_zero(deriv.re.get(), 1);
    mpfr_set_zero(deriv.im.get(), 1);
    Approx t = ops.make();
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        ops.mul(t, deriv, z);
        ops.add(deriv, t, value);
        ops.mul(t, value, z);
        ops.add(value, t, *it);
    }
}

/// Aberth-Ehrlich simultaneous iteration, in place.
void aberth(const IntPolynomial& poly, std::vector<Approx>& z, mpfr_prec_t prec) {
    const int d = poly.degree();
    ApproxOps ops(prec);
    std::vector<Approx> coeffs;
    for (const auto& c : poly.coefficients()) {
        Approx a = ops.make();
        mpfr_set_z(a.re.get(), c.get_mpz_t(), MPFR_RNDN);
        coeffs.push_back(std::move(a));
    }
    for (auto& zi : z) {
        mpfr_prec_round(zi.re.get(), prec, MPFR_RNDN);
        mpfr_prec_round(zi.im.get(), prec, MPFR_RNDN);
    }
    const double tol = std::ldexp(1.0, -static_cast<int>(prec) + 6);
    Approx val = ops.make();
    Approx der = ops.make();
    Approx newton = ops.make();
    Approx sum = ops.make();
    Approx diff = ops.make();
    Approx inv = ops.make();
    Approx one = ops.make();
    Approx t = ops.make();
    mpfr_set_ui(one.re.get(), 1, MPFR_RNDN);
    std::vector<char> done(static_cast<std::size_t>(d), 0);
    for (int iter = 0; iter < 100 + 4 * static_cast<int>(prec); ++iter) {
        bool all_done = true;
        for (int i = 0; i < d; ++i) {
            if (done[static_cast<std::size_t>(i)]) continue;
            horner(ops, coeffs, z[static_cast<std::size_t>(i)], val, der);
            if (mpfr_zero_p(val.re.get()) && mpfr_zero_p(val.im.get())) {
                done[static_cast<std::size_t>(i)] = 1;
                continue;
            }
            if (!ops.div(newton, val, der)) {
                // Stationary point: nudge.
                mpfr_add_d(z[static_cast<std::size_t>(i)].re.get(), z[static_cast<std::size_t>(i)].re.get(), 1e-3, MPFR_RNDN);
                all_done = false;
                continue;
            }
            mpfr_set_zero(sum.re.get(), 1);
            mpfr_set_zero(sum.im.get(), 1);
            for (int j = 0; j < d; ++j) {
                if (j == i) continue;
                ops.sub(diff, z[static_cast<std::size_t>(i)], z[static_cast<std::size_t>(j)]);
                if (ops.div(inv, one, diff)) ops.add(sum, sum, inv);
            }
            // correction = N / (1 - N * sum)
            ops.mul(t, newton, sum);
            ops.sub(t, one, t);
            Approx corr = ops.make();
            if (!ops.div(corr, newton, t)) corr = newton;
            ops.sub(z[static_cast<std::size_t>(i)], z[static_cast<std::size_t>(i)], corr);
            const double scale = std::max(1.0, ops.abs_d(z[static_cast<std::size_t>(i)]));
            if (ops.abs_d(corr) <= tol * scale) done[static_cast<std::size_t>(i)] = 1;
            else all_done = false;
        }
        if (all_done) break;
    }
}

std::vector<Approx> initial_guesses(const IntPolynomial& poly, mpfr_prec_t prec) {
    const int d = poly.degree();
    // Fujiwara-type bound on root moduli for a monic polynomial.
    double bound = 0.0;
    for (int j = 1; j <= d; ++j) {
        const double a = std::fabs(poly[d - j].get_d());
        if (a > 0) bound = std::max(bound, std::pow(a, 1.0 / j));
    }
    bound = std::max(1.0, 2.0 * bound);
    std::vector<Approx> z;
    for (int k = 0; k < d; ++k) {
        const double angle = 2.0 * M_PI * k / d + 0.4;
        Approx a(prec);
        mpfr_set_d(a.re.get(), 0.5 * bound * std::cos(angle), MPFR_RNDN);
        mpfr_set_d(a.im.get(), 0.5 * bound * std::sin(angle), MPFR_RNDN);
        z.push_back(std::move(a));
    }
    return z;
}

/// Forces exact conjugate symmetry; returns false if the approximations do not pair up.
bool symmetrize(std::vector<Approx>& z, mpfr_prec_t prec) {
    const double real_tol = std::ldexp(1.0, -static_cast<int>(prec) / 2);
    std::vector<int> upper;
    std::vector<int> lower;
    for (int i = 0; i < static_cast<int>(z.size()); ++i) {
        const double im = z[static_cast<std::size_t>(i)].im.to_double();
        const double scale = std::max(1.0, std::fabs(z[static_cast<std::size_t>(i)].re.to_double()));
        if (std::fabs(im) <= real_tol * scale) mpfr_set_zero(z[static_cast<std::size_t>(i)].im.get(), 1);
        else if (im > 0) upper.push_back(i);
        else lower.push_back(i);
    }
    if (upper.size() != lower.size()) return false;
    std::vector<char> used(lower.size(), 0);
    for (int u : upper) {
        int best = -1;
        double best_dist = 0.0;
        const std::complex<double> target(z[static_cast<std::size_t>(u)].re.to_double(), -z[static_cast<std::size_t>(u)].im.to_double());
        for (std::size_t k = 0; k < lower.size(); ++k) {
            if (used[k]) continue;
            const int l = lower[k];
            const std::complex<double> w(z[static_cast<std::size_t>(l)].re.to_double(), z[static_cast<std::size_t>(l)].im.to_double());
            const double dist = std::abs(w - target);
            if (best < 0 || dist < best_dist) {
                best = static_cast<int>(k);
                best_dist = dist;
            }
        }
        used[static_cast<std::size_t>(best)] = 1;
        const int l = lower[static_cast<std::size_t>(best)];
        mpfr_set(z[static_cast<std::size_t>(l)].re.get(), z[static_cast<std::size_t>(u)].re.get(), MPFR_RNDN);
        mpfr_neg(z[static_cast<std::size_t>(l)].im.get(), z[static_cast<std::size_t>(u)].im.get(), MPFR_RNDN);
    }
    return true;
}

CInterval point(const Approx& a, mpfr_prec_t) {
    return CInterval(Interval::from_bounds(a.re, a.re), Interval::from_bounds(a.im, a.im));
}

/// Inclusion disks D(z_i, d |W_i|) with Weierstrass corrections W_i = p(z_i) / prod_{j!=i}(z_i - z_j).
/// Returns false if some radius cannot be bounded (coincident approximations).
bool weierstrass_radii(const IntPolynomial& poly, const std::vector<Approx>& z, mpfr_prec_t prec, std::vector<Real>& radii) {
    const int d = poly.degree();
    radii.clear();
    std::vector<CInterval> pts;
    for (const auto& zi : z) pts.push_back(point(zi, prec));
    for (int i = 0; i < d; ++i) {
        const CInterval& zi = pts[static_cast<std::size_t>(i)];
        CInterval value(prec);
        for (int k = d; k >= 0; --k) {
            value = value * zi;
            value.re = value.re + Interval(Rational(poly[k]), prec);
        }
        CInterval denom(Interval(Rational(1), prec), Interval(prec));
        for (int j = 0; j < d; ++j) {
            if (j != i) denom = denom * (zi - pts[static_cast<std::size_t>(j)]);
        }
        if (denom.contains_zero()) return false;
        const Interval w = (value.abs() / denom.abs()) * Interval(static_cast<long>(d), prec);
        radii.push_back(w.hi());
    }
    return true;
}

bool disks_disjoint(const std::vector<Approx>& z, const std::vector<Real>& radii, mpfr_prec_t prec) {
    for (std::size_t i = 0; i < z.size(); ++i) {
        for (std::size_t j = i + 1; j < z.size(); ++j) {
            const CInterval diff = point(z[i], prec) - point(z[j], prec);
            const Interval dist = diff.abs();
            const Interval rsum = Interval::from_bounds(radii[i], radii[i]) + Interval::from_bounds(radii[j], radii[j]);
            if (!certainly_less(rsum, dist)) return false;
        }
    }
    return true;
}

bool ball_less(const RootBall& a, const RootBall& b) {
    const int c = mpfr_cmp(a.center_re.get(), b.center_re.get());
    if (c != 0) return c < 0;
    return mpfr_cmp(a.center_im.get(), b.center_im.get()) < 0;
}

std::vector<RootBall> linear_root(const NumberField& field, long log2_target) {
    const Rational r = field.rational_base();
    const mpfr_prec_t prec = std::max<mpfr_prec_t>(128, static_cast<mpfr_prec_t>(16 - log2_target));
    RootBall ball{Real(prec), Real(prec), Real(prec), true};
    mpfr_set_q(ball.center_re.get(), r.get().get_mpq_t(), MPFR_RNDN);
    const Rational err = (ball.center_re.to_rational() - r).abs();
    mpfr_set_q(ball.radius.get(), err.get().get_mpq_t(), MPFR_RNDU);
    return {ball};
}

}  // namespace

CInterval RootBall::enclosure() const {
    const Interval re = Interval::from_bounds(center_re, center_re).widened(radius);
    if (is_real) return {re, Interval(center_re.prec())};
    return {re, Interval::from_bounds(center_im, center_im).widened(radius)};
}

Interval RootBall::modulus() const { return enclosure().abs(); }

std::vector<RootBall> isolate_roots(const NumberField& field, double target_radius, const PrecisionContext& ctx) {
    if (!(target_radius > 0)) throw Error(ErrorKind::InvalidArgument, "target radius must be positive");
    return isolate_roots_log2(field, static_cast<long>(std::floor(std::log2(target_radius))), ctx);
}

std::vector<RootBall> isolate_roots_log2(const NumberField& field, long log2_target, const PrecisionContext& ctx) {
    if (field.degree() == 1) return linear_root(field, log2_target);
    const IntPolynomial& poly = field.min_poly();
    std::vector<Approx> z = initial_guesses(poly, ctx.start_bits);
    for (mpfr_prec_t prec = ctx.start_bits; prec <= ctx.max_bits; prec *= 2) {
        aberth(poly, z, prec);
        if (!symmetrize(z, prec)) continue;
        std::vector<Real> radii;
        if (!weierstrass_radii(poly, z, prec, radii)) continue;
        if (!disks_disjoint(z, radii, prec)) continue;
        bool small = true;
        for (const auto& r : radii) small = small && mpfr_cmp_ui_2exp(r.get(), 1, log2_target) <= 0;
        if (!small) continue;
        std::vector<RootBall> balls;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const bool real = mpfr_zero_p(z[i].im.get()) != 0;
            balls.push_back(RootBall{z[i].re, z[i].im, radii[i], real});
        }
        std::sort(balls.begin(), balls.end(), ball_less);
        return balls;
    }
    throw Error(ErrorKind::PrecisionExhausted, "root isolation of " + poly.str() + " did not converge below the precision cap");
}

std::vector<RootBall> refine_roots(const NumberField& field, const std::vector<RootBall>& previous,
                                   long log2_target, const PrecisionContext& ctx) {
    std::vector<RootBall> fresh = isolate_roots_log2(field, log2_target, ctx);
    if (previous.size() != fresh.size()) return fresh;
    std::vector<RootBall> ordered;
    std::vector<char> used(fresh.size(), 0);
    for (const auto& old : previous) {
        std::size_t best = fresh.size();
        double best_dist = 0.0;
        for (std::size_t j = 0; j < fresh.size(); ++j) {
            if (used[j]) continue;
            const double dist = std::hypot(fresh[j].center_re.to_double() - old.center_re.to_double(),
                                           fresh[j].center_im.to_double() - old.center_im.to_double());
            if (best == fresh.size() || dist < best_dist) {
                best = j;
                best_dist = dist;
            }
        }
        used[best] = 1;
        if (mpfr_cmp(fresh[best].radius.get(), old.radius.get()) > 0) ordered.push_back(old);
        else ordered.push_back(fresh[best]);
    }
    return ordered;
}

}  // namespace betarep
