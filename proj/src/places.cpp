#include "betarep/places.hpp"

#include <algorithm>

#include "betarep/error.hpp"

namespace betarep {
namespace {

bool overlaps(const Interval& a, const Interval& b) {
    return !certainly_less(a, b) && !certainly_less(b, a);
}

bool overlaps(const CInterval& a, const CInterval& b) { return overlaps(a.re, b.re) && overlaps(a.im, b.im); }

std::vector<long> prime_factors(const BigInt& n) {
    std::vector<long> out;
    BigInt m = abs(n);
    for (long p = 2; p <= 1'000'000 && p * p <= m; ++p) {
        if (m % p == 0) {
            out.push_back(p);
            while (m % p == 0) m /= p;
        }
    }
    if (m > 1) {
        if (!m.fits_slong_p() || mpz_probab_prime_p(m.get_mpz_t(), 50) == 0) {
            throw Error(ErrorKind::Unsupported, "denominator of the base has a prime factor too large to handle");
        }
        out.push_back(m.get_si());
    }
    return out;
}

Interval real_abs_or_modulus(const RootBall& ball) {
    if (ball.is_real) return ball.enclosure().re.abs();
    return ball.modulus();
}

bool is_conjugate_pair(const RootBall& a, const RootBall& b) {
    return !a.is_real && !b.is_real && mpfr_equal_p(a.center_re.get(), b.center_re.get()) &&
           mpfr_cmp(a.center_im.get(), b.center_im.get()) != 0 &&
           mpfr_cmpabs(a.center_im.get(), b.center_im.get()) == 0;
}

}  // namespace

const char* to_string(PlaceKind kind) noexcept {
    switch (kind) {
        case PlaceKind::Real: return "real";
        case PlaceKind::Complex: return "complex";
        case PlaceKind::Finite: return "finite";
    }
    return "?";
}

const char* to_string(ModulusClass cls) noexcept {
    switch (cls) {
        case ModulusClass::Expanding: return "expanding";
        case ModulusClass::Unit: return "unit";
        case ModulusClass::Contracting: return "contracting";
    }
    return "?";
}

const char* to_string(BaseLabel label) noexcept {
    switch (label) {
        case BaseLabel::Pisot: return "Pisot";
        case BaseLabel::Salem: return "Salem";
        case BaseLabel::ComplexPisot: return "complexPisot";
        case BaseLabel::ComplexSalem: return "complexSalem";
        case BaseLabel::RationalInteger: return "rationalInteger";
        case BaseLabel::RationalNonInteger: return "rationalNonInteger";
        case BaseLabel::ExpandingOther: return "expandingOther";
        case BaseLabel::Other: return "other";
    }
    return "?";
}

bool is_self_reciprocal(const IntPolynomial& p) {
    const IntPolynomial r = p.reversed();
    return r == p || r == -p;
}

mpfr_prec_t PlaceSystem::next_bits(mpfr_prec_t bits) const {
    mpfr_prec_t b = ctx_.start_bits;
    while (b <= bits) b *= 2;
    return b;
}

const RootTable& PlaceSystem::table(mpfr_prec_t bits) const {
    mpfr_prec_t b = ctx_.start_bits;
    while (b < bits) b *= 2;
    if (b > ctx_.max_bits) {
        throw Error(ErrorKind::PrecisionExhausted, "requested " + std::to_string(bits) + " bits exceeds the cap of " +
                                                       std::to_string(ctx_.max_bits));
    }
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = tables_.find(b);
    if (it != tables_.end()) return *it->second;

    auto t = std::make_unique<RootTable>();
    t->bits = b;
    const long log2_target = -static_cast<long>(b - b / 4);
    const PrecisionContext inner{b, ctx_.max_bits};
    auto prev = tables_.lower_bound(b);
    if (prev != tables_.begin()) {
        --prev;
        t->balls = refine_roots(*field_, prev->second->balls, log2_target, inner);
    } else {
        t->balls = isolate_roots_log2(*field_, log2_target, inner);
    }
    const int d = field_->degree();
    for (const auto& ball : t->balls) {
        const CInterval r = ball.enclosure();
        std::vector<CInterval> pw;
        pw.emplace_back(Interval(1L, r.prec()), Interval(r.prec()));
        for (int k = 1; k < d; ++k) pw.push_back(pw.back() * r);
        t->powers.push_back(std::move(pw));
    }
    const RootTable& ref = *t;
    tables_.emplace(b, std::move(t));
    return ref;
}

PlaceSystemPtr PlaceSystem::build(FieldPtr field, const PrecisionContext& ctx) {
    if (ctx.start_bits < 16 || ctx.max_bits < ctx.start_bits) {
        throw Error(ErrorKind::InvalidArgument, "invalid precision range");
    }
    std::shared_ptr<PlaceSystem> ps(new PlaceSystem());
    ps->field_ = std::move(field);
    ps->ctx_ = ctx;
    const NumberField& k = *ps->field_;
    const int d = k.degree();

    // Modulus class of every root.
    ps->root_classes_.assign(static_cast<std::size_t>(d), ModulusClass::Contracting);
    if (d == 1) {
        const Rational a = k.rational_base().abs();
        ps->root_classes_[0] = a > Rational(1) ? ModulusClass::Expanding
                                               : (a == Rational(1) ? ModulusClass::Unit : ModulusClass::Contracting);
    } else {
        const bool selfrec = is_self_reciprocal(k.min_poly());
        std::vector<char> decided(static_cast<std::size_t>(d), 0);
        for (mpfr_prec_t bits = ctx.start_bits;; bits = ps->next_bits(bits)) {
            const RootTable& t = ps->table(bits);
            bool all = true;
            for (int i = 0; i < d; ++i) {
                if (decided[static_cast<std::size_t>(i)]) continue;
                const RootBall& ball = t.balls[static_cast<std::size_t>(i)];
                const Interval mod = real_abs_or_modulus(ball);
                const Interval one(1L, mod.prec());
                if (certainly_less(one, mod)) {
                    ps->root_classes_[static_cast<std::size_t>(i)] = ModulusClass::Expanding;
                    decided[static_cast<std::size_t>(i)] = 1;
                    continue;
                }
                if (certainly_less(mod, one)) {
                    ps->root_classes_[static_cast<std::size_t>(i)] = ModulusClass::Contracting;
                    decided[static_cast<std::size_t>(i)] = 1;
                    continue;
                }
                if (selfrec && !ball.enclosure().contains_zero()) {
                    // 1/conj(r) is again a root; if its image meets only this ball it is r itself.
                    const CInterval enc = ball.enclosure();
                    const CInterval image = CInterval(Interval(1L, enc.prec()), Interval(enc.prec())) / enc.conj();
                    int hits = 0;
                    bool self = false;
                    for (int j = 0; j < d; ++j) {
                        if (overlaps(image, t.balls[static_cast<std::size_t>(j)].enclosure())) {
                            ++hits;
                            self = self || j == i;
                        }
                    }
                    if (hits == 1 && self) {
                        ps->root_classes_[static_cast<std::size_t>(i)] = ModulusClass::Unit;
                        decided[static_cast<std::size_t>(i)] = 1;
                        continue;
                    }
                }
                all = false;
            }
            if (all) break;
        }
    }

    // Distinguished root.
    const auto& base_roots = ps->roots();
    if (k.root_selector().index) {
        const int idx = *k.root_selector().index;
        if (idx < 0 || idx >= d) throw Error(ErrorKind::InvalidArgument, "root index out of range");
        ps->distinguished_ = idx;
    } else {
        auto better = [&](int i, int j) {
            bool tie = is_conjugate_pair(base_roots[static_cast<std::size_t>(i)], base_roots[static_cast<std::size_t>(j)]);
            for (mpfr_prec_t bits = ctx.start_bits; !tie && bits <= std::min<mpfr_prec_t>(256, ctx.max_bits);
                 bits = ps->next_bits(bits)) {
                const RootTable& t = ps->table(bits);
                const Interval mi = real_abs_or_modulus(t.balls[static_cast<std::size_t>(i)]);
                const Interval mj = real_abs_or_modulus(t.balls[static_cast<std::size_t>(j)]);
                if (certainly_less(mj, mi)) return true;
                if (certainly_less(mi, mj)) return false;
            }
            const RootBall& a = base_roots[static_cast<std::size_t>(i)];
            const RootBall& b = base_roots[static_cast<std::size_t>(j)];
            const int c = mpfr_cmp(a.center_re.get(), b.center_re.get());
            if (c != 0) return c > 0;
            return mpfr_cmp(a.center_im.get(), b.center_im.get()) > 0;
        };
        int best = 0;
        for (int i = 1; i < d; ++i) {
            if (better(i, best)) best = i;
        }
        ps->distinguished_ = best;
    }
    if (ps->root_classes_[static_cast<std::size_t>(ps->distinguished_)] != ModulusClass::Expanding) {
        throw Error(ErrorKind::NotExpandingPlace, "the selected root does not satisfy |beta| > 1");
    }

    // Archimedean places; the distinguished one first.
    auto partner_of = [&](int i) {
        for (int j = 0; j < d; ++j) {
            if (j != i && is_conjugate_pair(base_roots[static_cast<std::size_t>(i)], base_roots[static_cast<std::size_t>(j)])) {
                return j;
            }
        }
        throw Error(ErrorKind::PrecisionExhausted, "conjugate pairing of root balls failed");
    };
    std::vector<char> assigned(static_cast<std::size_t>(d), 0);
    auto add_place = [&](int i) {
        Place p;
        p.root = i;
        p.modulus_class = ps->root_classes_[static_cast<std::size_t>(i)];
        assigned[static_cast<std::size_t>(i)] = 1;
        if (base_roots[static_cast<std::size_t>(i)].is_real) {
            p.kind = PlaceKind::Real;
        } else {
            p.kind = PlaceKind::Complex;
            p.conjugate = partner_of(i);
            assigned[static_cast<std::size_t>(p.conjugate)] = 1;
        }
        ps->places_.push_back(p);
    };
    add_place(ps->distinguished_);
    for (int i = 0; i < d; ++i) {
        if (assigned[static_cast<std::size_t>(i)]) continue;
        const RootBall& b = base_roots[static_cast<std::size_t>(i)];
        if (!b.is_real && mpfr_sgn(b.center_im.get()) < 0) continue;
        add_place(i);
    }
    if (k.rational_mode()) {
        for (long p : prime_factors(k.rational_base().denominator())) {
            Place place;
            place.kind = PlaceKind::Finite;
            place.prime = p;
            place.modulus_class = ModulusClass::Expanding;
            ps->places_.push_back(place);
        }
    }
    for (int i = 0; i < static_cast<int>(ps->places_.size()); ++i) {
        const Place& p = ps->places_[static_cast<std::size_t>(i)];
        if (p.modulus_class == ModulusClass::Expanding) {
            ps->s_beta_.push_back(i);
            if (p.archimedean()) ps->expanding_.push_back(i);
        } else if (p.modulus_class == ModulusClass::Unit) {
            ps->s_beta_.push_back(i);
            ps->unit_.push_back(i);
        } else {
            ps->contracting_.push_back(i);
        }
    }
    ps->class_ = classify_base(*ps);
    return ps;
}

void PlaceSystem::check_element(const FieldElement& x) const {
    if (!same_field(*x.field(), *field_)) throw Error(ErrorKind::FieldMismatch, "element of a different field");
}

CInterval PlaceSystem::embed(const FieldElement& x, int place, mpfr_prec_t bits) const {
    check_element(x);
    const Place& p = places_.at(static_cast<std::size_t>(place));
    if (!p.archimedean()) {
        if (!x.is_rational()) throw Error(ErrorKind::Unsupported, "finite places need rational elements");
        return {Interval(x.rational_value().padic_abs(static_cast<unsigned long>(p.prime)), bits), Interval(bits)};
    }
    const RootTable& t = table(bits);
    if (x.is_rational()) return {Interval(x.rational_value(), t.bits + 32), Interval(t.bits + 32)};
    const auto& pw = t.powers[static_cast<std::size_t>(p.root)];
    CInterval acc(t.bits + 32);
    for (int k = 0; k < x.degree(); ++k) {
        const Rational& c = x.coeffs()[static_cast<std::size_t>(k)];
        if (c.is_zero()) continue;
        acc = acc + pw[static_cast<std::size_t>(k)] * Interval(c, t.bits + 32);
    }
    return acc;
}

std::vector<CInterval> PlaceSystem::embed_all_roots(const FieldElement& x, mpfr_prec_t bits) const {
    check_element(x);
    const RootTable& t = table(bits);
    std::vector<CInterval> out;
    for (const auto& pw : t.powers) {
        CInterval acc(t.bits + 32);
        for (int k = 0; k < x.degree(); ++k) {
            const Rational& c = x.coeffs()[static_cast<std::size_t>(k)];
            if (!c.is_zero()) acc = acc + pw[static_cast<std::size_t>(k)] * Interval(c, t.bits + 32);
        }
        out.push_back(std::move(acc));
    }
    return out;
}

Interval PlaceSystem::abs_at(const FieldElement& x, int place, mpfr_prec_t bits) const {
    const Place& p = places_.at(static_cast<std::size_t>(place));
    if (!p.archimedean()) {
        check_element(x);
        if (!x.is_rational()) throw Error(ErrorKind::Unsupported, "finite places need rational elements");
        return Interval(x.rational_value().padic_abs(static_cast<unsigned long>(p.prime)), bits);
    }
    if (x.is_rational()) {
        check_element(x);
        return Interval(x.rational_value().abs(), bits + 32);
    }
    const CInterval v = embed(x, place, bits);
    return p.kind == PlaceKind::Real ? v.re.abs() : v.abs();
}

Interval PlaceSystem::beta_abs(int place, mpfr_prec_t bits) const {
    const Place& p = places_.at(static_cast<std::size_t>(place));
    if (!p.archimedean()) {
        return Interval(field_->rational_base().padic_abs(static_cast<unsigned long>(p.prime)), bits);
    }
    if (field_->degree() == 1) return Interval(field_->rational_base().abs(), bits + 32);
    return real_abs_or_modulus(table(bits).balls[static_cast<std::size_t>(p.root)]);
}

CertifiedValue eval_embedding(const PlaceSystem& ps, const FieldElement& x, const std::vector<int>& places,
                              mpfr_prec_t bits) {
    CertifiedValue out;
    for (int p : places) {
        PlaceValue v{p, ps.embed(x, p, bits), std::nullopt};
        const Place& place = ps.places().at(static_cast<std::size_t>(p));
        if (!place.archimedean()) v.padic_abs = x.rational_value().padic_abs(static_cast<unsigned long>(place.prime));
        out.push_back(std::move(v));
    }
    return out;
}

Interval beta_norm(const PlaceSystem& ps, const FieldElement& x, mpfr_prec_t bits) {
    Interval best(0L, bits);
    for (int p : ps.s_beta()) best = max(best, ps.abs_at(x, p, bits));
    return best;
}

Interval rep_constant(const PlaceSystem& ps, const std::vector<FieldElement>& digits, int place, mpfr_prec_t bits) {
    const Place& p = ps.places().at(static_cast<std::size_t>(place));
    if (p.modulus_class != ModulusClass::Expanding) {
        throw Error(ErrorKind::NotExpandingPlace, "rep_constant needs |beta|_p > 1");
    }
    Interval top(0L, bits);
    for (const auto& a : digits) top = max(top, ps.abs_at(a, place, bits));
    return top / (ps.beta_abs(place, bits) - Interval(1L, bits));
}

BaseClass classify_base(const PlaceSystem& ps) {
    BaseClass bc;
    for (ModulusClass c : ps.root_classes()) {
        if (c == ModulusClass::Expanding) ++bc.expanding;
        else if (c == ModulusClass::Unit) ++bc.unit;
        else ++bc.contracting;
    }
    const NumberField& k = *ps.field();
    if (k.degree() == 1) {
        bc.label = k.rational_base().is_integer() ? BaseLabel::RationalInteger : BaseLabel::RationalNonInteger;
        return bc;
    }
    const RootBall& beta = ps.roots()[static_cast<std::size_t>(ps.distinguished_root())];
    const bool positive_real = beta.is_real && mpfr_sgn(beta.center_re.get()) > 0;
    const int allowed = beta.is_real ? 1 : 2;
    if (bc.expanding != allowed) {
        bc.label = BaseLabel::ExpandingOther;
    } else if (positive_real) {
        bc.label = bc.unit == 0 ? BaseLabel::Pisot : BaseLabel::Salem;
    } else {
        bc.label = bc.unit == 0 ? BaseLabel::ComplexPisot : BaseLabel::ComplexSalem;
    }
    return bc;
}

}  // namespace betarep
