#include "betarep/engine.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "betarep/error.hpp"

namespace betarep {
namespace {

/// beta' with sigma_p(beta') = conj(sigma_p(beta)), when such an element of Q(beta) is at hand:
/// 1/beta at unit places (self-reciprocal minimal polynomial), trace - beta for complex quadratics.
std::optional<FieldElement> conjugating_image(const PlaceSystem& ps, const Place& place) {
    if (place.kind != PlaceKind::Complex) return std::nullopt;
    const FieldPtr& k = ps.field();
    if (place.modulus_class == ModulusClass::Unit) return FieldElement::generator(k).inverse();
    if (k->degree() == 2) {
        return FieldElement::from_rational(k, Rational(BigInt(-k->min_poly()[1]))) - FieldElement::generator(k);
    }
    return std::nullopt;
}

FieldElement substitute(const FieldElement& x, const FieldElement& image) {
    FieldElement acc(x.field());
    for (int k = x.degree() - 1; k >= 0; --k) {
        acc = acc * image + FieldElement::from_rational(x.field(), x.coeffs()[static_cast<std::size_t>(k)]);
    }
    return acc;
}

/// Certified |x|_p <= bound at an archimedean place.
bool abs_le(const PlaceSystem& ps, const FieldElement& x, int place, const Rational& bound) {
    if (x.is_rational()) return x.rational_value().abs() <= bound;
    const Place& p = ps.places()[static_cast<std::size_t>(place)];
    bool tie_checked = false;
    for (mpfr_prec_t bits = ps.precision().start_bits;; bits = ps.next_bits(bits)) {
        const Interval v = ps.abs_at(x, place, bits);
        const Interval b(bound, v.prec());
        if (certainly_less_equal(v, b)) return true;
        if (certainly_less(b, v)) return false;
        if (!tie_checked) {
            tie_checked = true;
            // Exact boundary test: |sigma(x)|^2 = sigma(x * iota(x)) and sigma is injective.
            if (const auto img = conjugating_image(ps, p)) {
                const FieldElement n = x * substitute(x, *img);
                if (n == FieldElement::from_rational(x.field(), bound * bound)) return true;
            }
        }
    }
}

bool admissible_finite(const PlaceSystem& ps, const FieldElement& y) {
    for (int p : ps.s_beta()) {
        const Place& pl = ps.places()[static_cast<std::size_t>(p)];
        if (pl.archimedean()) continue;
        const Rational& r = y.rational_value();
        if (!r.is_zero() && r.valuation(static_cast<unsigned long>(pl.prime)) < 0) return false;
    }
    return true;
}

/// Per-call state for step: digit order and digit embeddings at the expanding places.
class Stepper {
public:
    Stepper(const PlaceSystem& ps, const Alphabet& a, const DomainSpec& spec, const Policy& policy)
        : ps_(ps), a_(a), spec_(spec), policy_(policy), bits_(ps.precision().start_bits) {
        if (policy.tie_break.empty()) {
            order_.resize(static_cast<std::size_t>(a.size()));
            std::iota(order_.begin(), order_.end(), 0);
            std::vector<Rational> height;
            for (const auto& d : a.digits) {
                Rational h(0);
                for (const auto& c : d.coeffs()) h = std::max(h, c.abs());
                height.push_back(h);
            }
            std::stable_sort(order_.begin(), order_.end(), [&](int x, int y) {
                return height[static_cast<std::size_t>(x)] < height[static_cast<std::size_t>(y)];
            });
        } else {
            order_ = policy.tie_break;
            std::vector<int> sorted = order_;
            std::sort(sorted.begin(), sorted.end());
            for (int i = 0; i < static_cast<int>(sorted.size()); ++i) {
                if (sorted[static_cast<std::size_t>(i)] != i || sorted.size() != static_cast<std::size_t>(a.size())) {
                    throw Error(ErrorKind::InvalidArgument, "tie_break must be a permutation of the alphabet indices");
                }
            }
        }
        if (policy.mode == EngineMode::Empirical) {
            for (int p : ps.expanding_places()) {
                std::vector<CInterval> e;
                for (const auto& d : a.digits) e.push_back(ps.embed(d, p, bits_));
                digit_emb_.push_back(std::move(e));
            }
        }
    }

    StepResult step(const FieldElement& x) const {
        const FieldElement bx = x.mul_generator();
        if (policy_.mode == EngineMode::Guaranteed) {
            for (int i : order_) {
                FieldElement y = bx - a_.digits[static_cast<std::size_t>(i)];
                try {
                    if (in_domain(ps_, y, spec_)) return {i, std::move(y)};
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::PrecisionExhausted) throw;
                }
            }
            throw Error(ErrorKind::NoAdmissibleDigit, "no digit keeps " + x.str() + " in the domain");
        }
        std::vector<CInterval> bx_emb;
        const auto& exp = ps_.expanding_places();
        for (int p : exp) bx_emb.push_back(ps_.embed(bx, p, bits_));
        int best = -1;
        Real best_score(bits_);
        for (int i : order_) {
            FieldElement y = bx - a_.digits[static_cast<std::size_t>(i)];
            if (!admissible_finite(ps_, y)) continue;
            Real score(bits_);
            mpfr_set_ui(score.get(), 1, MPFR_RNDU);
            for (std::size_t k = 0; k < exp.size(); ++k) {
                const CInterval diff = bx_emb[k] - digit_emb_[k][static_cast<std::size_t>(i)];
                const Interval v = ps_.places()[static_cast<std::size_t>(exp[k])].kind == PlaceKind::Real ? diff.re.abs()
                                                                                                       : diff.abs();
                if (mpfr_cmp(v.hi().get(), score.get()) > 0) score = v.hi();
            }
            if (best < 0 || mpfr_cmp(score.get(), best_score.get()) < 0) {
                best = i;
                best_score = score;
            }
        }
        if (best < 0) throw Error(ErrorKind::NoAdmissibleDigit, "no digit meets the finite-place congruence at " + x.str());
        return {best, bx - a_.digits[static_cast<std::size_t>(best)]};
    }

private:
    const PlaceSystem& ps_;
    const Alphabet& a_;
    const DomainSpec& spec_;
    const Policy& policy_;
    mpfr_prec_t bits_;
    std::vector<int> order_;
    std::vector<std::vector<CInterval>> digit_emb_;
};

CoverCertificate require_cover(const PlaceSystem& ps, const Alphabet& a, const Policy& policy, const Rational& m) {
    CoverCertificate cert = policy.cover ? *policy.cover
                                         : validate_cover(ps, a, a.tagged() ? a.epsilon * Rational(2) : Rational(0));
    if (!cert.covers(m)) {
        throw Error(ErrorKind::NoCoverCertificate,
                    std::string("guaranteed mode needs a certified cover (verdict ") + to_string(cert.verdict) + ")");
    }
    return cert;
}

FieldElement digit_sum(const Representation& rep, const std::vector<int>& word, const FieldElement& binv) {
    FieldElement s(rep.field);
    FieldElement pw = binv;
    for (int i : word) {
        s += rep.alphabet.digits.at(static_cast<std::size_t>(i)) * pw;
        pw *= binv;
    }
    return s;
}

}  // namespace

const char* to_string(EngineMode mode) noexcept {
    return mode == EngineMode::Guaranteed ? "guaranteed" : "empirical";
}

bool in_domain(const PlaceSystem& ps, const FieldElement& x, const DomainSpec& spec) {
    if (spec.m < Rational(1)) throw Error(ErrorKind::InvalidArgument, "domain radius m must be >= 1");
    for (int p : ps.s_beta()) {
        const Place& pl = ps.places()[static_cast<std::size_t>(p)];
        if (!pl.archimedean()) {
            const Rational& r = x.rational_value();
            if (!r.is_zero() && r.valuation(static_cast<unsigned long>(pl.prime)) < 0) return false;
            continue;
        }
        const Rational bound = pl.modulus_class == ModulusClass::Unit ? spec.m : Rational(1);
        if (!abs_le(ps, x, p, bound)) return false;
    }
    return true;
}

std::pair<long, Rational> shift_L(const PlaceSystem& ps, const FieldElement& x, const Rational& eps) {
    if (eps.sign() < 0) throw Error(ErrorKind::InvalidArgument, "epsilon must be nonnegative");
    Rational m(1);
    for (int p : ps.unit_places()) {
        const Rational mx = x.is_rational() ? x.rational_value().abs()
                                            : dyadic_ceil(ps.abs_at(x, p, ps.precision().start_bits).hi_d(), 30);
        m = std::max(m, eps + mx);
    }
    const DomainSpec spec{m};
    const FieldElement binv = FieldElement::generator(ps.field()).inverse();
    FieldElement y = x;
    long L = 0;
    while (!in_domain(ps, y, spec)) {
        y *= binv;
        if (++L > 1'000'000) throw Error(ErrorKind::IterationCapExceeded, "shift search did not terminate");
    }
    return {L, m};
}

StepResult step(const PlaceSystem& ps, const FieldElement& x, const Alphabet& alphabet, const DomainSpec& spec,
                const Policy& policy) {
    Policy local = policy;
    if (policy.mode == EngineMode::Guaranteed) local.cover = require_cover(ps, alphabet, policy, spec.m);
    return Stepper(ps, alphabet, spec, local).step(x);
}

RepresentResult represent(const PlaceSystem& ps, const FieldElement& x, const Alphabet& alphabet,
                          const Policy& policy) {
    if (policy.max_iters < 1) throw Error(ErrorKind::InvalidArgument, "max_iters must be positive");
    if (!same_field(*x.field(), *ps.field())) throw Error(ErrorKind::FieldMismatch, "element of a different field");
    const auto [L, m] = shift_L(ps, x, policy.epsilon);
    const DomainSpec spec{m};
    Policy local = policy;
    if (policy.mode == EngineMode::Guaranteed) local.cover = require_cover(ps, alphabet, policy, m);
    const Stepper stepper(ps, alphabet, spec, local);

    RepresentResult out;
    FieldElement y = x * FieldElement::generator(ps.field()).inverse().pow(static_cast<int>(L));
    std::unordered_map<std::size_t, std::vector<long>> seen;
    auto find_state = [&](const FieldElement& s) -> long {
        auto it = seen.find(s.hash());
        if (it == seen.end()) return -1;
        for (long idx : it->second) {
            if (out.trace.states[static_cast<std::size_t>(idx)] == s) return idx;
        }
        return -1;
    };
    out.trace.states.push_back(y);
    seen[y.hash()].push_back(0);
    for (long it = 0;; ++it) {
        if (it >= policy.max_iters) {
            throw Error(ErrorKind::IterationCapExceeded, "no cycle within " + std::to_string(policy.max_iters) + " steps");
        }
        StepResult r = stepper.step(out.trace.states.back());
        out.trace.digits.push_back(r.digit);
        const long hit = find_state(r.next);
        out.trace.states.push_back(std::move(r.next));
        if (hit >= 0) {
            out.trace.cycle_start = hit;
            break;
        }
        seen[out.trace.states.back().hash()].push_back(it + 1);
    }
    out.rep.field = ps.field();
    out.rep.alphabet = alphabet;
    out.rep.L = L;
    const auto cut = out.trace.digits.begin() + out.trace.cycle_start;
    out.rep.preperiod.assign(out.trace.digits.begin(), cut);
    out.rep.period.assign(cut, out.trace.digits.end());
    return out;
}

FieldElement value_of(const Representation& rep) {
    if (rep.period.empty()) throw Error(ErrorKind::InvalidArgument, "period must be nonempty");
    const FieldElement beta = FieldElement::generator(rep.field);
    const FieldElement binv = beta.inverse();
    const FieldElement one = FieldElement::from_rational(rep.field, Rational(1));
    const FieldElement head = digit_sum(rep, rep.preperiod, binv);
    const FieldElement cycle = digit_sum(rep, rep.period, binv);
    const FieldElement tail = binv.pow(static_cast<int>(rep.preperiod.size())) * cycle /
                              (one - binv.pow(static_cast<int>(rep.period.size())));
    const FieldElement scale = rep.L >= 0 ? beta.pow(static_cast<int>(rep.L)) : binv.pow(static_cast<int>(-rep.L));
    return scale * (head + tail);
}

bool verify(const Representation& rep, const FieldElement& x) {
    if (!same_field(*rep.field, *x.field())) return false;
    return value_of(rep) == x;
}

Representation canonicalize(Representation rep) {
    if (rep.period.empty()) throw Error(ErrorKind::InvalidArgument, "period must be nonempty");
    const std::size_t p = rep.period.size();
    for (std::size_t q = 1; q <= p; ++q) {
        if (p % q != 0) continue;
        bool ok = true;
        for (std::size_t i = q; i < p && ok; ++i) ok = rep.period[i] == rep.period[i % q];
        if (ok) {
            rep.period.resize(q);
            break;
        }
    }
    while (!rep.preperiod.empty() && rep.preperiod.back() == rep.period.back()) {
        std::rotate(rep.period.rbegin(), rep.period.rbegin() + 1, rep.period.rend());
        rep.preperiod.pop_back();
    }
    return rep;
}

SplitParts split_parts(const Representation& rep) {
    if (rep.period.empty()) throw Error(ErrorKind::InvalidArgument, "period must be nonempty");
    if (rep.L < 0) throw Error(ErrorKind::Unsupported, "split_parts expects L >= 0");
    const FieldElement beta = FieldElement::generator(rep.field);
    FieldElement inp(rep.field);
    Representation frp = rep;
    frp.L = 0;
    const long L = rep.L;
    const std::size_t k = rep.preperiod.size();
    const std::size_t p = rep.period.size();
    for (long i = 0; i < L; ++i) {
        const int d = static_cast<std::size_t>(i) < k ? rep.preperiod[static_cast<std::size_t>(i)]
                                                      : rep.period[(static_cast<std::size_t>(i) - k) % p];
        inp = inp * beta + rep.alphabet.digits.at(static_cast<std::size_t>(d));
    }
    if (static_cast<std::size_t>(L) <= k) {
        frp.preperiod.assign(rep.preperiod.begin() + L, rep.preperiod.end());
    } else {
        frp.preperiod.clear();
        const std::size_t shift = (static_cast<std::size_t>(L) - k) % p;
        std::rotate(frp.period.begin(), frp.period.begin() + static_cast<long>(shift), frp.period.end());
    }
    return {inp, canonicalize(std::move(frp))};
}

}  // namespace betarep
