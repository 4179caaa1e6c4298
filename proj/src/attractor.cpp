#include "betarep/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "betarep/error.hpp"

namespace betarep {
namespace {

void require_contractive(const PlaceSystem& ps) {
    if (!ps.unit_places().empty()) throw Error(ErrorKind::UnitCirclePlacePresent, "the digit maps are not contracting at a unit-circle conjugate");
    if (ps.field()->rational_mode()) throw Error(ErrorKind::Unsupported, "attractor geometry needs an algebraic-integer base");
}

std::vector<int> archimedean_s(const PlaceSystem& ps) {
    std::vector<int> out;
    for (int p : ps.s_beta()) {
        if (ps.places()[static_cast<std::size_t>(p)].archimedean()) out.push_back(p);
    }
    return out;
}

/// Windows |beta|_p^n rho + rho per archimedean S_beta place.
std::vector<Rational> windows_for(const PlaceSystem& ps, int n, const Rational& rho) {
    std::vector<Rational> out;
    const mpfr_prec_t bits = ps.precision().start_bits;
    for (int p : archimedean_s(ps)) {
        const Interval w = ps.beta_abs(p, bits).pow(n) * Interval(rho, bits) + Interval(rho, bits);
        out.push_back(dyadic_ceil(w.hi_d(), 30));
    }
    return out;
}

struct Inclusion {
    bool certified = false;
    Rational slack;
    double radius_hi = std::numeric_limits<double>::infinity();
};

/// Exact sweep for a single real coordinate: an upper bound on the smallest r for which
/// the certain coverage intervals [x.hi - r, x.lo + r] cover [-R, R].
Interval sweep_radius(const SpectrumLevel& level, const Rational& R) {
    constexpr mpfr_prec_t bits = 128;
    std::vector<DInterval> pts;
    for (std::size_t i = 0; i < level.size(); ++i) pts.push_back(level.coords(i)[0]);
    std::sort(pts.begin(), pts.end(), [](const DInterval& a, const DInterval& b) { return a.hi < b.hi; });
    const Interval RR(R, bits);
    auto pt = [](double v) { return Interval::from_doubles(v, v, bits); };
    Interval r = pt(pts.front().hi) + RR;
    double reach = pts.front().lo;
    for (std::size_t k = 1; k < pts.size(); ++k) {
        if (certainly_less(pt(reach), RR)) r = max(r, (pt(pts[k].hi) - pt(reach)) * Interval(Rational(1, 2), bits));
        reach = std::max(reach, pts[k].lo);
    }
    return max(r, RR - pt(reach));
}

Inclusion check_inclusion(const PlaceSystem& ps, const SpectrumLevel& level, int n, const Rational& rho,
                          int refine, long max_cells) {
    Inclusion out;
    if (level.size() == 0) return out;
    const DInterval rho_d{DInterval::down(rho.to_double()), DInterval::up(rho.to_double())};
    const Region region = Region::scaled_ball(ps, n, rho);
    const auto& places = level.places();
    double r_hi;
    if (places.size() == 1 && ps.places()[static_cast<std::size_t>(places[0])].kind == PlaceKind::Real) {
        const Interval r = sweep_radius(level, region.radius[0]);
        out.radius_hi = r.hi_d();
        if (certainly_less_equal(r, Interval(rho, 128))) {
            out.certified = true;
            const Interval s = Interval(rho, 128) - r;
            const Rational q = s.lo().to_rational();
            out.slack = q.sign() > 0 ? dyadic_floor(q.to_double(), 30) : Rational(0);
        }
        return out;
    } else {
        CoveringOptions co;
        co.tolerance = 0.0;
        co.accept = rho_d.lo;
        co.reject = rho_d.hi;
        co.max_cells = max_cells;
        co.refine = refine;
        r_hi = covering_radius(ps, level, region, co).hi_d();
    }
    out.radius_hi = r_hi;
    if (r_hi <= rho_d.lo) {
        out.certified = true;
        const Rational s = dyadic_floor(rho.to_double() - r_hi, 30);
        out.slack = s.sign() > 0 ? s : Rational(0);
    }
    return out;
}

/// Indices of points inside the windows for radius rho.
std::vector<std::size_t> within(const PlaceSystem& ps, const SpectrumLevel& level, const std::vector<Rational>& windows) {
    std::vector<std::size_t> keep;
    const auto& off = level.offsets();
    const auto& places = level.places();
    for (std::size_t i = 0; i < level.size(); ++i) {
        bool ok = true;
        for (std::size_t k = 0; k < places.size() && ok; ++k) {
            const DInterval* c = level.coords(i) + off[k];
            const double w = DInterval::up(windows[k].to_double());
            double lo;
            if (ps.places()[static_cast<std::size_t>(places[k])].kind == PlaceKind::Real) lo = c[0].abs().lo;
            else lo = (c[0].sqr() + c[1].sqr()).sqrt().lo;
            ok = lo <= w;
        }
        if (ok) keep.push_back(i);
    }
    return keep;
}

bool all_integer(const FieldElement& x) {
    for (const auto& c : x.coeffs()) {
        if (c.denominator() != 1) return false;
    }
    return true;
}

}  // namespace

CylinderCover cylinder_cover(const PlaceSystem& ps, const Alphabet& alphabet, int n, long max_points) {
    require_contractive(ps);
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "cylinder level must be >= 1");
    SpectrumOptions so;
    so.max_points = max_points;
    const SpectrumLevel level = enumerate_spectrum(ps, alphabet, n - 1, so);
    const FieldElement scale = FieldElement::generator(ps.field()).inverse().pow(n);
    CylinderCover out;
    out.n = n;
    out.points.reserve(level.size());
    for (std::size_t i = 0; i < level.size(); ++i) out.points.push_back(level.point(i) * scale);
    const mpfr_prec_t bits = ps.precision().start_bits;
    for (int p : archimedean_s(ps)) {
        Interval amax(0L, bits);
        for (const auto& a : alphabet.digits) amax = max(amax, ps.abs_at(a, p, bits));
        const Interval b = ps.beta_abs(p, bits);
        out.radius.push_back(amax / (b.pow(n) * (b - Interval(1L, bits))));
    }
    return out;
}

std::optional<HalfSpace> half_space_obstruction(const PlaceSystem& ps, const Alphabet& alphabet) {
    const mpfr_prec_t bits = ps.precision().start_bits;
    const FieldElement beta = FieldElement::generator(ps.field());
    for (int p : ps.expanding_places()) {
        if (ps.places()[static_cast<std::size_t>(p)].kind != PlaceKind::Real) continue;
        if (!ps.embed(beta, p, bits).re.certainly_positive()) continue;
        bool nonneg = true;
        bool nonpos = true;
        for (const auto& a : alphabet.digits) {
            if (a.is_zero()) continue;
            const Interval v = ps.embed(a, p, bits).re;
            nonneg = nonneg && v.certainly_positive();
            nonpos = nonpos && v.certainly_negative();
        }
        if (nonneg) return HalfSpace{p, 1};
        if (nonpos) return HalfSpace{p, -1};
    }
    return std::nullopt;
}

bool provably_unrepresentable(const PlaceSystem& ps, const Alphabet& alphabet, const FieldElement& x) {
    const auto h = half_space_obstruction(ps, alphabet);
    if (!h) return false;
    const Interval v = ps.embed(x, h->place, ps.precision().start_bits).re;
    return h->sign > 0 ? v.certainly_negative() : v.certainly_positive();
}

CertificateSearch origin_interior_certificate(const PlaceSystem& ps, const Alphabet& alphabet,
                                              const CertificateBudget& budget) {
    require_contractive(ps);
    CertificateSearch out;
    out.best_ratio = std::numeric_limits<double>::infinity();
    if (const auto h = half_space_obstruction(ps, alphabet)) {
        out.refuted = true;
        out.refutation = std::string("all digits ") + (h->sign > 0 ? ">= 0" : "<= 0") + " at place " +
                         std::to_string(h->place) + " where beta > 0, so K lies on one side of 0";
        return out;
    }
    for (int n = 1; n <= budget.max_level; ++n) {
        SpectrumOptions so;
        so.max_points = budget.max_points;
        so.place_windows = windows_for(ps, n, Rational(1));
        SpectrumLevel level;
        try {
            level = enumerate_spectrum(ps, alphabet, n - 1, so);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::MemoryBudgetExceeded) throw;
            break;
        }
        out.levels_tried = n;
        for (int j = 0; j <= budget.min_rho_log2; ++j) {
            const Rational rho(BigInt(1), BigInt(1) << j);
            const SpectrumLevel window = j == 0 ? level : restrict_level(level, within(ps, level, windows_for(ps, n, rho)));
            const Inclusion inc = check_inclusion(ps, window, n, rho, 1, budget.max_cells);
            out.best_ratio = std::min(out.best_ratio, inc.radius_hi / rho.to_double());
            if (inc.certified) {
                out.certificate = InteriorCertificate{n, rho, inc.slack, alphabet, window};
                return out;
            }
        }
    }
    return out;
}

bool check_certificate(const PlaceSystem& ps, const InteriorCertificate& cert) {
    if (cert.witness.size() == 0 || cert.rho.sign() <= 0 || cert.n < 1) return false;
    if (!same_field(*cert.witness.field(), *ps.field())) return false;
    PrecisionContext ctx = ps.precision();
    ctx.start_bits *= 2;
    ctx.max_bits = std::max(ctx.max_bits, 2 * ctx.start_bits);
    const PlaceSystemPtr fine = PlaceSystem::build(ps.field(), ctx);
    SpectrumOptions so;
    so.place_windows = windows_for(*fine, cert.n, cert.rho);
    SpectrumLevel level;
    try {
        level = enumerate_spectrum(*fine, cert.alphabet, cert.n - 1, so);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::PrecisionExhausted) throw;
        return false;
    }
    std::unordered_map<FieldElement, std::size_t> index;
    for (std::size_t i = 0; i < level.size(); ++i) index.emplace(level.point(i), i);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < cert.witness.size(); ++i) {
        auto it = index.find(cert.witness.point(i));
        if (it == index.end()) return false;
        keep.push_back(it->second);
    }
    const SpectrumLevel sub = restrict_level(level, keep);
    return check_inclusion(*fine, sub, cert.n, cert.rho, 2, 1'600'000).certified;
}

const char* to_string(ConditionVerdict v) noexcept {
    switch (v) {
        case ConditionVerdict::Positive: return "positive";
        case ConditionVerdict::Negative: return "negative";
        case ConditionVerdict::Undecided: return "undecided";
    }
    return "?";
}

const char* to_string(SampleStatus s) noexcept {
    switch (s) {
        case SampleStatus::Verified: return "verified";
        case SampleStatus::IterationCap: return "iteration-cap";
        case SampleStatus::NoAdmissibleDigit: return "no-admissible-digit";
        case SampleStatus::Unrepresentable: return "unrepresentable";
        case SampleStatus::VerifyFailed: return "verify-failed";
    }
    return "?";
}

std::vector<std::pair<FieldElement, bool>> sample_elements(const FieldPtr& field, const SampleSpec& spec) {
    if (spec.height < 1 || spec.count < 0) throw Error(ErrorKind::InvalidArgument, "sample height and count must be positive");
    std::vector<Rational> rationals;
    for (long q = 1; q <= spec.height; ++q) {
        for (long p = -spec.height; p <= spec.height; ++p) {
            if (std::gcd(std::labs(p), q) == 1) rationals.emplace_back(BigInt(p), BigInt(q));
        }
    }
    std::sort(rationals.begin(), rationals.end());
    std::vector<Rational> integers;
    for (long p = -spec.height; p <= spec.height; ++p) integers.emplace_back(p);
    std::mt19937_64 rng(spec.seed);
    const int d = field->degree();
    std::vector<std::pair<FieldElement, bool>> out;
    auto draw = [&](const std::vector<Rational>& pool, bool integral) {
        std::unordered_set<FieldElement> seen;
        long tries = 0;
        int got = 0;
        while (got < spec.count && tries++ < 1000L * (spec.count + 1)) {
            std::vector<Rational> c;
            for (int k = 0; k < d; ++k) c.push_back(pool[static_cast<std::size_t>(rng() % pool.size())]);
            FieldElement x(field, std::move(c));
            if (x.is_zero() || !seen.insert(x).second) continue;
            out.emplace_back(std::move(x), integral);
            ++got;
        }
    };
    draw(rationals, false);
    draw(integers, true);
    for (const auto& x : spec.extra) out.emplace_back(x, all_integer(x));
    return out;
}

CrossValidationReport cross_validate_main2(const PlaceSystem& ps, const Alphabet& alphabet, const SampleSpec& samples,
                                           const CrossValidationCaps& caps) {
    require_contractive(ps);
    CrossValidationReport out;
    out.seed = samples.seed;
    out.search = origin_interior_certificate(ps, alphabet, caps.certificate);
    const bool certified = out.search.certificate.has_value();
    out.cond[3] = certified ? ConditionVerdict::Positive : out.search.refuted ? ConditionVerdict::Negative : ConditionVerdict::Undecided;
    out.density = density_test(ps, alphabet, caps.density, &out.search);
    if (out.density->kind == DensityKind::CertifiedDense) out.cond[2] = ConditionVerdict::Positive;
    else if (out.search.refuted) out.cond[2] = ConditionVerdict::Negative;

    Policy policy;
    policy.mode = EngineMode::Empirical;
    policy.max_iters = caps.max_iters;
    bool unrep[2] = {false, false};
    bool all_verified[2] = {true, true};
    bool any[2] = {false, false};
    for (auto& [x, integral] : sample_elements(ps.field(), samples)) {
        SampleOutcome s{x, integral, SampleStatus::Verified, std::nullopt};
        if (provably_unrepresentable(ps, alphabet, x)) {
            s.status = SampleStatus::Unrepresentable;
        } else {
            try {
                RepresentResult r = represent(ps, x, alphabet, policy);
                s.status = verify(r.rep, x) ? SampleStatus::Verified : SampleStatus::VerifyFailed;
                s.rep = std::move(r.rep);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::IterationCapExceeded) s.status = SampleStatus::IterationCap;
                else if (e.kind() == ErrorKind::NoAdmissibleDigit) s.status = SampleStatus::NoAdmissibleDigit;
                else throw;
            }
        }
        // Z[beta] samples also count for Q(beta).
        for (int c = 0; c < 2; ++c) {
            if (c == 1 && !integral) continue;
            any[c] = true;
            if (s.status == SampleStatus::Unrepresentable) unrep[c] = true;
            if (s.status != SampleStatus::Verified) all_verified[c] = false;
        }
        if (s.status == SampleStatus::VerifyFailed) out.contradictions.push_back("representation of " + x.str() + " does not evaluate back to it");
        if (certified && s.status == SampleStatus::Unrepresentable) {
            out.contradictions.push_back("0 is certified interior but " + x.str() + " is provably unrepresentable");
        }
        if (certified && s.status == SampleStatus::IterationCap) {
            out.notes.push_back(x.str() + " hit the iteration cap; raise max_iters");
        }
        out.samples.push_back(std::move(s));
    }
    for (int c = 0; c < 2; ++c) {
        if (unrep[c]) out.cond[c] = ConditionVerdict::Negative;
        else if (any[c] && all_verified[c]) out.cond[c] = ConditionVerdict::Positive;
    }
    if (certified && out.search.refuted) out.contradictions.push_back("interior certificate and half-space refutation together");
    if (certified && !check_certificate(ps, *out.search.certificate)) out.contradictions.push_back("issued certificate fails re-verification");
    if (out.search.refuted && out.cond[0] == ConditionVerdict::Positive) {
        out.notes.push_back("0 is not interior while every sample is representable; the samples miss the obstructed side");
    }
    return out;
}

}  // namespace betarep
