// Acceptance run: one PASS/FAIL line per criterion, nonzero exit when any criterion fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "betarep/attractor.hpp"
#include "betarep/classify.hpp"
#include "oracles.hpp"

using namespace betarep;

namespace {
using Clock = std::chrono::steady_clock;

PlaceSystemPtr sys(const char* p) { return PlaceSystem::build(construct_field(IntPolynomial::parse(p))); }

FieldElement q(const PlaceSystem& ps, long n, long d = 1) {
    return FieldElement::from_rational(ps.field(), Rational(BigInt(n), BigInt(d)));
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
    void fail(const std::string& why) {
        if (pass) detail.str("");
        if (!pass) detail << "; ";
        pass = false;
        detail << why;
    }
};

std::vector<int> archimedean_s(const PlaceSystem& ps) {
    std::vector<int> out;
    for (int p : ps.s_beta()) {
        if (ps.places()[static_cast<std::size_t>(p)].archimedean()) out.push_back(p);
    }
    return out;
}

Verdict salem_instance() {
    Verdict v;
    const auto t0 = Clock::now();
    const PlaceSystemPtr ps = sys("x^4-x^3-x^2-x+1");
    const Alphabet a = Alphabet::integer_range(ps->field(), -2, 2);
    Policy pol;
    pol.max_iters = 1'000'000;
    int verified = 0;
    long longest = 0;
    for (long n = 2; n <= 20; ++n) {
        const FieldElement x = q(*ps, 1, n);
        try {
            const RepresentResult r = represent(*ps, x, a, pol);
            if (verify(r.rep, x)) {
                ++verified;
                longest = std::max(longest, static_cast<long>(r.rep.preperiod.size() + r.rep.period.size()));
            } else {
                v.fail("1/" + std::to_string(n) + " does not verify");
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::IterationCapExceeded) {
                v.fail("soft failure: 1/" + std::to_string(n) + " hit the iteration cap");
            } else {
                v.fail("1/" + std::to_string(n) + ": " + e.what());
            }
        }
    }
    const double t = seconds_since(t0);
    if (t >= 60) v.fail("took " + std::to_string(t) + " s");
    if (v.pass) v.detail << verified << "/19 verified, longest word " << longest << ", " << t << " s";
    return v;
}

Verdict golden_fractions() {
    Verdict v;
    const auto t0 = Clock::now();
    const PlaceSystemPtr ps = sys("x^2-x-1");
    const Alphabet a = Alphabet::integer_range(ps->field(), 0, 1);
    std::set<Rational> done;
    for (long d = 2; d <= 30; ++d) {
        for (long n = 1; n < d; ++n) {
            const Rational r{BigInt(n), BigInt(d)};
            if (!done.insert(r).second) continue;
            const FieldElement x = FieldElement::from_rational(ps->field(), r);
            try {
                if (!verify(represent(*ps, x, a).rep, x)) v.fail(r.str() + " does not verify");
            } catch (const Error& e) {
                v.fail(r.str() + ": " + e.what());
            }
        }
    }
    const double t = seconds_since(t0);
    if (t >= 30) v.fail("took " + std::to_string(t) + " s");
    if (v.pass) v.detail << done.size() << " fractions verified, " << t << " s";
    return v;
}

Verdict classifier_table() {
    Verdict v;
    struct Row {
        const char* poly;
        BaseLabel label;
        bool weak_greedy;
    };
    for (const Row& r : {Row{"x^2-x-1", BaseLabel::Pisot, true}, Row{"x^3-x-1", BaseLabel::Pisot, true},
                         Row{"x^4-x^3-x^2-x+1", BaseLabel::Salem, true},
                         Row{"x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1", BaseLabel::Salem, true},
                         Row{"x^2+2*x+2", BaseLabel::ComplexPisot, true}, Row{"x^2-5", BaseLabel::ExpandingOther, false}}) {
        const PlaceSystemPtr ps = sys(r.poly);
        const BaseLabel got = classify_base(*ps).label;
        if (got != r.label) v.fail(std::string(r.poly) + " classified " + to_string(got));
        if (weak_greedy_decision(*ps).admits != r.weak_greedy) v.fail(std::string(r.poly) + " weak-greedy verdict");
    }
    if (v.pass) v.detail << "6/6 rows";
    return v;
}

Verdict certificates() {
    Verdict v;
    const PlaceSystemPtr two = sys("x-2");
    const CertificateSearch s1 = origin_interior_certificate(*two, Alphabet::integer_range(two->field(), -1, 1));
    if (!s1.certificate) {
        v.fail("no certificate for (2, {-1,0,1})");
    } else {
        if (s1.certificate->n != 1 || s1.certificate->rho != Rational(1)) v.fail("(2, {-1,0,1}) certificate is not (1, 1)");
        if (!check_certificate(*two, *s1.certificate)) v.fail("(2, {-1,0,1}) certificate fails re-verification");
    }
    const PlaceSystemPtr gi = sys("x^2+2*x+2");
    CertificateBudget b;
    b.max_level = 12;
    const CertificateSearch s2 = origin_interior_certificate(*gi, Alphabet::integer_range(gi->field(), -2, 2), b);
    if (!s2.certificate) {
        v.fail("no certificate for (-1+i, {-2..2})");
    } else if (!check_certificate(*gi, *s2.certificate)) {
        v.fail("(-1+i, {-2..2}) certificate fails re-verification");
    }
    const CertificateSearch s3 = origin_interior_certificate(*two, Alphabet::integer_range(two->field(), 0, 1));
    if (s3.certificate) v.fail("certificate issued for (2, {0,1})");
    if (!s3.refuted) v.fail("no refutation for (2, {0,1})");
    if (v.pass) {
        v.detail << "(2,{-1,0,1}) n=1 rho=1; (-1+i,{-2..2}) n=" << s2.certificate->n << " rho=" << s2.certificate->rho.str()
                 << "; (2,{0,1}) refuted";
    }
    return v;
}

Verdict cross_validation() {
    Verdict v;
    struct Case {
        const char* poly;
        long lo, hi;
    };
    for (const Case& c : {Case{"x-2", -1, 1}, Case{"x^2+2*x+2", -2, 2}, Case{"x-2", 0, 1}}) {
        const PlaceSystemPtr ps = sys(c.poly);
        SampleSpec spec;
        spec.count = 20;
        spec.seed = 2024;
        const CrossValidationReport r = cross_validate_main2(*ps, Alphabet::integer_range(ps->field(), c.lo, c.hi), spec);
        for (const auto& msg : r.contradictions) v.fail(std::string(c.poly) + ": " + msg);
        if (v.pass) {
            v.detail << c.poly << " {" << c.lo << ".." << c.hi << "}: ";
            for (const auto cv : r.cond) v.detail << to_string(cv) << " ";
            v.detail << "| ";
        }
    }
    return v;
}

Verdict discreteness() {
    Verdict v;
    struct Case {
        const char* poly;
        long lo, hi;
    };
    for (const Case& c : {Case{"x-2", 0, 1}, Case{"x^2-x-1", 0, 1}, Case{"x^4-x^3-x^2-x+1", -2, 2}}) {
        const PlaceSystemPtr ps = sys(c.poly);
        const Alphabet a = Alphabet::integer_range(ps->field(), c.lo, c.hi);
        const Rational sep = separation_bound(*ps, a);
        if (sep.sign() <= 0) v.fail(std::string(c.poly) + ": bound not positive");
        double worst = 1e300;
        for (int n = 0; n <= 8; ++n) {
            const SpectrumLevel level = enumerate_spectrum(*ps, a, n);
            if (level.size() < 2) continue;
            const Interval g = min_gap(*ps, level);
            worst = std::min(worst, g.lo_d());
            if (!(g.lo_d() >= sep.to_double())) v.fail(std::string(c.poly) + " level " + std::to_string(n) + " gap below bound");
        }
        if (v.pass) v.detail << c.poly << ": gap >= " << worst << " >= " << sep.to_double() << "; ";
    }
    return v;
}

Verdict field_arithmetic() {
    Verdict v;
    std::mt19937_64 rng(7);
    const std::vector<const char*> polys{"x^2-x-1", "x^4-x^3-x^2-x+1", "x^2+2*x+2", "x^3-x-1"};
    int triples = 0, inverses = 0, traces = 0;
    for (int t = 0; t < 1000; ++t) {
        const FieldPtr k = construct_field(IntPolynomial::parse(polys[static_cast<std::size_t>(t) % polys.size()]));
        const FieldElement a = oracle::random_element(k, rng), b = oracle::random_element(k, rng), c = oracle::random_element(k, rng);
        const bool ok = (a + b) + c == a + (b + c) && (a * b) * c == a * (b * c) && a * b == b * a && a + b == b + a &&
                        a * (b + c) == a * b + a * c && a - a == FieldElement(k);
        if (ok) ++triples;
        else v.fail("ring axiom violated");
    }
    for (int t = 0; t < 500; ++t) {
        const FieldPtr k = construct_field(IntPolynomial::parse(polys[static_cast<std::size_t>(t) % polys.size()]));
        FieldElement a = oracle::random_element(k, rng);
        if (a.is_zero()) a = FieldElement::from_rational(k, 1);
        if (a * a.inverse() == FieldElement::from_rational(k, 1) && a.inverse().inverse() == a) ++inverses;
        else v.fail("inverse round trip");
    }
    for (int t = 0; t < 200; ++t) {
        const PlaceSystemPtr ps = sys(polys[static_cast<std::size_t>(t) % polys.size()]);
        const FieldElement x = oracle::random_element(ps->field(), rng);
        const auto m = oracle::mult_matrix(x);
        CInterval sum{Interval(0L, 128), Interval(0L, 128)};
        CInterval prod{Interval(1L, 128), Interval(0L, 128)};
        for (const auto& e : ps->embed_all_roots(x, 128)) {
            sum = sum + e;
            prod = prod * e;
        }
        if (sum.re.contains(oracle::trace(m)) && sum.im.contains_zero() && prod.re.contains(oracle::det(m)) && prod.im.contains_zero()) {
            ++traces;
        } else {
            v.fail("trace/norm enclosure misses the exact value");
        }
    }
    if (v.pass) v.detail << triples << " triples, " << inverses << " inverses, " << traces << " trace/norm checks";
    return v;
}

Verdict weak_approximation() {
    Verdict v;
    const Rational eps(BigInt(1), BigInt(32));
    std::mt19937_64 rng(32);
    for (const char* p : {"x^2-x-1", "x^4-x^3-x^2-x+1"}) {
        const PlaceSystemPtr ps = sys(p);
        PrecisionContext fine_ctx;
        fine_ctx.start_bits = 2 * ps->precision().start_bits;
        const PlaceSystemPtr fine = PlaceSystem::build(ps->field(), fine_ctx);
        const auto s = archimedean_s(*ps);
        double worst = 0;
        for (int t = 0; t < 50; ++t) {
            std::vector<ComplexRational> targets;
            for (int place : s) {
                const bool cplx = ps->places()[static_cast<std::size_t>(place)].kind == PlaceKind::Complex;
                const Rational re{BigInt(static_cast<long>(rng() % 2001) - 1000), BigInt(250)};
                const Rational im = cplx ? Rational{BigInt(static_cast<long>(rng() % 2001) - 1000), BigInt(250)} : Rational(0);
                targets.push_back({re, im});
            }
            const FieldElement z = weak_approximate(*ps, targets, eps);
            for (std::size_t i = 0; i < s.size(); ++i) {
                const mpfr_prec_t bits = fine->precision().start_bits;
                const CInterval e = fine->embed(z, s[i], bits);
                const CInterval diff{e.re - Interval(targets[i].re, bits), e.im - Interval(targets[i].im, bits)};
                const double err = diff.abs().hi_d();
                worst = std::max(worst, err);
                if (!(err < eps.to_double())) v.fail(std::string(p) + ": error " + std::to_string(err));
            }
        }
        if (v.pass) v.detail << p << ": 50 targets, worst error " << worst << "; ";
    }
    return v;
}
}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"Salem quartic, 1/n for n = 2..20 with digits -2..2", salem_instance},
        {"golden ratio, digits {0,1}, all p/q in (0,1) with q <= 30", golden_fractions},
        {"base classification table", classifier_table},
        {"origin interior certificates", certificates},
        {"cross-validation without contradictions", cross_validation},
        {"measured gaps dominate the separation bound", discreteness},
        {"exact field arithmetic", field_arithmetic},
        {"weak approximation at doubled precision", weak_approximation},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.fail(std::string("exception: ") + e.what());
        }
        failures += v.pass ? 0 : 1;
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " -- "
                  << v.detail.str() << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
