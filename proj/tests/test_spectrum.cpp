#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "betarep/attractor.hpp"
#include "betarep/spectrum.hpp"
#include "oracles.hpp"

using namespace betarep;

namespace {
PlaceSystemPtr sys(const char* p) { return PlaceSystem::build(construct_field(IntPolynomial::parse(p))); }

template <class F>
ErrorKind error_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::InvalidArgument;
}

/// All sums a_0 + a_1 b + ... + a_n b^n, by exhaustive expansion.
std::set<std::vector<Rational>> brute_level(const PlaceSystem& ps, const Alphabet& a, int n) {
    std::vector<FieldElement> cur{FieldElement(ps.field())};
    FieldElement power = FieldElement::from_rational(ps.field(), 1);
    for (int i = 0; i <= n; ++i) {
        std::vector<FieldElement> next;
        for (const auto& x : cur) {
            for (const auto& d : a.digits) next.push_back(x + d * power);
        }
        cur = std::move(next);
        power = power.mul_generator();
    }
    std::set<std::vector<Rational>> out;
    for (const auto& x : cur) out.insert(x.coeffs());
    return out;
}

std::vector<oracle::cld> level_roots(const PlaceSystem& ps, const SpectrumLevel& level) {
    std::vector<oracle::cld> out;
    for (int p : level.places()) out.push_back(oracle::place_root(ps, p));
    return out;
}

long double brute_gap(const PlaceSystem& ps, const SpectrumLevel& level) {
    const auto at = level_roots(ps, level);
    const auto pts = level.points();
    long double best = 1e300L;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, oracle::norm(pts[i] - pts[j], at));
    }
    return best;
}

Region interval_region(const Rational& lo, const Rational& hi) {
    Region r;
    r.center.push_back({(lo + hi) / Rational(2), Rational(0)});
    r.radius.push_back((hi - lo) / Rational(2));
    return r;
}

std::vector<Rational> sorted_values(const SpectrumLevel& level) {
    std::vector<Rational> v;
    for (const auto& x : level.points()) v.push_back(x.rational_value());
    std::sort(v.begin(), v.end());
    return v;
}

/// Exact covering radius of [lo, hi] by a finite set of reals.
Rational exact_cover_1d(std::vector<Rational> pts, const Rational& lo, const Rational& hi) {
    std::sort(pts.begin(), pts.end());
    Rational worst(0);
    auto nearest = [&](const Rational& y) {
        Rational d = (y - pts.front()).abs();
        for (const auto& p : pts) d = std::min(d, (y - p).abs());
        return d;
    };
    worst = std::max(nearest(lo), nearest(hi));
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Rational a = std::max(pts[i], lo), b = std::min(pts[i + 1], hi);
        if (a < b) worst = std::max(worst, nearest(std::clamp((pts[i] + pts[i + 1]) / Rational(2), a, b)));
    }
    return worst;
}
}  // namespace

TEST_CASE("enumeration examples") {
    const PlaceSystemPtr two = sys("x-2");
    const SpectrumLevel l2 = enumerate_spectrum(*two, Alphabet::integer_range(two->field(), 0, 1), 2);
    std::vector<Rational> want;
    for (long i = 0; i < 8; ++i) want.emplace_back(i);
    CHECK(sorted_values(l2) == want);

    const SpectrumLevel l1 = enumerate_spectrum(*two, Alphabet::integer_range(two->field(), -1, 1), 1);
    want.clear();
    for (long i = -3; i <= 3; ++i) want.emplace_back(i);
    CHECK(sorted_values(l1) == want);

    const PlaceSystemPtr phi = sys("x^2-x-1");
    const SpectrumLevel p1 = enumerate_spectrum(*phi, Alphabet::integer_range(phi->field(), 0, 1), 1);
    const FieldElement one = FieldElement::from_rational(phi->field(), 1), b = FieldElement::generator(phi->field());
    std::set<std::vector<Rational>> got, expect{FieldElement(phi->field()).coeffs(), one.coeffs(), b.coeffs(), (b + one).coeffs()};
    for (const auto& x : p1.points()) got.insert(x.coeffs());
    CHECK(p1.size() == 4);
    CHECK(got == expect);
}

TEST_CASE("enumeration agrees with exhaustive expansion") {
    struct Case {
        const char* poly;
        long lo, hi;
        int max_n;
    };
    for (const Case& c : {Case{"x-2", 0, 1, 6}, Case{"x-2", -1, 1, 6}, Case{"x^2-x-1", 0, 1, 6}, Case{"x^2+2*x+2", -2, 2, 4},
                          Case{"x^4-x^3-x^2-x+1", -2, 2, 5}, Case{"x^3-x-1", -1, 1, 6}}) {
        const PlaceSystemPtr ps = sys(c.poly);
        const Alphabet a = Alphabet::integer_range(ps->field(), c.lo, c.hi);
        for (int n = 0; n <= c.max_n; ++n) {
            const SpectrumLevel level = enumerate_spectrum(*ps, a, n);
            const auto brute = brute_level(*ps, a, n);
            CHECK(level.size() == brute.size());
            std::set<std::vector<Rational>> got;
            for (const auto& x : level.points()) got.insert(x.coeffs());
            CHECK(got == brute);
        }
    }
}

TEST_CASE("levels are nested when zero is a digit") {
    for (const char* p : {"x^2-x-1", "x^4-x^3-x^2-x+1", "x^2+2*x+2"}) {
        const PlaceSystemPtr ps = sys(p);
        const Alphabet a = Alphabet::integer_range(ps->field(), -1, 1);
        std::set<std::vector<Rational>> prev;
        for (int n = 0; n <= 5; ++n) {
            std::set<std::vector<Rational>> cur;
            for (const auto& x : enumerate_spectrum(*ps, a, n).points()) cur.insert(x.coeffs());
            CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
            prev = std::move(cur);
        }
    }
}

TEST_CASE("memory budget") {
    const PlaceSystemPtr phi = sys("x^2-x-1");
    SpectrumOptions opt;
    opt.max_points = 100;
    CHECK(error_of([&] { enumerate_spectrum(*phi, Alphabet::integer_range(phi->field(), 0, 1), 10, opt); }) ==
          ErrorKind::MemoryBudgetExceeded);
}

TEST_CASE("separation bound examples") {
    const PlaceSystemPtr two = sys("x-2");
    CHECK(separation_bound(*two, Alphabet::integer_range(two->field(), 0, 1)) == Rational(1));

    const PlaceSystemPtr phi = sys("x^2-x-1");
    const Rational s = separation_bound(*phi, Alphabet::integer_range(phi->field(), 0, 1));
    // Conjugate place: |z|' <= 1 / (1 - |phi'|), product formula gives |z| >= 1 - |phi'|.
    long double conj = 0;
    for (const auto& r : oracle::roots(phi->field()->min_poly())) {
        if (std::abs(r) < 1) conj = std::abs(r);
    }
    const long double expect = 1.0L - conj;
    CHECK(s.to_double() <= static_cast<double>(expect));
    CHECK(s.to_double() > static_cast<double>(expect) * 0.999);
    CHECK(s.to_double() == doctest::Approx(0.381966).epsilon(1e-3));
}

TEST_CASE("measured gaps") {
    const PlaceSystemPtr two = sys("x-2");
    const auto a01 = Alphabet::integer_range(two->field(), 0, 1);
    const Interval g = min_gap(*two, enumerate_spectrum(*two, a01, 3));
    CHECK(g.contains(Rational(1)));

    const PlaceSystemPtr phi = sys("x^2-x-1");
    const auto b01 = Alphabet::integer_range(phi->field(), 0, 1);
    const SpectrumLevel l4 = enumerate_spectrum(*phi, b01, 4);
    const Interval gp = min_gap(*phi, l4);
    CHECK(gp.lo_d() >= 0.38);
    CHECK(static_cast<double>(brute_gap(*phi, l4)) == doctest::Approx(gp.mid_d()).epsilon(1e-9));

    const SpectrumLevel single = enumerate_spectrum(*two, Alphabet({FieldElement(two->field())}), 3);
    CHECK(single.size() == 1);
    CHECK(error_of([&] { min_gap(*two, single); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("gaps dominate the separation bound") {
    struct Case {
        const char* poly;
        long lo, hi;
        int max_n;
    };
    for (const Case& c : {Case{"x-2", 0, 1, 8}, Case{"x^2-x-1", 0, 1, 8}, Case{"x^4-x^3-x^2-x+1", -2, 2, 5},
                          Case{"x^2+2*x+2", -2, 2, 4}, Case{"x^3-x-1", 0, 1, 8}}) {
        const PlaceSystemPtr ps = sys(c.poly);
        const Alphabet a = Alphabet::integer_range(ps->field(), c.lo, c.hi);
        const Rational sep = separation_bound(*ps, a);
        CHECK(sep.sign() > 0);
        for (int n = 1; n <= c.max_n; ++n) {
            const SpectrumLevel level = enumerate_spectrum(*ps, a, n);
            const Interval g = min_gap(*ps, level);
            CHECK(g.lo_d() >= sep.to_double());
            if (level.size() <= 700) CHECK(static_cast<double>(brute_gap(*ps, level)) == doctest::Approx(g.mid_d()).epsilon(1e-9));
        }
    }
}

TEST_CASE("covering examples") {
    const PlaceSystemPtr two = sys("x-2");
    const SpectrumLevel l3 = enumerate_spectrum(*two, Alphabet::integer_range(two->field(), 0, 1), 3);
    const Interval r1 = covering_radius(*two, l3, interval_region(Rational(0), Rational(8)));
    CHECK(r1.lo_d() <= 0.5);
    CHECK(r1.hi_d() >= 0.5);
    CHECK(r1.hi_d() <= 0.5 + 1e-3);
    CHECK(exact_cover_1d(sorted_values(l3), Rational(0), Rational(8)) == Rational(1, 2));

    const SpectrumLevel s3 = enumerate_spectrum(*two, Alphabet::integer_range(two->field(), -1, 1), 3);
    const Interval r2 = covering_radius(*two, s3, interval_region(Rational(-8), Rational(8)));
    CHECK(r2.lo_d() <= 0.5);
    CHECK(r2.hi_d() <= 0.5 + 1e-3);
    CHECK(r2.hi_d() >= 0.5);

    const FieldElement two_e = FieldElement::from_rational(two->field(), 2);
    const SpectrumLevel e2 = enumerate_spectrum(*two, Alphabet({FieldElement(two->field()), two_e}), 2);
    const Interval r3 = covering_radius(*two, e2, interval_region(Rational(0), Rational(7)));
    CHECK(exact_cover_1d(sorted_values(e2), Rational(0), Rational(7)) == Rational(1));
    CHECK(r3.lo_d() <= 1.0);
    CHECK(r3.hi_d() >= 1.0);
    CHECK(r3.hi_d() <= 1.0 + 1e-3);
}

TEST_CASE("covering radius encloses sampled distances") {
    std::mt19937_64 rng(99);
    for (const char* p : {"x^2+2*x+2", "x^4-x^3-x^2-x+1", "x^2-x-1"}) {
        const PlaceSystemPtr ps = sys(p);
        const Alphabet a = Alphabet::integer_range(ps->field(), -2, 2);
        const SpectrumLevel level = enumerate_spectrum(*ps, a, 3);
        const Region region = Region::scaled_ball(*ps, 2, Rational(1));
        CoveringOptions opt;
        opt.tolerance = 1e-2;
        const Interval full = covering_radius(*ps, level, region, opt);
        const auto at = level_roots(*ps, level);
        const auto pts = level.points();
        std::vector<std::vector<oracle::cld>> emb;
        for (const auto& x : pts) {
            std::vector<oracle::cld> e;
            for (const auto& r : at) e.push_back(oracle::eval(x, r));
            emb.push_back(std::move(e));
        }
        std::uniform_real_distribution<long double> u(-1, 1);
        long double worst = 0;
        for (int t = 0; t < 3000; ++t) {
            std::vector<oracle::cld> y;
            for (std::size_t k = 0; k < at.size(); ++k) {
                const long double rad = region.radius[k].to_double();
                const bool real = ps->places()[static_cast<std::size_t>(level.places()[k])].kind == PlaceKind::Real;
                oracle::cld v;
                do {
                    v = oracle::cld(u(rng), real ? 0.0L : u(rng));
                } while (std::abs(v) > 1);
                y.push_back(v * rad);
            }
            long double best = 1e300L;
            for (const auto& e : emb) {
                long double d = 0;
                for (std::size_t k = 0; k < y.size(); ++k) d = std::max(d, std::abs(y[k] - e[k]));
                best = std::min(best, d);
            }
            worst = std::max(worst, best);
        }
        CHECK(static_cast<double>(worst) <= full.hi_d() + 1e-9);
        CHECK(full.hi_d() - full.lo_d() <= 1e-2 + 1e-9);

        // A sub-region never needs a larger radius.
        Region sub = region;
        for (auto& r : sub.radius) r = r / Rational(2);
        const Interval half = covering_radius(*ps, level, sub, opt);
        CHECK(half.lo_d() <= full.hi_d());
    }
}

TEST_CASE("exact one dimensional covering") {
    std::mt19937_64 rng(5);
    const PlaceSystemPtr two = sys("x-2");
    for (int t = 0; t < 20; ++t) {
        std::vector<FieldElement> digits;
        std::set<long> used;
        while (used.size() < 3) used.insert(static_cast<long>(rng() % 7) - 3);
        for (long d : used) digits.push_back(FieldElement::from_rational(two->field(), d));
        const SpectrumLevel level = enumerate_spectrum(*two, Alphabet(digits), 3);
        const long lo = static_cast<long>(rng() % 20) - 10;
        const long hi = lo + 1 + static_cast<long>(rng() % 15);
        const Interval r = covering_radius(*two, level, interval_region(Rational(lo), Rational(hi)));
        const double exact = exact_cover_1d(sorted_values(level), Rational(lo), Rational(hi)).to_double();
        CHECK(r.lo_d() <= exact + 1e-12);
        CHECK(r.hi_d() >= exact - 1e-12);
    }
}

TEST_CASE("density examples") {
    const PlaceSystemPtr two = sys("x-2");
    CHECK(density_test(*two, Alphabet::integer_range(two->field(), -1, 1)).kind == DensityKind::CertifiedDense);
    CHECK(density_test(*two, Alphabet::integer_range(two->field(), 0, 1)).kind == DensityKind::EvidenceSparse);

    const PlaceSystemPtr phi = sys("x^2-x-1");
    const Alphabet b01 = Alphabet::integer_range(phi->field(), 0, 1);
    const CertificateSearch search = origin_interior_certificate(*phi, b01);
    const DensityVerdict v = density_test(*phi, b01);
    CHECK(v.kind == (search.certificate ? DensityKind::CertifiedDense : DensityKind::EvidenceSparse));
    CHECK(search.refuted);

    const PlaceSystemPtr sal = sys("x^4-x^3-x^2-x+1");
    CHECK(error_of([&] { density_test(*sal, Alphabet::integer_range(sal->field(), -2, 2)); }) ==
          ErrorKind::UnitCirclePlacePresent);
    CHECK(std::string(to_string(DensityKind::EvidenceDense)) == "evidence-dense");
}
