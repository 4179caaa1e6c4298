#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "betarep/attractor.hpp"
#include "oracles.hpp"

using namespace betarep;

namespace {
PlaceSystemPtr sys(const char* p) { return PlaceSystem::build(construct_field(IntPolynomial::parse(p))); }

FieldElement q(const PlaceSystem& ps, long n, long d = 1) {
    return FieldElement::from_rational(ps.field(), Rational(BigInt(n), BigInt(d)));
}

std::set<Rational> rational_points(const CylinderCover& c) {
    std::set<Rational> out;
    for (const auto& x : c.points) out.insert(x.rational_value());
    return out;
}

std::vector<int> archimedean_s(const PlaceSystem& ps) {
    std::vector<int> out;
    for (int p : ps.s_beta()) {
        if (ps.places()[static_cast<std::size_t>(p)].archimedean()) out.push_back(p);
    }
    return out;
}

/// Some cover point is within the tail radius of x at every place simultaneously.
bool inside_cover(const PlaceSystem& ps, const CylinderCover& c, const FieldElement& x) {
    const auto places = archimedean_s(ps);
    std::vector<oracle::cld> at;
    for (int p : places) at.push_back(oracle::place_root(ps, p));
    for (const auto& pt : c.points) {
        bool ok = true;
        for (std::size_t k = 0; k < at.size() && ok; ++k) {
            ok = std::abs(oracle::eval(x - pt, at[k])) <= static_cast<long double>(c.radius[k].hi_d()) + 1e-12L;
        }
        if (ok) return true;
    }
    return false;
}
}  // namespace

TEST_CASE("cylinder cover examples") {
    const PlaceSystemPtr two = sys("x-2");
    const CylinderCover c2 = cylinder_cover(*two, Alphabet::integer_range(two->field(), 0, 1), 2);
    CHECK(rational_points(c2) == std::set<Rational>{Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4)});
    REQUIRE(c2.radius.size() == 1);
    CHECK(c2.radius[0].contains(Rational(1, 4)));

    const CylinderCover s1 = cylinder_cover(*two, Alphabet::integer_range(two->field(), -1, 1), 1);
    CHECK(rational_points(s1) == std::set<Rational>{Rational(-1, 2), Rational(0), Rational(1, 2)});
    CHECK(s1.radius[0].contains(Rational(1, 2)));

    const PlaceSystemPtr phi = sys("x^2-x-1");
    const CylinderCover p1 = cylinder_cover(*phi, Alphabet::integer_range(phi->field(), 0, 1), 1);
    CHECK(p1.points.size() == 2);
    CHECK(p1.radius[0].contains(Rational(1)));
    const FieldElement inv_phi = FieldElement::generator(phi->field()).inverse();
    CHECK(std::find(p1.points.begin(), p1.points.end(), inv_phi) != p1.points.end());

    const PlaceSystemPtr sal = sys("x^4-x^3-x^2-x+1");
    try {
        cylinder_cover(*sal, Alphabet::integer_range(sal->field(), -2, 2), 1);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnitCirclePlacePresent);
    }
}

TEST_CASE("cover radius shrinks by the expansion factor") {
    for (const char* p : {"x-2", "x^2-x-1", "x^2+2*x+2", "x^3-x-1"}) {
        const PlaceSystemPtr ps = sys(p);
        const Alphabet a = Alphabet::integer_range(ps->field(), -1, 1);
        const auto places = archimedean_s(*ps);
        double min_abs = 1e300;
        for (int pl : places) min_abs = std::min(min_abs, static_cast<double>(std::abs(oracle::place_root(*ps, pl))));
        CylinderCover prev = cylinder_cover(*ps, a, 1);
        for (int n = 2; n <= 6; ++n) {
            const CylinderCover cur = cylinder_cover(*ps, a, n);
            for (std::size_t k = 0; k < cur.radius.size(); ++k) {
                CHECK(cur.radius[k].lo_d() <= prev.radius[k].hi_d() / min_abs + 1e-12);
            }
            prev = cur;
        }
    }
}

TEST_CASE("fractional parts lie in the cylinder covers") {
    struct Case {
        const char* poly;
        long lo, hi;
    };
    for (const Case& c : {Case{"x-2", -1, 1}, Case{"x^2-x-1", 0, 1}, Case{"x^2+2*x+2", -2, 2}}) {
        const PlaceSystemPtr ps = sys(c.poly);
        const Alphabet a = Alphabet::integer_range(ps->field(), c.lo, c.hi);
        std::vector<CylinderCover> covers;
        for (int n = 1; n <= 5; ++n) covers.push_back(cylinder_cover(*ps, a, n));
        for (const auto& [num, den] : std::vector<std::pair<long, long>>{{1, 3}, {2, 5}, {5, 7}, {3, 2}, {7, 3}}) {
            const FieldElement x = q(*ps, num, den);
            Policy pol;
            pol.max_iters = 100000;
            const RepresentResult r = represent(*ps, x, a, pol);
            REQUIRE(verify(r.rep, x));
            const FieldElement frp = value_of(split_parts(r.rep).frp);
            for (const auto& cov : covers) CHECK(inside_cover(*ps, cov, frp));
        }
    }
}

TEST_CASE("interior certificates") {
    const PlaceSystemPtr two = sys("x-2");
    const Alphabet sym = Alphabet::integer_range(two->field(), -1, 1);
    const CertificateSearch s = origin_interior_certificate(*two, sym);
    REQUIRE(s.certificate);
    CHECK(s.certificate->n == 1);
    CHECK(s.certificate->rho == Rational(1));
    CHECK(check_certificate(*two, *s.certificate));
    CHECK_FALSE(s.refuted);

    // 2 * [-2, 2] = [-4, 4] is not inside {-1, 0, 1} + [-2, 2] = [-3, 3].
    InteriorCertificate tampered = *s.certificate;
    tampered.rho = tampered.rho * Rational(2);
    CHECK_FALSE(check_certificate(*two, tampered));

    InteriorCertificate empty = *s.certificate;
    empty.witness = level_of(*two, empty.n, {});
    CHECK_FALSE(check_certificate(*two, empty));

    InteriorCertificate foreign = *s.certificate;
    foreign.witness = level_of(*two, foreign.n, {q(*two, 1, 2)});
    CHECK_FALSE(check_certificate(*two, foreign));

    const Alphabet pos = Alphabet::integer_range(two->field(), 0, 1);
    const CertificateSearch n = origin_interior_certificate(*two, pos);
    CHECK_FALSE(n.certificate);
    CHECK(n.refuted);
    const CylinderCover c = cylinder_cover(*two, pos, 6);
    for (const auto& x : c.points) CHECK(x.rational_value().sign() >= 0);
    REQUIRE(half_space_obstruction(*two, pos));
    CHECK(half_space_obstruction(*two, pos)->sign == 1);
    CHECK(provably_unrepresentable(*two, pos, q(*two, -1)));
    CHECK_FALSE(provably_unrepresentable(*two, pos, q(*two, 1, 3)));
}

TEST_CASE("complex base certificate") {
    const PlaceSystemPtr gi = sys("x^2+2*x+2");
    const Alphabet a = Alphabet::integer_range(gi->field(), -2, 2);
    const CertificateSearch s = origin_interior_certificate(*gi, a);
    REQUIRE(s.certificate);
    CHECK(s.certificate->n <= 12);
    CHECK(s.certificate->witness.size() > 0);
    CHECK(check_certificate(*gi, *s.certificate));
    std::set<std::vector<Rational>> level;
    for (const auto& x : enumerate_spectrum(*gi, a, s.certificate->n - 1).points()) level.insert(x.coeffs());
    for (const auto& w : s.certificate->witness.points()) CHECK(level.count(w.coeffs()) == 1);
}

TEST_CASE("every issued certificate replays") {
    int issued = 0;
    for (const char* p : {"x-3", "x+2", "x^2-2*x+2", "x^2+x+2", "x^3-x-1"}) {
        const PlaceSystemPtr ps = sys(p);
        for (long m : {1L, 2L}) {
            const Alphabet a = Alphabet::integer_range(ps->field(), -m, m);
            CertificateBudget b;
            b.max_level = 8;
            const CertificateSearch s = origin_interior_certificate(*ps, a, b);
            if (s.certificate) {
                ++issued;
                CHECK(check_certificate(*ps, *s.certificate));
            }
            CHECK_FALSE((s.certificate && s.refuted));
        }
    }
    CHECK(issued >= 3);
}

TEST_CASE("cross validation examples") {
    const PlaceSystemPtr two = sys("x-2");
    SampleSpec spec;
    spec.count = 4;
    for (auto [n, d] : std::vector<std::pair<long, long>>{{1, 3}, {-1, 3}, {5, 7}, {-5, 7}, {4, 1}}) spec.extra.push_back(q(*two, n, d));
    const CrossValidationReport r = cross_validate_main2(*two, Alphabet::integer_range(two->field(), -1, 1), spec);
    for (const auto v : r.cond) CHECK(v == ConditionVerdict::Positive);
    CHECK(r.contradictions.empty());
    for (const auto& s : r.samples) {
        CHECK(s.status == SampleStatus::Verified);
        REQUIRE(s.rep);
        CHECK(verify(*s.rep, s.x));
    }

    SampleSpec neg;
    neg.count = 4;
    neg.extra.push_back(q(*two, -1));
    const CrossValidationReport rn = cross_validate_main2(*two, Alphabet::integer_range(two->field(), 0, 1), neg);
    CHECK(rn.cond[3] == ConditionVerdict::Negative);
    CHECK(rn.contradictions.empty());
    const auto it = std::find_if(rn.samples.begin(), rn.samples.end(), [&](const SampleOutcome& s) { return s.x == q(*two, -1); });
    REQUIRE(it != rn.samples.end());
    CHECK(it->status == SampleStatus::Unrepresentable);

    const PlaceSystemPtr phi = sys("x^2-x-1");
    SampleSpec ps;
    ps.count = 3;
    ps.extra = {q(*phi, 1, 2), q(*phi, 2, 3)};
    const CrossValidationReport rp = cross_validate_main2(*phi, Alphabet::integer_range(phi->field(), 0, 1), ps);
    CHECK(rp.contradictions.empty());
    for (const auto& s : rp.samples) {
        if (s.status == SampleStatus::Verified) CHECK(verify(*s.rep, s.x));
    }
}

TEST_CASE("samples are seeded and deterministic") {
    const PlaceSystemPtr phi = sys("x^2-x-1");
    SampleSpec spec;
    spec.count = 10;
    spec.seed = 77;
    const auto a = sample_elements(phi->field(), spec);
    const auto b = sample_elements(phi->field(), spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].first == b[i].first);
    long integral = 0;
    for (const auto& [x, z] : a) {
        if (z) {
            ++integral;
            for (const auto& c : x.coeffs()) CHECK(c.denominator() == 1);
        }
        for (const auto& c : x.coeffs()) {
            CHECK(c.numerator() * (c.sign() < 0 ? -1 : 1) <= 6);
            CHECK(c.denominator() <= 6);
        }
    }
    CHECK(integral == 10);
    spec.seed = 78;
    const auto c = sample_elements(phi->field(), spec);
    bool differ = false;
    for (std::size_t i = 0; i < std::min(a.size(), c.size()); ++i) differ = differ || !(a[i].first == c[i].first);
    CHECK(differ);
}
