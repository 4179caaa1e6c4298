#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "betarep/approximation.hpp"
#include "oracles.hpp"

using namespace betarep;

namespace {
FieldPtr field(const char* p) { return construct_field(IntPolynomial::parse(p)); }
PlaceSystemPtr sys(const char* p) { return PlaceSystem::build(field(p)); }

bool contains(const Interval& v, long double x) {
    return v.lo().to_double() - 1e-15 <= static_cast<double>(x) && static_cast<double>(x) <= v.hi().to_double() + 1e-15;
}
}  // namespace

TEST_CASE("golden ratio roots match the quadratic formula") {
    const auto balls = isolate_roots(*field("x^2-x-1"), 1e-10);
    REQUIRE(balls.size() == 2);
    const double s5 = std::sqrt(5.0);
    CHECK(balls[0].center_re.to_double() == doctest::Approx((1 - s5) / 2).epsilon(1e-12));
    CHECK(balls[1].center_re.to_double() == doctest::Approx((1 + s5) / 2).epsilon(1e-12));
    for (const auto& b : balls) {
        CHECK(b.is_real);
        CHECK(b.radius.to_double() <= 1e-10);
    }
}

TEST_CASE("root balls enclose companion-matrix eigenvalues") {
    for (const char* p : {"x^4-x^3-x^2-x+1", "x^3-x-1", "x^2+2*x+2", "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1", "x^5-3*x+1"}) {
        const FieldPtr k = field(p);
        const auto balls = isolate_roots(*k, 1e-12);
        const auto ref = oracle::roots(k->min_poly());
        REQUIRE(balls.size() == ref.size());
        for (const auto& r : ref) {
            const auto hit = std::count_if(balls.begin(), balls.end(), [&](const RootBall& b) {
                return std::hypot(b.center_re.to_double() - static_cast<double>(r.real()),
                                  b.center_im.to_double() - static_cast<double>(r.imag())) < 1e-9;
            });
            CHECK(hit == 1);
        }
        for (std::size_t i = 1; i < balls.size(); ++i) {
            const double a = balls[i - 1].center_re.to_double();
            const double b = balls[i].center_re.to_double();
            CHECK((a < b || (a == b && balls[i - 1].center_im.to_double() < balls[i].center_im.to_double())));
        }
    }
}

TEST_CASE("linear base has an exact root") {
    const auto balls = isolate_roots(*field("x-2"), 1e-10);
    REQUIRE(balls.size() == 1);
    CHECK(balls[0].center_re.to_double() == 2.0);
    CHECK(balls[0].radius.to_double() == 0.0);
}

TEST_CASE("Salem quartic roots and classes") {
    const PlaceSystemPtr ps = sys("x^4-x^3-x^2-x+1");
    int expanding = 0, unit = 0, contracting = 0;
    for (std::size_t i = 0; i < ps->roots().size(); ++i) {
        const auto& b = ps->roots()[i];
        switch (ps->root_classes()[i]) {
            case ModulusClass::Expanding:
                ++expanding;
                CHECK(b.center_re.to_double() == doctest::Approx(1.7220838).epsilon(1e-7));
                break;
            case ModulusClass::Contracting:
                ++contracting;
                CHECK(b.center_re.to_double() == doctest::Approx(1 / 1.7220838057390422).epsilon(1e-12));
                break;
            case ModulusClass::Unit:
                ++unit;
                CHECK(std::hypot(b.center_re.to_double(), b.center_im.to_double()) == doctest::Approx(1.0).epsilon(1e-12));
                break;
        }
    }
    CHECK(expanding == 1);
    CHECK(unit == 2);
    CHECK(contracting == 1);
    CHECK(is_self_reciprocal(ps->field()->min_poly()));
}

TEST_CASE("base classification") {
    CHECK(classify_base(*sys("x^2-x-1")).label == BaseLabel::Pisot);
    CHECK(classify_base(*sys("x^3-x-1")).label == BaseLabel::Pisot);
    CHECK(classify_base(*sys("x^4-x^3-x^2-x+1")).label == BaseLabel::Salem);
    CHECK(classify_base(*sys("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1")).label == BaseLabel::Salem);
    CHECK(classify_base(*sys("x^2+2*x+2")).label == BaseLabel::ComplexPisot);
    CHECK(classify_base(*sys("x^2-5")).label == BaseLabel::ExpandingOther);
    CHECK(classify_base(*sys("x-2")).label == BaseLabel::RationalInteger);
    CHECK(classify_base(*sys("2*x-3")).label == BaseLabel::RationalNonInteger);
    CHECK(std::string(to_string(BaseLabel::ComplexPisot)) == "complexPisot");
}

TEST_CASE("Salem classification implies a self-reciprocal polynomial") {
    for (const char* p : {"x^4-x^3-x^2-x+1", "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1", "x^6-x^4-x^3-x^2+1", "x^2-x-1", "x^3-x-1"}) {
        const PlaceSystemPtr ps = sys(p);
        if (ps->base_class().label == BaseLabel::Salem) CHECK(is_self_reciprocal(ps->field()->min_poly()));
    }
}

TEST_CASE("place system of a rational base carries the primes of the denominator") {
    const PlaceSystemPtr ps = sys("2*x-3");
    REQUIRE(ps->places().size() == 2);
    CHECK(ps->places()[1].kind == PlaceKind::Finite);
    CHECK(ps->places()[1].prime == 2);
    const FieldElement x = FieldElement::from_rational(ps->field(), Rational(BigInt(3), BigInt(2)));
    const CertifiedValue v = eval_embedding(*ps, x, {1}, 64);
    REQUIRE(v[0].padic_abs);
    CHECK(*v[0].padic_abs == Rational(2));
}

TEST_CASE("embedding examples") {
    const PlaceSystemPtr ps = sys("x^2-x-1");
    const FieldElement b = FieldElement::generator(ps->field());
    std::vector<int> all;
    for (std::size_t i = 0; i < ps->places().size(); ++i) all.push_back(static_cast<int>(i));
    const CertifiedValue v = eval_embedding(*ps, b, all, 64);
    const double phi = (1 + std::sqrt(5.0)) / 2;
    CHECK(v[0].value.re.lo_d() == doctest::Approx(phi));
    CHECK(v[1].value.re.lo_d() == doctest::Approx(1 - phi));
    const CertifiedValue one = eval_embedding(*ps, FieldElement::from_rational(ps->field(), 1), all, 64);
    for (const auto& pv : one) {
        CHECK(pv.value.re.lo_d() == 1.0);
        CHECK(pv.value.re.hi_d() == 1.0);
    }
}

TEST_CASE("beta norm") {
    const PlaceSystemPtr ps = sys("x^4-x^3-x^2-x+1");
    const auto& k = ps->field();
    const Interval zero = beta_norm(*ps, FieldElement(k), 64);
    CHECK(zero.lo_d() == 0.0);
    CHECK(zero.hi_d() == 0.0);
    const Interval one = beta_norm(*ps, FieldElement::from_rational(k, 1), 64);
    CHECK(one.lo_d() == 1.0);
    CHECK(one.hi_d() == 1.0);
    const Interval b = beta_norm(*ps, FieldElement::generator(k), 64);
    CHECK(b.lo_d() == doctest::Approx(1.7220838).epsilon(1e-7));
}

TEST_CASE("representation constant") {
    const PlaceSystemPtr two = sys("x-2");
    CHECK(rep_constant(*two, Alphabet::integer_range(two->field(), 0, 1).digits, 0, 64).hi_d() == doctest::Approx(1.0));
    const PlaceSystemPtr sal = sys("x^4-x^3-x^2-x+1");
    const Interval c = rep_constant(*sal, Alphabet::integer_range(sal->field(), -2, 2).digits, 0, 64);
    const double beta = 1.7220838057390422;
    CHECK(c.hi_d() == doctest::Approx(2 / (beta - 1)).epsilon(1e-9));
    const PlaceSystemPtr phi = sys("x^2-x-1");
    CHECK(rep_constant(*phi, Alphabet::integer_range(phi->field(), -1, 1).digits, 0, 64).hi_d() ==
          doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-12));
    CHECK_THROWS_AS(rep_constant(*phi, Alphabet::integer_range(phi->field(), -1, 1).digits, 1, 64), Error);
}

TEST_CASE("trace and norm from embeddings contain the exact companion-matrix values") {
    std::mt19937_64 rng(99);
    for (const char* p : {"x^2-x-1", "x^4-x^3-x^2-x+1", "x^2+2*x+2", "x^3-x-1"}) {
        const PlaceSystemPtr ps = sys(p);
        for (int t = 0; t < 50; ++t) {
            const FieldElement x = oracle::random_element(ps->field(), rng);
            const auto m = oracle::mult_matrix(x);
            const Rational tr = oracle::trace(m);
            const Rational nm = oracle::det(m);
            const auto emb = ps->embed_all_roots(x, 128);
            CInterval sum{Interval(0L, 128), Interval(0L, 128)};
            CInterval prod{Interval(1L, 128), Interval(0L, 128)};
            for (const auto& e : emb) {
                sum = sum + e;
                prod = prod * e;
            }
            const Interval tr_i(tr, 128);
            const Interval nm_i(nm, 128);
            CHECK(sum.re.lo_d() <= tr_i.hi_d());
            CHECK(sum.re.hi_d() >= tr_i.lo_d());
            CHECK(sum.im.contains_zero());
            CHECK(prod.re.lo_d() <= nm_i.hi_d());
            CHECK(prod.re.hi_d() >= nm_i.lo_d());
            CHECK(prod.im.contains_zero());
        }
    }
}

TEST_CASE("refinement never grows balls and keeps old enclosures") {
    const FieldPtr k = field("x^4-x^3-x^2-x+1");
    const auto coarse = isolate_roots_log2(*k, -20);
    const auto fine = refine_roots(*k, coarse, -80);
    REQUIRE(coarse.size() == fine.size());
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        CHECK(mpfr_cmp(fine[i].radius.get(), coarse[i].radius.get()) <= 0);
        const CInterval a = coarse[i].enclosure();
        const CInterval b = fine[i].enclosure();
        CHECK(a.re.lo_d() <= b.re.hi_d());
        CHECK(b.re.lo_d() <= a.re.hi_d());
        CHECK(a.im.lo_d() <= b.im.hi_d());
        CHECK(b.im.lo_d() <= a.im.hi_d());
    }
}

TEST_CASE("beta norm is submultiplicative") {
    std::mt19937_64 rng(5);
    const PlaceSystemPtr ps = sys("x^4-x^3-x^2-x+1");
    for (int t = 0; t < 40; ++t) {
        const FieldElement x = oracle::random_element(ps->field(), rng);
        const FieldElement y = oracle::random_element(ps->field(), rng);
        CHECK(beta_norm(*ps, x * y, 64).hi_d() <= beta_norm(*ps, x, 64).hi_d() * beta_norm(*ps, y, 64).hi_d() * (1 + 1e-12));
    }
}

TEST_CASE("distinguished root") {
    const PlaceSystemPtr gi = sys("x^2+2*x+2");
    const auto& r = gi->roots()[static_cast<std::size_t>(gi->distinguished_root())];
    CHECK(r.center_re.to_double() == -1.0);
    CHECK(r.center_im.to_double() == 1.0);
    const PlaceSystemPtr other = PlaceSystem::build(construct_field(IntPolynomial::parse("x^2-5"), RootSelector{0}));
    CHECK(other->distinguished_root() == 0);
    CHECK(other->roots()[0].center_re.to_double() < 0);
    CHECK(other->field()->root_selector().index == 0);
}
