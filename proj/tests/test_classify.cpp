#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "betarep/classify.hpp"
#include "oracles.hpp"

using namespace betarep;

namespace {
PlaceSystemPtr sys(const IntPolynomial& p) { return PlaceSystem::build(construct_field(p)); }
PlaceSystemPtr sys(const char* p) { return sys(IntPolynomial::parse(p)); }

IntPolynomial negate_variable(const IntPolynomial& p) {
    std::vector<BigInt> c;
    const int d = p.degree();
    for (int i = 0; i <= d; ++i) c.push_back(((d - i) % 2 == 0) ? p[i] : BigInt(-p[i]));
    return IntPolynomial(c);
}

/// Expanding roots other than the largest one and its conjugate, counted numerically.
/// Modulus ties go to the larger real part, then the larger imaginary part.
int oracle_offenders(const IntPolynomial& p) {
    auto rs = oracle::roots(p);
    const long double tol = 1e-12L;
    std::size_t top = 0;
    for (std::size_t i = 1; i < rs.size(); ++i) {
        const long double a = std::abs(rs[i]), b = std::abs(rs[top]);
        if (a > b + tol) {
            top = i;
        } else if (a > b - tol) {
            if (rs[i].real() > rs[top].real() + tol ||
                (rs[i].real() > rs[top].real() - tol && rs[i].imag() > rs[top].imag())) {
                top = i;
            }
        }
    }
    int count = 0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (i == top || std::abs(rs[i] - std::conj(rs[top])) < 1e-9L) continue;
        if (std::abs(rs[i]) > 1 + 1e-9L) ++count;
    }
    return count;
}

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
}  // namespace

TEST_CASE("weak greedy examples") {
    const WeakGreedyVerdict phi = weak_greedy_decision(*sys("x^2-x-1"));
    CHECK(phi.admits);
    CHECK(phi.base_class.label == BaseLabel::Pisot);
    CHECK(phi.offending_conjugates.empty());

    const WeakGreedyVerdict sal = weak_greedy_decision(*sys("x^4-x^3-x^2-x+1"));
    CHECK(sal.admits);
    CHECK(sal.base_class.label == BaseLabel::Salem);

    const WeakGreedyVerdict five = weak_greedy_decision(*sys("x^2-5"));
    CHECK_FALSE(five.admits);
    CHECK(five.base_class.label == BaseLabel::ExpandingOther);
    REQUIRE(five.offending_conjugates.size() == 1);
    CHECK(five.offending_conjugates[0].center_re.to_double() == doctest::Approx(-2.2360679775).epsilon(1e-9));
}

TEST_CASE("classification table") {
    struct Row {
        const char* poly;
        BaseLabel label;
        bool admits;
    };
    for (const Row& r : {Row{"x^2-x-1", BaseLabel::Pisot, true}, Row{"x^3-x-1", BaseLabel::Pisot, true},
                         Row{"x^4-x^3-x^2-x+1", BaseLabel::Salem, true},
                         Row{"x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1", BaseLabel::Salem, true},
                         Row{"x^2+2*x+2", BaseLabel::ComplexPisot, true}, Row{"x^2-5", BaseLabel::ExpandingOther, false}}) {
        const WeakGreedyVerdict v = weak_greedy_decision(*sys(r.poly));
        CHECK(v.base_class.label == r.label);
        CHECK(v.admits == r.admits);
    }
}

TEST_CASE("verdict matches numeric root counts") {
    for (const char* p : {"x^3-3*x-1", "x^3-2", "x^2-2*x+2", "x^4-2", "x^3-x^2-x-1", "x^2-3*x+1", "x^2+x+2",
                          "x^3+x^2+x+2", "x^3-4*x+2", "x^4-x-1", "x^5-x^4-x^3-1", "x^2-7", "x-3", "x+2"}) {
        const IntPolynomial poly = IntPolynomial::parse(p);
        const PlaceSystemPtr ps = sys(poly);
        const WeakGreedyVerdict v = weak_greedy_decision(*ps);
        const int offenders = oracle_offenders(poly);
        CHECK(v.admits == (offenders == 0));
        CHECK(static_cast<int>(v.offending_conjugates.size()) == offenders);
        CHECK(v.offending_roots.size() == v.offending_conjugates.size());
        const BaseLabel l = v.base_class.label;
        if (l == BaseLabel::Pisot || l == BaseLabel::Salem || l == BaseLabel::ComplexPisot || l == BaseLabel::ComplexSalem) {
            CHECK(v.admits);
        }
        const int own = ps->roots()[static_cast<std::size_t>(ps->distinguished_root())].is_real ? 1 : 2;
        CHECK(v.admits == (v.base_class.expanding == own));
    }
}

TEST_CASE("verdict is symmetric under x to -x") {
    for (const char* p : {"x^2-x-1", "x^3-x-1", "x^4-x^3-x^2-x+1", "x^2+2*x+2", "x^2-5", "x^3-3*x-1", "x^3-2"}) {
        const IntPolynomial poly = IntPolynomial::parse(p);
        const WeakGreedyVerdict a = weak_greedy_decision(*sys(poly));
        const WeakGreedyVerdict b = weak_greedy_decision(*sys(negate_variable(poly)));
        CHECK(a.admits == b.admits);
        CHECK(static_cast<int>(a.offending_conjugates.size()) == oracle_offenders(poly));
        CHECK(static_cast<int>(b.offending_conjugates.size()) == oracle_offenders(negate_variable(poly)));
    }
}

TEST_CASE("precondition errors") {
    CHECK(error_of([] { weak_greedy_decision(*sys("2*x-3")); }) == ErrorKind::NotMonic);
    CHECK(error_of([] { weak_greedy_decision(*sys("x^2+1")); }) == ErrorKind::NotExpandingPlace);
    CHECK(error_of([] { weak_greedy_decision(*sys("x^2-x+1")); }) == ErrorKind::NotExpandingPlace);
}
