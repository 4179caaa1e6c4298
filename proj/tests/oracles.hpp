// Independent reference computations used by the tests.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <vector>

#include "betarep/field_element.hpp"
#include "betarep/places.hpp"

namespace oracle {

using cld = std::complex<long double>;

/// Roots of an integer polynomial from the eigenvalues of its companion matrix.
inline std::vector<cld> roots(const betarep::IntPolynomial& p) {
    const int d = p.degree();
    const long double lead = p[d].get_d();
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> c = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>::Zero(d, d);
    for (int i = 1; i < d; ++i) c(i, i - 1) = 1;
    for (int i = 0; i < d; ++i) c(i, d - 1) = -p[i].get_d() / lead;
    Eigen::EigenSolver<Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>> es(c);
    std::vector<cld> out;
    for (int i = 0; i < d; ++i) out.push_back(es.eigenvalues()[i]);
    return out;
}

/// Evaluation of a power-basis element at a numeric root.
inline cld eval(const betarep::FieldElement& x, cld r) {
    cld acc = 0;
    for (int k = x.degree() - 1; k >= 0; --k) acc = acc * r + static_cast<long double>(x.coeffs()[static_cast<std::size_t>(k)].to_double());
    return acc;
}

/// Matrix of multiplication by x in the power basis, exact.
inline std::vector<std::vector<betarep::Rational>> mult_matrix(const betarep::FieldElement& x) {
    const int d = x.degree();
    std::vector<std::vector<betarep::Rational>> m(static_cast<std::size_t>(d), std::vector<betarep::Rational>(static_cast<std::size_t>(d)));
    betarep::FieldElement col = x;
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = col.coeffs()[static_cast<std::size_t>(i)];
        col = col.mul_generator();
    }
    return m;
}

inline betarep::Rational trace(const std::vector<std::vector<betarep::Rational>>& m) {
    betarep::Rational t(0);
    for (std::size_t i = 0; i < m.size(); ++i) t += m[i][i];
    return t;
}

/// Determinant by fraction-exact Gaussian elimination.
inline betarep::Rational det(std::vector<std::vector<betarep::Rational>> m) {
    const std::size_t n = m.size();
    betarep::Rational d(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m[piv][c].sign() == 0) ++piv;
        if (piv == n) return betarep::Rational(0);
        if (piv != c) {
            std::swap(m[piv], m[c]);
            d = -d;
        }
        d *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const betarep::Rational f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return d;
}

inline betarep::FieldElement random_element(const betarep::FieldPtr& k, std::mt19937_64& rng, long h = 9) {
    std::vector<betarep::Rational> c;
    for (int i = 0; i < k->degree(); ++i) {
        const long num = static_cast<long>(rng() % static_cast<unsigned long>(2 * h + 1)) - h;
        const long den = 1 + static_cast<long>(rng() % static_cast<unsigned long>(h));
        c.emplace_back(num, den);
    }
    return betarep::FieldElement(k, std::move(c));
}

/// Companion-matrix root nearest to the root behind an archimedean place.
inline cld place_root(const betarep::PlaceSystem& ps, int place) {
    const auto& ball = ps.roots()[static_cast<std::size_t>(ps.places()[static_cast<std::size_t>(place)].root)];
    const cld c(ball.center_re.to_double(), ball.center_im.to_double());
    cld best = 0;
    long double d = 1e300L;
    for (const auto& r : roots(ps.field()->min_poly())) {
        if (std::abs(r - c) < d) {
            d = std::abs(r - c);
            best = r;
        }
    }
    return best;
}

/// max over the given places of |x|, numerically.
inline long double norm(const betarep::FieldElement& x, const std::vector<cld>& at) {
    long double m = 0;
    for (const auto& r : at) m = std::max(m, std::abs(eval(x, r)));
    return m;
}

}  // namespace oracle
