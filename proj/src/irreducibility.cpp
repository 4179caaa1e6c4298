#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "betarep/number_field.hpp"

namespace betarep {
namespace {

using ModPoly = std::vector<std::int64_t>;  // constant term first, trimmed

void trim(ModPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
    std::int64_t r = 1;
    std::int64_t e = p - 2;
    a %= p;
    while (e > 0) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

ModPoly mod_reduce(const IntPolynomial& f, std::int64_t p) {
    ModPoly r;
    for (const auto& c : f.coefficients()) {
        r.push_back(static_cast<std::int64_t>(mpz_fdiv_ui(c.get_mpz_t(), static_cast<unsigned long>(p))));
    }
    trim(r);
    return r;
}

ModPoly poly_rem(ModPoly a, const ModPoly& b, std::int64_t p) {
    const int db = static_cast<int>(b.size()) - 1;
    const std::int64_t inv = inv_mod(b.back(), p);
    for (int k = static_cast<int>(a.size()) - 1; k >= db; --k) {
        const std::int64_t f = a[static_cast<std::size_t>(k)] * inv % p;
        if (f == 0) continue;
        for (int j = 0; j <= db; ++j) {
            auto& t = a[static_cast<std::size_t>(k - db + j)];
            t = ((t - f * b[static_cast<std::size_t>(j)]) % p + p) % p;
        }
    }
    trim(a);
    return a;
}

ModPoly poly_quot(ModPoly a, const ModPoly& b, std::int64_t p) {
    const int db = static_cast<int>(b.size()) - 1;
    const int da = static_cast<int>(a.size()) - 1;
    if (da < db) return {};
    ModPoly q(static_cast<std::size_t>(da - db + 1), 0);
    const std::int64_t inv = inv_mod(b.back(), p);
    for (int k = da; k >= db; --k) {
        const std::int64_t f = a[static_cast<std::size_t>(k)] * inv % p;
        q[static_cast<std::size_t>(k - db)] = f;
        if (f == 0) continue;
        for (int j = 0; j <= db; ++j) {
            auto& t = a[static_cast<std::size_t>(k - db + j)];
            t = ((t - f * b[static_cast<std::size_t>(j)]) % p + p) % p;
        }
    }
    trim(q);
    return q;
}

ModPoly poly_mulmod(const ModPoly& a, const ModPoly& b, const ModPoly& m, std::int64_t p) {
    if (a.empty() || b.empty()) return {};
    ModPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    trim(r);
    return poly_rem(std::move(r), m, p);
}

ModPoly poly_powmod(ModPoly base, std::int64_t e, const ModPoly& m, std::int64_t p) {
    ModPoly result{1};
    base = poly_rem(std::move(base), m, p);
    while (e > 0) {
        if (e & 1) result = poly_mulmod(result, base, m, p);
        base = poly_mulmod(base, base, m, p);
        e >>= 1;
    }
    return result;
}

ModPoly poly_sub(ModPoly a, const ModPoly& b, std::int64_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % p + p) % p;
    trim(a);
    return a;
}

ModPoly poly_gcd(ModPoly a, ModPoly b, std::int64_t p) {
    while (!b.empty()) {
        ModPoly r = poly_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

ModPoly poly_derivative(const ModPoly& a, std::int64_t p) {
    ModPoly r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(static_cast<std::int64_t>(i) % p * a[i] % p);
    trim(r);
    return r;
}

/// Degrees of the irreducible factors of a squarefree polynomial over F_p.
std::vector<int> distinct_degree_pattern(ModPoly f, std::int64_t p) {
    std::vector<int> degrees;
    const ModPoly x{0, 1};
    ModPoly h = x;
    for (int i = 1; 2 * i <= static_cast<int>(f.size()) - 1; ++i) {
        h = poly_powmod(h, p, f, p);
        ModPoly g = poly_gcd(f, poly_sub(h, x, p), p);
        const int dg = static_cast<int>(g.size()) - 1;
        if (dg > 0) {
            for (int k = 0; k < dg / i; ++k) degrees.push_back(i);
            f = poly_quot(f, g, p);
            h = poly_rem(h, f, p);
        }
    }
    if (static_cast<int>(f.size()) - 1 > 0) degrees.push_back(static_cast<int>(f.size()) - 1);
    return degrees;
}

std::set<int> subset_sums(const std::vector<int>& parts) {
    std::set<int> sums{0};
    for (int d : parts) {
        std::set<int> next = sums;
        for (int s : sums) next.insert(s + d);
        sums = std::move(next);
    }
    return sums;
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long k = 2; k * k <= n; ++k) {
        if (n % k == 0) return false;
    }
    return true;
}

BigInt binomial(int n, int k) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

/// Ordering 0, 1, -1, 2, -2, ... restricted to |c| <= bound.
std::vector<BigInt> symmetric_range(const BigInt& bound) {
    std::vector<BigInt> r{BigInt(0)};
    for (BigInt c = 1; c <= bound; ++c) {
        r.push_back(c);
        r.push_back(-c);
    }
    return r;
}

}  // namespace

IrreducibilityCertificate check_irreducible(const IntPolynomial& f, long search_budget) {
    const int d = f.degree();
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "constant polynomial");
    if (!f.is_monic()) throw Error(ErrorKind::NotMonic, f.str());
    if (d == 1) return {"linear", 0};
    if (d > 32) throw Error(ErrorKind::Unsupported, "degree above 32");
    if (f[0] == 0) throw ReducibleError(IntPolynomial{0, 1}, "x divides " + f.str());

    // Repeated factors show up in gcd(f, f'); over Z the monic gcd has integer coefficients.
    {
        RatPolynomial g = gcd(RatPolynomial(f), RatPolynomial(f.derivative()));
        if (g.degree() > 0) {
            std::vector<BigInt> c;
            for (const auto& q : g.coefficients()) c.push_back(q.numerator());
            throw ReducibleError(IntPolynomial(std::move(c)), "repeated factor in " + f.str());
        }
    }

    // Degree patterns modulo small primes; irreducible mod p settles the question.
    std::set<int> possible;
    for (int k = 1; k < d; ++k) possible.insert(k);
    int primes_used = 0;
    for (long p = 2; primes_used < 30 && p < 2000; ++p) {
        if (!is_prime(p)) continue;
        ModPoly fp = mod_reduce(f, p);
        ModPoly g = poly_gcd(fp, poly_derivative(fp, p), p);
        if (g.size() > 1) continue;  // not squarefree mod p
        ++primes_used;
        const std::vector<int> pattern = distinct_degree_pattern(fp, p);
        if (pattern.size() == 1) return {"mod-p", p};
        const std::set<int> sums = subset_sums(pattern);
        std::set<int> kept;
        for (int k : possible) {
            if (sums.count(k) != 0) kept.insert(k);
        }
        possible = std::move(kept);
        if (possible.empty()) return {"degree-patterns", 0};
    }

    // Bounded search for a monic integer factor of each still-possible degree <= d/2.
    BigInt norm2_sq(0);
    for (const auto& c : f.coefficients()) norm2_sq += c * c;
    BigInt norm2 = sqrt(norm2_sq) + 1;
    long visited = 0;
    for (int k : possible) {
        if (2 * k > d) continue;
        std::vector<std::vector<BigInt>> ranges(static_cast<std::size_t>(k));
        {
            // Constant term must divide f(0).
            const BigInt f0 = abs(f[0]);
            const BigInt bound0 = std::min<BigInt>(f0, binomial(k, 0) * norm2);
            for (BigInt c = 1; c <= bound0; ++c) {
                if (mpz_divisible_p(f0.get_mpz_t(), c.get_mpz_t())) {
                    ranges[0].push_back(-c);
                    ranges[0].push_back(c);
                }
            }
        }
        for (int j = 1; j < k; ++j) ranges[static_cast<std::size_t>(j)] = symmetric_range(binomial(k, j) * norm2);
        std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
        if (ranges[0].empty()) continue;
        while (true) {
            if (++visited > search_budget) {
                throw Error(ErrorKind::IrreducibilityUndetermined, "factor search budget exhausted for " + f.str());
            }
            std::vector<BigInt> g(static_cast<std::size_t>(k + 1));
            for (int j = 0; j < k; ++j) g[static_cast<std::size_t>(j)] = ranges[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
            g[static_cast<std::size_t>(k)] = 1;
            IntPolynomial cand(std::move(g));
            if (cand.divides_into(f)) throw ReducibleError(cand, cand.str() + " divides " + f.str());
            std::size_t pos = 0;
            while (pos < idx.size()) {
                if (++idx[pos] < ranges[pos].size()) break;
                idx[pos] = 0;
                ++pos;
            }
            if (pos == idx.size()) break;
        }
    }
    return {"bounded-search", 0};
}

Rational NumberField::rational_base() const {
    if (degree() != 1) throw Error(ErrorKind::InvalidArgument, "rational_base on a field of degree > 1");
    return Rational(-min_poly_[0], min_poly_[1]);
}

FieldPtr construct_field(const IntPolynomial& min_poly, const RootSelector& selector) {
    if (min_poly.degree() < 1) throw Error(ErrorKind::InvalidArgument, "minimal polynomial must be nonconstant");
    IntPolynomial m = min_poly;
    if (m.leading() < 0) m = -m;
    IrreducibilityCertificate cert;
    if (m.degree() == 1) {
        const BigInt g = gcd(m[0], m[1]);
        if (g != 1) m = IntPolynomial(std::vector<BigInt>{BigInt(m[0] / g), BigInt(m[1] / g)});
        cert = {"linear", 0};
    } else {
        if (!m.is_monic()) throw Error(ErrorKind::NotMonic, "non-monic minimal polynomial " + m.str());
        cert = check_irreducible(m);
    }
    auto field = std::shared_ptr<NumberField>(new NumberField());
    field->min_poly_ = std::move(m);
    field->selector_ = selector;
    field->certificate_ = cert;
    return field;
}

}  // namespace betarep
