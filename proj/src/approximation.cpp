#include "betarep/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <unordered_set>

#include "betarep/dinterval.hpp"
#include "betarep/error.hpp"

namespace betarep {
namespace {

using Matrix = std::vector<std::vector<Real>>;

/// Gaussian elimination with partial pivoting at precision prec; false if singular.
bool solve_linear(Matrix a, std::vector<Real> b, std::vector<Real>& x, mpfr_prec_t prec) {
    const std::size_t n = b.size();
    Real t(prec);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (mpfr_cmpabs(a[r][col].get(), a[piv][col].get()) > 0) piv = r;
        }
        if (mpfr_zero_p(a[piv][col].get())) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            Real f(prec);
            mpfr_div(f.get(), a[r][col].get(), a[col][col].get(), MPFR_RNDN);
            for (std::size_t c = col; c < n; ++c) {
                mpfr_mul(t.get(), f.get(), a[col][c].get(), MPFR_RNDN);
                mpfr_sub(a[r][c].get(), a[r][c].get(), t.get(), MPFR_RNDN);
            }
            mpfr_mul(t.get(), f.get(), b[col].get(), MPFR_RNDN);
            mpfr_sub(b[r].get(), b[r].get(), t.get(), MPFR_RNDN);
        }
    }
    x.assign(n, Real(prec));
    for (std::size_t i = n; i-- > 0;) {
        Real s(prec);
        mpfr_set(s.get(), b[i].get(), MPFR_RNDN);
        for (std::size_t c = i + 1; c < n; ++c) {
            mpfr_mul(t.get(), a[i][c].get(), x[c].get(), MPFR_RNDN);
            mpfr_sub(s.get(), s.get(), t.get(), MPFR_RNDN);
        }
        mpfr_div(x[i].get(), s.get(), a[i][i].get(), MPFR_RNDN);
    }
    return true;
}

Real midpoint(const Interval& v, mpfr_prec_t prec) {
    Real m(prec);
    mpfr_add(m.get(), v.lo().get(), v.hi().get(), MPFR_RNDN);
    mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
    return m;
}

Rational round_to_denominator(const Real& v, const BigInt& q) {
    Real scaled(v.prec() + 64);
    mpfr_set(scaled.get(), v.get(), MPFR_RNDN);
    mpz_class qz = q;
    mpfr_mul_z(scaled.get(), scaled.get(), qz.get_mpz_t(), MPFR_RNDN);
    mpfr_round(scaled.get(), scaled.get());
    mpz_class num;
    mpfr_get_z(num.get_mpz_t(), scaled.get(), MPFR_RNDN);
    return Rational(num, q);
}

/// Certified |Phi(z)_p - t|.
Interval distance_at(const PlaceSystem& ps, const FieldElement& z, int place, const ComplexRational& t,
                     mpfr_prec_t bits) {
    const CInterval v = ps.embed(z, place, bits);
    const mpfr_prec_t w = v.prec();
    const CInterval d(v.re - Interval(t.re, w), v.im - Interval(t.im, w));
    if (ps.places()[static_cast<std::size_t>(place)].kind == PlaceKind::Real) return d.re.abs();
    return d.abs();
}

std::vector<int> archimedean_s_beta(const PlaceSystem& ps) {
    std::vector<int> out;
    for (int p : ps.s_beta()) {
        if (ps.places()[static_cast<std::size_t>(p)].archimedean()) out.push_back(p);
    }
    return out;
}

DInterval to_dinterval(const Interval& v) { return {v.lo_d(), v.hi_d()}; }

DInterval dint(const Rational& r) {
    const double d = r.to_double();
    return {DInterval::down(d), DInterval::up(d)};
}

/// Greedy 1-D covering of [-bound, bound] by [p - rho, p + rho] for enclosed centers [lo, hi].
/// Returns the point up to which coverage was certified (>= bound on success).
Rational cover_1d(std::vector<std::pair<Rational, Rational>> pts, const Rational& rho, const Rational& bound) {
    Rational cur = -bound;
    bool progress = true;
    while (cur < bound && progress) {
        progress = false;
        Rational best = cur;
        for (const auto& [lo, hi] : pts) {
            if (hi - rho <= cur && lo + rho > best) best = lo + rho;
        }
        if (best > cur) {
            cur = best;
            progress = true;
        }
    }
    return cur;
}

/// A point of [-bound_lo, bound_lo] certainly farther than rho from every center, if one is found.
std::optional<Rational> uncovered_1d(const std::vector<std::pair<Rational, Rational>>& pts, const Rational& rho,
                                     const Rational& bound_lo, const Rational& reached) {
    std::vector<Rational> candidates{-bound_lo, bound_lo, reached};
    for (const auto& [lo, hi] : pts) {
        candidates.push_back(lo - rho - Rational(1, 1 << 20));
        candidates.push_back(hi + rho + Rational(1, 1 << 20));
    }
    std::sort(candidates.begin(), candidates.end());
    for (const auto& y : candidates) {
        if (y < -bound_lo || y > bound_lo) continue;
        bool free = true;
        for (const auto& [lo, hi] : pts) {
            if (!(y < lo - rho || y > hi + rho)) {
                free = false;
                break;
            }
        }
        if (free) return y;
    }
    return std::nullopt;
}

Rational upper_rational(const Interval& v) { return v.hi().to_rational(); }
Rational lower_rational(const Interval& v) { return v.lo().to_rational(); }

/// Residue class of r in (1/p^e)Z_p / Z_p as an integer mod p^e; nullopt if r is not in (1/p^e)Z_p.
std::optional<BigInt> padic_class(const Rational& r, long p, int e) {
    if (!r.is_zero() && r.valuation(static_cast<unsigned long>(p)) < -e) return std::nullopt;
    BigInt pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    const Rational scaled = r * Rational(pe);
    BigInt num = scaled.numerator();
    BigInt den = scaled.denominator();
    BigInt inv;
    if (pe == 1) return BigInt(0);
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pe.get_mpz_t());
    BigInt cls = (num * inv) % pe;
    if (cls < 0) cls += pe;
    return cls;
}

int padic_exponent(const PlaceSystem& ps, long p) {
    return Rational(ps.field()->rational_base().denominator()).valuation(static_cast<unsigned long>(p));
}

struct Box {
    std::vector<DInterval> dims;  // one per real coordinate
};

/// Subdivision check that the disk |y| <= radius is covered by disks |y - b| <= rho.
CoverVerdict cover_disk(const std::vector<std::pair<DInterval, DInterval>>& centers, double radius_hi,
                        double radius_lo, double rho, const CoverOptions& opt, std::string& detail) {
    std::deque<std::array<DInterval, 2>> queue;
    const int split = std::max(1, opt.refine);
    const double w = 2.0 * radius_hi / split;
    for (int i = 0; i < split; ++i) {
        for (int j = 0; j < split; ++j) {
            queue.push_back({DInterval{-radius_hi + i * w, -radius_hi + (i + 1) * w},
                             DInterval{-radius_hi + j * w, -radius_hi + (j + 1) * w}});
        }
    }
    long cells = 0;
    while (!queue.empty()) {
        if (++cells > opt.max_cells) {
            detail = "subdivision budget exhausted";
            return CoverVerdict::Indeterminate;
        }
        const auto cell = queue.front();
        queue.pop_front();
        const DInterval nx = cell[0].abs();
        const DInterval ny = cell[1].abs();
        const DInterval near = nx.sqr() + ny.sqr();
        if (near.lo > radius_hi * radius_hi) continue;
        bool covered = false;
        for (const auto& [bx, by] : centers) {
            const double fx = std::max(DInterval::up(cell[0].hi - bx.lo), DInterval::up(bx.hi - cell[0].lo));
            const double fy = std::max(DInterval::up(cell[1].hi - by.lo), DInterval::up(by.hi - cell[1].lo));
            const DInterval far = DInterval::point(fx).sqr() + DInterval::point(fy).sqr();
            if (far.hi <= rho * rho) {
                covered = true;
                break;
            }
        }
        if (covered) continue;
        const double cx = cell[0].mid();
        const double cy = cell[1].mid();
        const DInterval cn = DInterval::point(cx).sqr() + DInterval::point(cy).sqr();
        if (cn.hi <= radius_lo * radius_lo) {
            bool free = true;
            for (const auto& [bx, by] : centers) {
                const DInterval d = (DInterval::point(cx) - bx).sqr() + (DInterval::point(cy) - by).sqr();
                if (d.lo <= rho * rho) {
                    free = false;
                    break;
                }
            }
            if (free) {
                detail = "uncovered point (" + std::to_string(cx) + ", " + std::to_string(cy) + ")";
                return CoverVerdict::Refuted;
            }
        }
        if (cell[0].hi - cell[0].lo < 1e-9) {
            detail = "subdivision reached minimal cell size";
            return CoverVerdict::Indeterminate;
        }
        const double mx = cell[0].mid();
        const double my = cell[1].mid();
        queue.push_back({DInterval{cell[0].lo, mx}, DInterval{cell[1].lo, my}});
        queue.push_back({DInterval{mx, cell[0].hi}, DInterval{cell[1].lo, my}});
        queue.push_back({DInterval{cell[0].lo, mx}, DInterval{my, cell[1].hi}});
        queue.push_back({DInterval{mx, cell[0].hi}, DInterval{my, cell[1].hi}});
    }
    return CoverVerdict::Certified;
}

/// For every m >= 1: B_m(0) covered by B_{m-delta}(b) over b in cover (cover contains 0).
/// Nonzero points b cover the directions within arccos(c_b) of arg b, where c_b makes both
/// |m e^{it} - b| <= m - delta and |(m - delta) e^{it} - b| <= m - delta hold at m = 1;
/// both inequalities only get easier as m grows.
bool cover_unit_place(const std::vector<ComplexRational>& cover, const Rational& delta, std::string& detail) {
    const bool has_zero = std::any_of(cover.begin(), cover.end(),
                                      [](const ComplexRational& b) { return b.re.is_zero() && b.im.is_zero(); });
    if (!has_zero) {
        detail = "unit-circle cover lacks 0";
        return false;
    }
    const mpfr_prec_t prec = 128;
    std::vector<std::pair<double, double>> arcs;
    for (const auto& b : cover) {
        const Rational r2 = b.re * b.re + b.im * b.im;
        if (r2.is_zero() || r2 <= delta * delta) continue;
        const Interval r = Interval(r2, prec).sqrt();
        const Interval d(delta, prec);
        const Interval c1 = (Interval(r2, prec) - d.sqr() + d * Interval(2L, prec)) / (r * Interval(2L, prec));
        const Interval c2 = r / (Interval(2L, prec) * (Interval(1L, prec) - d));
        const Interval c = max(c1, c2);
        if (mpfr_cmp_ui(c.hi().get(), 1) >= 0) continue;
        Real w(prec);
        mpfr_acos(w.get(), c.hi().get(), MPFR_RNDD);
        Real y(prec);
        Real x(prec);
        mpfr_set_q(y.get(), b.im.get().get_mpq_t(), MPFR_RNDN);
        mpfr_set_q(x.get(), b.re.get().get_mpq_t(), MPFR_RNDN);
        Real lo(prec);
        Real hi(prec);
        mpfr_atan2(lo.get(), y.get(), x.get(), MPFR_RNDD);
        mpfr_atan2(hi.get(), y.get(), x.get(), MPFR_RNDU);
        const double slop = 1e-15;
        const double start = mpfr_get_d(hi.get(), MPFR_RNDU) - mpfr_get_d(w.get(), MPFR_RNDD) + slop;
        const double end = mpfr_get_d(lo.get(), MPFR_RNDD) + mpfr_get_d(w.get(), MPFR_RNDD) - slop;
        if (start < end) {
            for (int k = -1; k <= 1; ++k) arcs.emplace_back(start + 2 * M_PI * k, end + 2 * M_PI * k);
        }
    }
    // Cover [-4, 4] on the angle line, which contains a full period.
    double cur = -4.0;
    bool progress = true;
    while (cur < 4.0 && progress) {
        progress = false;
        double best = cur;
        for (const auto& [s, e] : arcs) {
            if (s <= cur && e > best) best = e;
        }
        if (best > cur) {
            cur = best;
            progress = true;
        }
    }
    if (cur < 4.0) {
        detail = "unit-circle cover leaves a direction uncovered near angle " + std::to_string(cur);
        return false;
    }
    return true;
}

/// Per-place cover checks for one group of tags that share their finite-place residues.
CoverVerdict check_archimedean_covers(const PlaceSystem& ps, const std::vector<std::vector<ComplexRational>>& group,
                                      const Rational& delta, const CoverOptions& opt,
                                      std::vector<std::vector<ComplexRational>>& place_covers, std::string& detail) {
    const auto& sb = ps.s_beta();
    const Rational rho = Rational(1) - delta;
    const mpfr_prec_t bits = ps.precision().start_bits;
    std::vector<std::size_t> arch;
    for (std::size_t k = 0; k < sb.size(); ++k) {
        if (ps.places()[static_cast<std::size_t>(sb[k])].archimedean()) arch.push_back(k);
    }
    place_covers.assign(sb.size(), {});
    std::set<std::vector<std::pair<Rational, Rational>>> seen;
    for (const auto& tag : group) {
        std::vector<std::pair<Rational, Rational>> key;
        for (std::size_t k = 0; k < sb.size(); ++k) {
            auto& cov = place_covers[k];
            if (std::find(cov.begin(), cov.end(), tag[k]) == cov.end()) cov.push_back(tag[k]);
        }
        for (std::size_t k : arch) key.emplace_back(tag[k].re, tag[k].im);
        seen.insert(key);
    }
    std::size_t product = 1;
    for (std::size_t k : arch) product *= place_covers[k].size();
    if (seen.size() != product) {
        detail = "tags do not form a full cartesian product of the per-place covers";
        return CoverVerdict::Refuted;
    }
    bool indeterminate = false;
    for (std::size_t k : arch) {
        const Place& p = ps.places()[static_cast<std::size_t>(sb[k])];
        const auto& cov = place_covers[k];
        if (p.modulus_class == ModulusClass::Unit) {
            if (!cover_unit_place(cov, delta, detail)) return CoverVerdict::Refuted;
            continue;
        }
        const Interval babs = ps.beta_abs(sb[k], bits);
        if (p.kind == PlaceKind::Real) {
            std::vector<std::pair<Rational, Rational>> pts;
            for (const auto& t : cov) pts.emplace_back(t.re, t.re);
            const Rational reached = cover_1d(pts, rho, upper_rational(babs));
            if (reached < upper_rational(babs)) {
                const auto y = uncovered_1d(pts, rho, lower_rational(babs), reached);
                detail = y ? "uncovered point " + y->str() : "1-D cover undecided";
                return y ? CoverVerdict::Refuted : CoverVerdict::Indeterminate;
            }
            continue;
        }
        std::vector<std::pair<DInterval, DInterval>> centers;
        for (const auto& t : cov) centers.emplace_back(dint(t.re), dint(t.im));
        const CoverVerdict v = cover_disk(centers, babs.hi_d(), babs.lo_d(), dint(rho).lo, opt, detail);
        if (v == CoverVerdict::Refuted) return v;
        if (v == CoverVerdict::Indeterminate) indeterminate = true;
    }
    return indeterminate ? CoverVerdict::Indeterminate : CoverVerdict::Certified;
}

CoverCertificate validate_tagged(const PlaceSystem& ps, const Alphabet& alphabet, const Rational& delta,
                                 const CoverOptions& opt) {
    CoverCertificate cert;
    cert.delta = delta;
    const auto& sb = ps.s_beta();
    const mpfr_prec_t bits = ps.precision().start_bits;
    if (!(alphabet.epsilon < delta || alphabet.epsilon.is_zero())) {
        cert.detail = "digit error epsilon must be below the overlap delta";
        return cert;
    }
    // Tag errors; finite places need the digit in the residue class of its tag.
    for (std::size_t i = 0; i < alphabet.digits.size(); ++i) {
        for (std::size_t k = 0; k < sb.size(); ++k) {
            const Place& p = ps.places()[static_cast<std::size_t>(sb[k])];
            const ComplexRational& t = alphabet.tags[i][k];
            if (!p.archimedean()) {
                const Rational diff = alphabet.digits[i].rational_value() - t.re;
                if (!diff.is_zero() && diff.valuation(static_cast<unsigned long>(p.prime)) < 0) {
                    cert.verdict = CoverVerdict::Refuted;
                    cert.detail = "digit not in the residue class of its tag";
                    return cert;
                }
                continue;
            }
            const Interval err = distance_at(ps, alphabet.digits[i], sb[k], t, bits);
            if (!certainly_less_equal(err, Interval(alphabet.epsilon, err.prec()))) {
                cert.detail = "tag error not certified below epsilon";
                return cert;
            }
        }
    }
    // Group by residue classes at the finite places; every class must occur.
    std::map<std::vector<BigInt>, std::vector<std::vector<ComplexRational>>> groups;
    BigInt classes = 1;
    for (int p : sb) {
        const Place& pl = ps.places()[static_cast<std::size_t>(p)];
        if (pl.archimedean()) continue;
        BigInt pe;
        mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(pl.prime),
                      static_cast<unsigned long>(padic_exponent(ps, pl.prime)));
        classes *= pe;
    }
    for (const auto& tag : alphabet.tags) {
        std::vector<BigInt> key;
        for (std::size_t k = 0; k < sb.size(); ++k) {
            const Place& pl = ps.places()[static_cast<std::size_t>(sb[k])];
            if (pl.archimedean()) continue;
            const auto cls = padic_class(tag[k].re, pl.prime, padic_exponent(ps, pl.prime));
            if (!cls) {
                cert.verdict = CoverVerdict::Refuted;
                cert.detail = "finite-place tag outside the image of beta*D";
                return cert;
            }
            key.push_back(*cls);
        }
        groups[key].push_back(tag);
    }
    if (BigInt(static_cast<unsigned long>(groups.size())) != classes) {
        cert.verdict = CoverVerdict::Refuted;
        cert.detail = "residue classes of the base denominator incomplete";
        return cert;
    }
    bool indeterminate = false;
    for (const auto& [key, group] : groups) {
        std::vector<std::vector<ComplexRational>> covers;
        std::string detail;
        const CoverVerdict v = check_archimedean_covers(ps, group, delta, opt, covers, detail);
        if (cert.place_covers.empty()) cert.place_covers.assign(sb.size(), {});
        for (std::size_t k = 0; k < sb.size(); ++k) {
            for (const auto& c : covers[k]) {
                auto& dst = cert.place_covers[k];
                if (std::find(dst.begin(), dst.end(), c) == dst.end()) dst.push_back(c);
            }
        }
        if (v == CoverVerdict::Refuted) {
            cert.verdict = v;
            cert.detail = detail;
            return cert;
        }
        if (v == CoverVerdict::Indeterminate) {
            indeterminate = true;
            cert.detail = detail;
        }
    }
    cert.verdict = indeterminate ? CoverVerdict::Indeterminate : CoverVerdict::Certified;
    return cert;
}

/// Joint subdivision over the product of S_beta balls at m = 1.
CoverVerdict cover_joint(const PlaceSystem& ps, const Alphabet& alphabet, const Rational& delta,
                         const CoverOptions& opt, std::string& detail) {
    const mpfr_prec_t bits = ps.precision().start_bits;
    const auto& sb = ps.s_beta();
    const double rho = dint(Rational(1) - delta).lo;
    struct Coord {
        int place;
        bool complex;
        double radius_hi;
        double radius_lo;
        std::size_t dim;
    };
    std::vector<Coord> coords;
    std::size_t dims = 0;
    for (int p : sb) {
        const Place& pl = ps.places()[static_cast<std::size_t>(p)];
        const Interval r = pl.modulus_class == ModulusClass::Unit ? Interval(1L, bits) : ps.beta_abs(p, bits);
        coords.push_back({p, pl.kind == PlaceKind::Complex, r.hi_d(), r.lo_d(), dims});
        dims += pl.kind == PlaceKind::Complex ? 2 : 1;
    }
    // Digit embeddings per coordinate.
    std::vector<std::vector<DInterval>> emb(alphabet.digits.size(), std::vector<DInterval>(dims));
    for (std::size_t i = 0; i < alphabet.digits.size(); ++i) {
        for (const auto& c : coords) {
            const CInterval v = ps.embed(alphabet.digits[i], c.place, bits);
            emb[i][c.dim] = to_dinterval(v.re);
            if (c.complex) emb[i][c.dim + 1] = to_dinterval(v.im);
        }
    }
    std::deque<std::vector<DInterval>> queue;
    std::vector<DInterval> root(dims);
    for (const auto& c : coords) {
        root[c.dim] = {-c.radius_hi, c.radius_hi};
        if (c.complex) root[c.dim + 1] = {-c.radius_hi, c.radius_hi};
    }
    queue.push_back(root);
    for (int r = 1; r < opt.refine; r *= 2) {
        std::deque<std::vector<DInterval>> next;
        for (const auto& cell : queue) {
            std::vector<std::vector<DInterval>> parts{cell};
            for (std::size_t k = 0; k < dims; ++k) {
                std::vector<std::vector<DInterval>> split;
                for (auto part : parts) {
                    const double m = part[k].mid();
                    auto a = part;
                    a[k].hi = m;
                    part[k].lo = m;
                    split.push_back(a);
                    split.push_back(part);
                }
                parts = std::move(split);
            }
            for (auto& p : parts) next.push_back(std::move(p));
        }
        queue = std::move(next);
    }
    long cells = 0;
    while (!queue.empty()) {
        if (++cells > opt.max_cells) {
            detail = "joint subdivision budget exhausted";
            return CoverVerdict::Indeterminate;
        }
        auto cell = queue.front();
        queue.pop_front();
        bool outside = false;
        for (const auto& c : coords) {
            if (!c.complex) continue;
            const DInterval n2 = cell[c.dim].abs().sqr() + cell[c.dim + 1].abs().sqr();
            if (n2.lo > c.radius_hi * c.radius_hi) outside = true;
        }
        if (outside) continue;
        bool covered = false;
        for (const auto& e : emb) {
            bool ok = true;
            for (const auto& c : coords) {
                const double fx = std::max(DInterval::up(cell[c.dim].hi - e[c.dim].lo), DInterval::up(e[c.dim].hi - cell[c.dim].lo));
                if (!c.complex) {
                    ok = fx <= rho;
                } else {
                    const double fy = std::max(DInterval::up(cell[c.dim + 1].hi - e[c.dim + 1].lo),
                                               DInterval::up(e[c.dim + 1].hi - cell[c.dim + 1].lo));
                    ok = (DInterval::point(fx).sqr() + DInterval::point(fy).sqr()).hi <= rho * rho;
                }
                if (!ok) break;
            }
            if (ok) {
                covered = true;
                break;
            }
        }
        if (covered) continue;
        // Center test for a refutation witness.
        std::vector<double> mid(dims);
        for (std::size_t k = 0; k < dims; ++k) mid[k] = cell[k].mid();
        bool inside = true;
        for (const auto& c : coords) {
            if (!c.complex) {
                inside = inside && std::fabs(mid[c.dim]) <= c.radius_lo;
            } else {
                const DInterval n2 = DInterval::point(mid[c.dim]).sqr() + DInterval::point(mid[c.dim + 1]).sqr();
                inside = inside && n2.hi <= c.radius_lo * c.radius_lo;
            }
        }
        if (inside) {
            bool free = true;
            for (const auto& e : emb) {
                bool far = false;
                for (const auto& c : coords) {
                    if (!c.complex) {
                        const DInterval d = (DInterval::point(mid[c.dim]) - e[c.dim]).abs();
                        far = far || d.lo > rho;
                    } else {
                        const DInterval d2 = (DInterval::point(mid[c.dim]) - e[c.dim]).sqr() +
                                             (DInterval::point(mid[c.dim + 1]) - e[c.dim + 1]).sqr();
                        far = far || d2.lo > rho * rho;
                    }
                }
                if (!far) {
                    free = false;
                    break;
                }
            }
            if (free) {
                detail = "uncovered point at cell center";
                return CoverVerdict::Refuted;
            }
        }
        std::size_t widest = 0;
        for (std::size_t k = 1; k < dims; ++k) {
            if (cell[k].hi - cell[k].lo > cell[widest].hi - cell[widest].lo) widest = k;
        }
        if (cell[widest].hi - cell[widest].lo < 1e-9) {
            detail = "joint subdivision reached minimal cell size";
            return CoverVerdict::Indeterminate;
        }
        const double m = cell[widest].mid();
        auto left = cell;
        left[widest].hi = m;
        cell[widest].lo = m;
        queue.push_back(std::move(left));
        queue.push_back(std::move(cell));
    }
    return CoverVerdict::Certified;
}

CoverCertificate validate_untagged(const PlaceSystem& ps, const Alphabet& alphabet, const Rational& delta,
                                   const CoverOptions& opt) {
    CoverCertificate cert;
    cert.delta = delta;
    const Rational rho = Rational(1) - delta;
    const mpfr_prec_t bits = ps.precision().start_bits;
    if (!ps.unit_places().empty()) cert.m_validated = Rational(1);
    if (ps.field()->degree() == 1) {
        // One real place, possibly with finite places: group digits by residue class.
        std::vector<long> primes;
        for (const auto& p : ps.places()) {
            if (!p.archimedean()) primes.push_back(p.prime);
        }
        std::map<std::vector<BigInt>, std::vector<std::pair<Rational, Rational>>> classes;
        for (const auto& a : alphabet.digits) {
            std::vector<BigInt> key;
            bool usable = true;
            for (long p : primes) {
                const auto cls = padic_class(a.rational_value(), p, padic_exponent(ps, p));
                if (!cls) usable = false;
                else key.push_back(*cls);
            }
            if (usable) classes[key].emplace_back(a.rational_value(), a.rational_value());
        }
        const BigInt t = ps.field()->rational_base().denominator();
        if (BigInt(static_cast<unsigned long>(classes.size())) != t) {
            cert.verdict = CoverVerdict::Refuted;
            cert.detail = "digits miss a residue class of the base denominator";
            return cert;
        }
        const Rational bound = ps.field()->rational_base().abs();
        for (const auto& [key, pts] : classes) {
            const Rational reached = cover_1d(pts, rho, bound);
            if (reached < bound) {
                const auto y = uncovered_1d(pts, rho, bound, reached);
                cert.verdict = y ? CoverVerdict::Refuted : CoverVerdict::Indeterminate;
                cert.detail = y ? "uncovered point " + y->str() : "1-D cover undecided";
                return cert;
            }
        }
        cert.verdict = CoverVerdict::Certified;
        return cert;
    }
    const auto& sb = ps.s_beta();
    if (sb.size() == 1 && ps.places()[static_cast<std::size_t>(sb[0])].kind == PlaceKind::Real) {
        const Interval babs = ps.beta_abs(sb[0], bits);
        std::vector<std::pair<Rational, Rational>> pts;
        for (const auto& a : alphabet.digits) {
            const Interval v = ps.embed(a, sb[0], bits).re;
            pts.emplace_back(v.lo().to_rational(), v.hi().to_rational());
        }
        const Rational reached = cover_1d(pts, rho, upper_rational(babs));
        if (reached >= upper_rational(babs)) {
            cert.verdict = CoverVerdict::Certified;
            return cert;
        }
        const auto y = uncovered_1d(pts, rho, lower_rational(babs), reached);
        cert.verdict = y ? CoverVerdict::Refuted : CoverVerdict::Indeterminate;
        cert.detail = y ? "uncovered point " + y->str() : "1-D cover undecided";
        return cert;
    }
    std::string detail;
    cert.verdict = cover_joint(ps, alphabet, delta, opt, detail);
    cert.detail = detail;
    return cert;
}

}  // namespace

Alphabet::Alphabet(std::vector<FieldElement> d, Rational eps, std::vector<std::vector<ComplexRational>> t)
    : digits(std::move(d)), epsilon(std::move(eps)), tags(std::move(t)) {
    if (digits.empty()) throw Error(ErrorKind::InvalidArgument, "alphabet must not be empty");
    if (epsilon.sign() < 0) throw Error(ErrorKind::InvalidArgument, "epsilon must be nonnegative");
    std::unordered_set<FieldElement> seen;
    for (const auto& a : digits) {
        if (!same_field(*a.field(), *digits.front().field())) throw Error(ErrorKind::FieldMismatch, "digits from different fields");
        if (!seen.insert(a).second) throw Error(ErrorKind::InvalidArgument, "duplicate digit " + a.str());
    }
    if (!tags.empty() && tags.size() != digits.size()) throw Error(ErrorKind::InvalidArgument, "one tag vector per digit expected");
}

Alphabet Alphabet::integer_range(const FieldPtr& field, long lo, long hi) {
    if (lo > hi) throw Error(ErrorKind::InvalidArgument, "empty digit range");
    std::vector<FieldElement> d;
    for (long a = lo; a <= hi; ++a) d.push_back(FieldElement::from_rational(field, Rational(a)));
    return Alphabet(std::move(d));
}

BigInt Alphabet::denominator() const {
    BigInt l = 1;
    for (const auto& a : digits) l = lcm(l, a.denominator_bound());
    return l;
}

int Alphabet::index_of(const FieldElement& a) const {
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] == a) return static_cast<int>(i);
    }
    return -1;
}

const char* to_string(CoverVerdict v) noexcept {
    switch (v) {
        case CoverVerdict::Certified: return "certified";
        case CoverVerdict::Indeterminate: return "indeterminate";
        case CoverVerdict::Refuted: return "refuted";
    }
    return "?";
}

FieldElement weak_approximate(const PlaceSystem& ps, const std::vector<ComplexRational>& targets, const Rational& eps,
                              const BigInt& denom_cap) {
    if (eps.sign() <= 0) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
    const std::vector<int> sb = archimedean_s_beta(ps);
    if (targets.size() != sb.size()) throw Error(ErrorKind::InvalidArgument, "one target per archimedean place of S_beta expected");
    for (std::size_t k = 0; k < sb.size(); ++k) {
        if (ps.places()[static_cast<std::size_t>(sb[k])].kind == PlaceKind::Real && !targets[k].im.is_zero()) {
            throw Error(ErrorKind::InvalidArgument, "target at a real place must be real");
        }
    }
    const FieldPtr& field = ps.field();
    const bool constant = std::all_of(targets.begin(), targets.end(), [&](const ComplexRational& t) {
        return t.im.is_zero() && t.re == targets.front().re;
    });
    if (constant) return FieldElement::from_rational(field, targets.front().re);

    const int d = ps.degree();
    std::vector<ComplexRational> all(ps.places().size(), ComplexRational{Rational(0), Rational(0)});
    for (std::size_t k = 0; k < sb.size(); ++k) all[static_cast<std::size_t>(sb[k])] = targets[k];

    for (mpfr_prec_t bits = ps.precision().start_bits;; bits = ps.next_bits(bits)) {
        const RootTable& t = ps.table(bits);
        const mpfr_prec_t w = t.bits + 32;
        Matrix a;
        std::vector<Real> rhs;
        double power_sum = 0.0;
        for (std::size_t p = 0; p < ps.places().size(); ++p) {
            const Place& pl = ps.places()[p];
            if (!pl.archimedean()) continue;
            const auto& pw = t.powers[static_cast<std::size_t>(pl.root)];
            std::vector<Real> row_re;
            std::vector<Real> row_im;
            double ps_sum = 0.0;
            for (int k = 0; k < d; ++k) {
                row_re.push_back(midpoint(pw[static_cast<std::size_t>(k)].re, w));
                row_im.push_back(midpoint(pw[static_cast<std::size_t>(k)].im, w));
                ps_sum += pw[static_cast<std::size_t>(k)].abs().hi_d();
            }
            power_sum = std::max(power_sum, ps_sum);
            Real tre(w);
            mpfr_set_q(tre.get(), all[p].re.get().get_mpq_t(), MPFR_RNDN);
            a.push_back(std::move(row_re));
            rhs.push_back(std::move(tre));
            if (pl.kind == PlaceKind::Complex) {
                Real tim(w);
                mpfr_set_q(tim.get(), all[p].im.get().get_mpq_t(), MPFR_RNDN);
                a.push_back(std::move(row_im));
                rhs.push_back(std::move(tim));
            }
        }
        std::vector<Real> c;
        if (!solve_linear(a, rhs, c, w)) continue;
        for (BigInt q = 1; q <= denom_cap; q *= 2) {
            std::vector<Rational> coeffs;
            for (const auto& ck : c) coeffs.push_back(round_to_denominator(ck, q));
            FieldElement z(field, coeffs);
            bool ok = true;
            for (std::size_t k = 0; k < sb.size() && ok; ++k) {
                const Interval err = distance_at(ps, z, sb[k], targets[k], bits);
                ok = certainly_less(err, Interval(eps, err.prec()));
            }
            if (ok) return z;
        }
        // Rounding at the cap would have sufficed, so the solve itself was too coarse.
        if (power_sum / (2.0 * mpz_get_d(denom_cap.get_mpz_t())) >= eps.to_double() / 4) {
            throw Error(ErrorKind::DenominatorCapExceeded, "no approximation with denominator <= " + denom_cap.get_str());
        }
    }
}

long complex_pisot_bound(const PlaceSystem& ps) {
    const NumberField& k = *ps.field();
    auto from_exact = [](const Rational& v) {
        // smallest M >= 0 with 2M + 1 > v
        const Rational half = (v - Rational(1)) / Rational(2);
        const BigInt m = half.floor() + 1;
        return std::max<long>(0, m.get_si());
    };
    if (k.degree() == 1) {
        const Rational b = k.rational_base().abs();
        return from_exact(b * b + Rational(2) * b);
    }
    const RootBall& beta = ps.roots()[static_cast<std::size_t>(ps.distinguished_root())];
    if (k.degree() == 2 && !beta.is_real) {
        const Rational norm(k.min_poly()[0]);
        const Rational trace(BigInt(-k.min_poly()[1]));
        return from_exact(norm + trace.abs());
    }
    for (mpfr_prec_t bits = ps.precision().start_bits;; bits = ps.next_bits(bits)) {
        const RootBall& b = ps.table(bits).balls[static_cast<std::size_t>(ps.distinguished_root())];
        const CInterval z = b.enclosure();
        const Interval v = z.norm_sq() + (z.re * Interval(2L, z.prec())).abs();
        const long m = from_exact(v.hi().to_rational());
        // m is minimal once 2(m-1)+1 <= v is certain.
        if (m == 0 || certainly_less_equal(Interval(2 * m - 1, v.prec()), v)) return m;
    }
}

Alphabet suggest_alphabet(const PlaceSystem& ps, const AlphabetRequest& request) {
    const FieldPtr& field = ps.field();
    if (request.mode == AlphabetMode::IntegerRange) {
        if (request.range < 0) throw Error(ErrorKind::InvalidArgument, "range must be nonnegative");
        return Alphabet::integer_range(field, -request.range, request.range);
    }
    if (request.mode == AlphabetMode::ComplexPisotBound) {
        const long m = complex_pisot_bound(ps);
        return Alphabet::integer_range(field, -m, m);
    }
    const Rational& delta = request.delta;
    if (delta.sign() <= 0 || delta >= Rational(1, 4)) {
        throw Error(ErrorKind::InvalidArgument, "guaranteed mode needs 0 < delta < 1/4");
    }
    const mpfr_prec_t bits = ps.precision().start_bits;
    const auto& sb = ps.s_beta();

    if (field->rational_mode()) {
        // Field is Q: digits k/t + n exactly, one residue class per k, spacing 1 at the real place.
        const Rational beta = field->rational_base();
        const BigInt t = beta.denominator();
        const Rational reach = beta.abs() + Rational(1, 2);
        std::vector<FieldElement> digits;
        std::vector<std::vector<ComplexRational>> tags;
        for (BigInt k = 0; k < t; ++k) {
            const Rational r(k, t);
            for (BigInt n = (-reach - r).ceil(); Rational(n) + r <= reach; ++n) {
                const Rational b = Rational(n) + r;
                digits.push_back(FieldElement::from_rational(field, b));
                std::vector<ComplexRational> tag;
                for (int p : sb) {
                    tag.push_back(ps.places()[static_cast<std::size_t>(p)].archimedean() ? ComplexRational{b, Rational(0)}
                                                                                        : ComplexRational{r, Rational(0)});
                }
                tags.push_back(std::move(tag));
            }
        }
        return Alphabet(std::move(digits), Rational(0), std::move(tags));
    }

    std::vector<std::vector<ComplexRational>> covers;
    for (int p : sb) {
        const Place& pl = ps.places()[static_cast<std::size_t>(p)];
        std::vector<ComplexRational> cov;
        if (pl.modulus_class == ModulusClass::Unit) {
            const Rational h(1, 2);
            cov = {{Rational(0), Rational(0)}, {h, Rational(0)}, {-h, Rational(0)}, {Rational(0), h}, {Rational(0), -h}};
        } else if (pl.kind == PlaceKind::Real) {
            const Interval babs = ps.beta_abs(p, bits);
            const BigInt kmax = (babs.hi().to_rational() - (Rational(1) - delta)).ceil();
            for (BigInt b = -kmax; b <= kmax; ++b) cov.push_back({Rational(b), Rational(0)});
        } else {
            const double reach = DInterval::up(ps.beta_abs(p, bits).hi_d() + 0.70711);
            const long lim = static_cast<long>(std::ceil(reach));
            for (long x = -lim; x <= lim; ++x) {
                for (long y = -lim; y <= lim; ++y) {
                    if (static_cast<double>(x * x + y * y) <= reach * reach) cov.push_back({Rational(x), Rational(y)});
                }
            }
        }
        covers.push_back(std::move(cov));
    }
    const Rational eps = delta / Rational(2);
    std::vector<FieldElement> digits;
    std::vector<std::vector<ComplexRational>> tags;
    std::vector<std::size_t> idx(covers.size(), 0);
    while (true) {
        std::vector<ComplexRational> tag;
        for (std::size_t k = 0; k < covers.size(); ++k) tag.push_back(covers[k][idx[k]]);
        digits.push_back(weak_approximate(ps, tag, eps));
        tags.push_back(std::move(tag));
        std::size_t k = 0;
        while (k < covers.size() && ++idx[k] == covers[k].size()) idx[k++] = 0;
        if (k == covers.size()) break;
    }
    return Alphabet(std::move(digits), eps, std::move(tags));
}

CoverCertificate validate_cover(const PlaceSystem& ps, const Alphabet& alphabet, const Rational& delta,
                                const CoverOptions& options) {
    if (delta.sign() < 0 || delta >= Rational(1)) throw Error(ErrorKind::InvalidArgument, "delta must lie in [0, 1)");
    if (alphabet.tagged()) {
        for (const auto& t : alphabet.tags) {
            if (t.size() != ps.s_beta().size()) throw Error(ErrorKind::InvalidArgument, "tag length must match S_beta");
        }
        return validate_tagged(ps, alphabet, delta, options);
    }
    return validate_untagged(ps, alphabet, delta, options);
}

}  // namespace betarep
