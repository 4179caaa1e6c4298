#include "betarep/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "betarep/attractor.hpp"
#include "betarep/error.hpp"

namespace betarep {
namespace {

struct Overflow {};

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
}

DInterval to_d(const Interval& v) { return {v.lo_d(), v.hi_d()}; }

DInterval exact_d(std::int64_t v) {
    const double d = static_cast<double>(v);
    if (std::fabs(d) < 9007199254740992.0) return DInterval::point(d);
    return {DInterval::down(d), DInterval::up(d)};
}

DInterval exact_d(const Rational& r) {
    const double d = r.to_double();
    if (Rational(mpq_class(d)) == r) return DInterval::point(d);
    return {DInterval::down(d), DInterval::up(d)};
}

std::vector<int> archimedean_places(const PlaceSystem& ps) {
    std::vector<int> out;
    for (int p : ps.s_beta()) {
        if (ps.places()[static_cast<std::size_t>(p)].archimedean()) out.push_back(p);
    }
    return out;
}

/// Coordinates of sum c_k beta^k / D at each coordinate place.
struct CoordMap {
    std::vector<int> places;
    std::vector<int> offsets;
    std::vector<bool> complex;
    int dims = 0;
    std::vector<std::vector<DInterval>> pow_re;
    std::vector<std::vector<DInterval>> pow_im;
    DInterval inv_scale = DInterval::point(1.0);

    CoordMap(const PlaceSystem& ps, const BigInt& scale) {
        places = archimedean_places(ps);
        const RootTable& t = ps.table(ps.precision().start_bits);
        for (int p : places) {
            const Place& pl = ps.places()[static_cast<std::size_t>(p)];
            offsets.push_back(dims);
            complex.push_back(pl.kind == PlaceKind::Complex);
            dims += pl.kind == PlaceKind::Complex ? 2 : 1;
            std::vector<DInterval> re;
            std::vector<DInterval> im;
            if (ps.field()->degree() == 1) {
                re.push_back(DInterval::point(1.0));
                im.push_back(DInterval::point(0.0));
            } else {
                for (const auto& c : t.powers[static_cast<std::size_t>(pl.root)]) {
                    re.push_back(to_d(c.re));
                    im.push_back(to_d(c.im));
                }
            }
            pow_re.push_back(std::move(re));
            pow_im.push_back(std::move(im));
        }
        const Interval inv = Interval(1L, 128) / Interval(Rational(scale), 128);
        inv_scale = to_d(inv);
    }

    void fill(const std::int64_t* c, int d, DInterval* out) const {
        for (std::size_t k = 0; k < places.size(); ++k) {
            DInterval re = DInterval::point(0.0);
            DInterval im = DInterval::point(0.0);
            for (int j = 0; j < d; ++j) {
                if (c[j] == 0) continue;
                const DInterval cj = exact_d(c[j]);
                re = re + cj * pow_re[k][static_cast<std::size_t>(j)];
                if (complex[k]) im = im + cj * pow_im[k][static_cast<std::size_t>(j)];
            }
            out[offsets[k]] = re * inv_scale;
            if (complex[k]) out[offsets[k] + 1] = im * inv_scale;
        }
    }
};

void fill_generic(const PlaceSystem& ps, const CoordMap& map, const FieldElement& x, DInterval* out) {
    for (std::size_t k = 0; k < map.places.size(); ++k) {
        if (x.is_rational()) {
            out[map.offsets[k]] = exact_d(x.rational_value());
            if (map.complex[k]) out[map.offsets[k] + 1] = DInterval::point(0.0);
            continue;
        }
        const CInterval v = ps.embed(x, map.places[k], ps.precision().start_bits);
        out[map.offsets[k]] = to_d(v.re);
        if (map.complex[k]) out[map.offsets[k] + 1] = to_d(v.im);
    }
}

/// Lower bound of |x|_p from coordinates.
double place_abs_lo(const DInterval* c, const CoordMap& map, std::size_t k) {
    if (!map.complex[k]) return c[map.offsets[k]].abs().lo;
    const DInterval n2 = c[map.offsets[k]].sqr() + c[map.offsets[k] + 1].sqr();
    return n2.sqrt().lo;
}

/// Threshold on |x_k|_p after which no continuation with `remaining` further digits
/// can land within the window: |beta^r x + tail| >= |beta|^r |x| - max|a| (|beta|^r - 1)/(|beta| - 1).
std::vector<double> prune_thresholds(const std::vector<double>& windows, const std::vector<double>& beta_lo,
                                     const std::vector<double>& amax, int remaining) {
    std::vector<double> out;
    for (std::size_t k = 0; k < windows.size(); ++k) {
        const double b = beta_lo[k];
        const double br = std::pow(b, remaining);
        const double geo = b > 1.0 + 1e-12 ? (br - 1.0) / (b - 1.0) : static_cast<double>(remaining);
        out.push_back((windows[k] + amax[k] * geo) / br * (1.0 + 1e-9) + 1e-12);
    }
    return out;
}

struct FlatHash {
    const std::vector<std::int64_t>* data;
    int d;
    std::size_t operator()(std::size_t i) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (int k = 0; k < d; ++k) {
            h ^= static_cast<std::size_t>((*data)[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)]);
            h *= 1099511628211ULL;
        }
        return h;
    }
};

struct FlatEq {
    const std::vector<std::int64_t>* data;
    int d;
    bool operator()(std::size_t a, std::size_t b) const noexcept {
        return std::equal(data->begin() + static_cast<long>(a) * d, data->begin() + static_cast<long>(a + 1) * d,
                          data->begin() + static_cast<long>(b) * d);
    }
};

/// Hash grid over point midpoints.
class Grid {
public:
    Grid(const SpectrumLevel& level, double cell) : cell_(cell), dims_(level.dims()) {
        for (std::size_t i = 0; i < level.size(); ++i) cells_[key_of(level.coords(i))].push_back(i);
    }

    std::vector<std::int64_t> index_of(const double* mid) const {
        std::vector<std::int64_t> idx(static_cast<std::size_t>(dims_));
        for (int k = 0; k < dims_; ++k) idx[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(std::floor(mid[k] / cell_));
        return idx;
    }

    const std::vector<std::size_t>* at(const std::vector<std::int64_t>& idx) const {
        auto it = cells_.find(hash(idx));
        return it == cells_.end() ? nullptr : &it->second;
    }

    double cell() const noexcept { return cell_; }

private:
    std::uint64_t key_of(const DInterval* c) const {
        std::vector<double> mid(static_cast<std::size_t>(dims_));
        for (int k = 0; k < dims_; ++k) mid[static_cast<std::size_t>(k)] = c[k].mid();
        return hash(index_of(mid.data()));
    }
    static std::uint64_t hash(const std::vector<std::int64_t>& idx) {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (auto v : idx) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }

    double cell_;
    int dims_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

/// Enclosure of |x - y| in the max-over-places norm, from coordinates.
DInterval distance(const DInterval* a, const DInterval* b, const SpectrumLevel& level) {
    DInterval best = DInterval::point(0.0);
    const auto& off = level.offsets();
    for (std::size_t k = 0; k < off.size(); ++k) {
        const int o = off[k];
        const bool cplx = (k + 1 < off.size() ? off[k + 1] : level.dims()) - o == 2;
        DInterval d;
        if (!cplx) {
            d = (a[o] - b[o]).abs();
        } else {
            d = ((a[o] - b[o]).sqr() + (a[o + 1] - b[o + 1]).sqr()).sqrt();
        }
        best = dmax(best, d);
    }
    return best;
}

/// Cell size for hash grids: the geometric mean of the coordinate extents per point,
/// with thin directions clamped to a hundredth of the widest.
double grid_pitch(const SpectrumLevel& level, double floor_value) {
    std::vector<double> ext;
    for (int k = 0; k < level.dims(); ++k) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = 0; i < level.size(); ++i) {
            lo = std::min(lo, level.coords(i)[k].lo);
            hi = std::max(hi, level.coords(i)[k].hi);
        }
        ext.push_back(hi - lo);
    }
    const double widest = *std::max_element(ext.begin(), ext.end());
    double log_vol = 0.0;
    for (double e : ext) log_vol += std::log(std::max({e, widest * 1e-2, 1e-300}));
    const double g = std::exp((log_vol - std::log(static_cast<double>(level.size()))) / level.dims());
    return std::max(g, floor_value);
}

double max_width(const SpectrumLevel& level) {
    double w = 0.0;
    for (std::size_t i = 0; i < level.size(); ++i) {
        for (int k = 0; k < level.dims(); ++k) w = std::max(w, level.coords(i)[k].hi - level.coords(i)[k].lo);
    }
    return w;
}

/// All integer offset vectors with max-norm exactly r.
void shell_offsets(int dims, int r, std::vector<std::vector<std::int64_t>>& out) {
    out.clear();
    std::vector<std::int64_t> cur(static_cast<std::size_t>(dims), -r);
    while (true) {
        std::int64_t m = 0;
        for (auto v : cur) m = std::max<std::int64_t>(m, std::llabs(v));
        if (m == r) out.push_back(cur);
        int k = 0;
        while (k < dims && ++cur[static_cast<std::size_t>(k)] > r) cur[static_cast<std::size_t>(k++)] = -r;
        if (k == dims) break;
    }
}

}  // namespace

FieldElement SpectrumLevel::point(std::size_t i) const {
    if (i >= count_) throw Error(ErrorKind::InvalidArgument, "point index out of range");
    if (!generic_.empty()) return generic_[i];
    std::vector<Rational> c;
    for (int k = 0; k < degree_; ++k) {
        c.emplace_back(BigInt(static_cast<long>(ints_[i * static_cast<std::size_t>(degree_) + static_cast<std::size_t>(k)])), scale_);
    }
    return FieldElement(field_, std::move(c));
}

std::vector<FieldElement> SpectrumLevel::points() const {
    std::vector<FieldElement> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < count_; ++i) out.push_back(point(i));
    return out;
}

SpectrumLevel restrict_level(const SpectrumLevel& level, const std::vector<std::size_t>& keep) {
    SpectrumLevel out = level;
    out.count_ = keep.size();
    out.ints_.clear();
    out.generic_.clear();
    out.coords_.clear();
    const auto d = static_cast<std::size_t>(level.degree_);
    const auto dims = static_cast<std::size_t>(level.dims_);
    for (std::size_t i : keep) {
        if (!level.generic_.empty()) out.generic_.push_back(level.generic_.at(i));
        else out.ints_.insert(out.ints_.end(), level.ints_.begin() + static_cast<long>(i * d),
                              level.ints_.begin() + static_cast<long>((i + 1) * d));
        out.coords_.insert(out.coords_.end(), level.coords_.begin() + static_cast<long>(i * dims),
                           level.coords_.begin() + static_cast<long>((i + 1) * dims));
    }
    out.pruned = level.pruned + static_cast<long>(level.size() - keep.size());
    return out;
}

SpectrumLevel enumerate_spectrum(const PlaceSystem& ps, const Alphabet& alphabet, int n,
                                 const SpectrumOptions& options) {
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "level must be nonnegative");
    const FieldPtr& field = ps.field();
    const int d = field->degree();
    SpectrumLevel level;
    level.n = n;
    level.field_ = field;
    level.degree_ = d;

    // Pruning windows per coordinate place.
    const std::vector<int> arch = archimedean_places(ps);
    std::vector<double> windows;
    if (!options.place_windows.empty()) {
        if (options.place_windows.size() != arch.size()) throw Error(ErrorKind::InvalidArgument, "one window per place expected");
        for (const auto& w : options.place_windows) windows.push_back(DInterval::up(w.to_double()));
    } else if (options.prune_radius) {
        windows.assign(arch.size(), DInterval::up(options.prune_radius->to_double()));
    }
    std::vector<double> beta_lo;
    std::vector<double> amax;
    for (int p : arch) {
        beta_lo.push_back(ps.beta_abs(p, ps.precision().start_bits).lo_d());
        double m = 0.0;
        for (const auto& a : alphabet.digits) m = std::max(m, ps.abs_at(a, p, ps.precision().start_bits).hi_d());
        amax.push_back(m);
    }

    bool integral = field->min_poly().is_monic();
    const BigInt D = alphabet.denominator();
    std::vector<std::vector<std::int64_t>> dig;
    std::vector<std::int64_t> mp;
    if (integral && D.fits_slong_p()) {
        for (const auto& a : alphabet.digits) {
            std::vector<std::int64_t> v;
            for (const auto& c : a.coeffs()) {
                const Rational s = c * Rational(D);
                if (!s.numerator().fits_slong_p()) integral = false;
                else v.push_back(s.numerator().get_si());
            }
            dig.push_back(std::move(v));
        }
        for (int k = 0; k < d; ++k) {
            if (!field->min_poly()[k].fits_slong_p()) integral = false;
            else mp.push_back(field->min_poly()[k].get_si());
        }
    } else {
        integral = false;
    }

    if (integral) {
        try {
            const CoordMap map(ps, D);
            level.places_ = map.places;
            level.offsets_ = map.offsets;
            level.dims_ = map.dims;
            level.scale_ = D;
            std::vector<std::int64_t> cur;
            for (const auto& v : dig) cur.insert(cur.end(), v.begin(), v.end());
            std::size_t count = dig.size();
            std::vector<DInterval> cbuf(static_cast<std::size_t>(map.dims));
            auto keep = [&](const std::int64_t* c, const std::vector<double>& thr) {
                if (thr.empty()) return true;
                map.fill(c, d, cbuf.data());
                for (std::size_t k = 0; k < thr.size(); ++k) {
                    if (place_abs_lo(cbuf.data(), map, k) > thr[k]) return false;
                }
                return true;
            };
            long pruned = 0;
            {
                const auto thr = windows.empty() ? std::vector<double>{} : prune_thresholds(windows, beta_lo, amax, n);
                std::vector<std::int64_t> kept;
                std::size_t kc = 0;
                for (std::size_t i = 0; i < count; ++i) {
                    if (keep(&cur[i * static_cast<std::size_t>(d)], thr)) {
                        kept.insert(kept.end(), cur.begin() + static_cast<long>(i) * d, cur.begin() + static_cast<long>(i + 1) * d);
                        ++kc;
                    } else {
                        ++pruned;
                    }
                }
                cur = std::move(kept);
                count = kc;
            }
            for (int k = 1; k <= n; ++k) {
                const auto thr = windows.empty() ? std::vector<double>{} : prune_thresholds(windows, beta_lo, amax, n - k);
                std::vector<std::int64_t> next;
                FlatHash h{&next, d};
                FlatEq eq{&next, d};
                std::unordered_set<std::size_t, FlatHash, FlatEq> seen(count * dig.size() + 16, h, eq);
                std::vector<std::int64_t> bx(static_cast<std::size_t>(d));
                for (std::size_t i = 0; i < count; ++i) {
                    const std::int64_t* x = &cur[i * static_cast<std::size_t>(d)];
                    const std::int64_t top = x[d - 1];
                    for (int j = d - 1; j >= 1; --j) bx[static_cast<std::size_t>(j)] = checked_add(x[j - 1], -checked_mul(mp[static_cast<std::size_t>(j)], top));
                    bx[0] = -checked_mul(mp[0], top);
                    if (d == 1) bx[0] = checked_mul(-mp[0], x[0]);
                    for (const auto& a : dig) {
                        const std::size_t idx = next.size() / static_cast<std::size_t>(d);
                        for (int j = 0; j < d; ++j) next.push_back(checked_add(bx[static_cast<std::size_t>(j)], a[static_cast<std::size_t>(j)]));
                        if (!keep(&next[idx * static_cast<std::size_t>(d)], thr) || !seen.insert(idx).second) {
                            if (!keep(&next[idx * static_cast<std::size_t>(d)], thr)) ++pruned;
                            next.resize(idx * static_cast<std::size_t>(d));
                        }
                    }
                    if (static_cast<long>(next.size() / static_cast<std::size_t>(d)) > options.max_points) {
                        throw Error(ErrorKind::MemoryBudgetExceeded, "spectrum level exceeds " + std::to_string(options.max_points) + " points");
                    }
                }
                cur = std::move(next);
                count = cur.size() / static_cast<std::size_t>(d);
            }
            level.ints_ = std::move(cur);
            level.count_ = count;
            level.pruned = pruned;
            level.coords_.resize(count * static_cast<std::size_t>(map.dims));
            for (std::size_t i = 0; i < count; ++i) {
                map.fill(&level.ints_[i * static_cast<std::size_t>(d)], d, &level.coords_[i * static_cast<std::size_t>(map.dims)]);
            }
            return level;
        } catch (const Overflow&) {
            level.ints_.clear();
        }
    }

    // Exact path.
    const CoordMap map(ps, BigInt(1));
    level.places_ = map.places;
    level.offsets_ = map.offsets;
    level.dims_ = map.dims;
    level.scale_ = 1;
    std::vector<DInterval> cbuf(static_cast<std::size_t>(map.dims));
    auto keep = [&](const FieldElement& x, const std::vector<double>& thr) {
        if (thr.empty()) return true;
        fill_generic(ps, map, x, cbuf.data());
        for (std::size_t k = 0; k < thr.size(); ++k) {
            if (place_abs_lo(cbuf.data(), map, k) > thr[k]) return false;
        }
        return true;
    };
    long pruned = 0;
    std::vector<FieldElement> cur;
    {
        const auto thr = windows.empty() ? std::vector<double>{} : prune_thresholds(windows, beta_lo, amax, n);
        for (const auto& a : alphabet.digits) {
            if (keep(a, thr)) cur.push_back(a);
            else ++pruned;
        }
    }
    for (int k = 1; k <= n; ++k) {
        const auto thr = windows.empty() ? std::vector<double>{} : prune_thresholds(windows, beta_lo, amax, n - k);
        std::vector<FieldElement> next;
        std::unordered_set<FieldElement> seen;
        for (const auto& x : cur) {
            const FieldElement bx = x.mul_generator();
            for (const auto& a : alphabet.digits) {
                FieldElement y = bx + a;
                if (!keep(y, thr)) {
                    ++pruned;
                    continue;
                }
                if (seen.insert(y).second) next.push_back(std::move(y));
            }
            if (static_cast<long>(next.size()) > options.max_points) {
                throw Error(ErrorKind::MemoryBudgetExceeded, "spectrum level exceeds " + std::to_string(options.max_points) + " points");
            }
        }
        cur = std::move(next);
    }
    level.count_ = cur.size();
    level.pruned = pruned;
    level.coords_.resize(cur.size() * static_cast<std::size_t>(map.dims));
    for (std::size_t i = 0; i < cur.size(); ++i) fill_generic(ps, map, cur[i], &level.coords_[i * static_cast<std::size_t>(map.dims)]);
    level.generic_ = std::move(cur);
    return level;
}

SpectrumLevel level_of(const PlaceSystem& ps, int n, std::vector<FieldElement> points) {
    const CoordMap map(ps, BigInt(1));
    SpectrumLevel level;
    level.n = n;
    level.field_ = ps.field();
    level.degree_ = ps.degree();
    level.places_ = map.places;
    level.offsets_ = map.offsets;
    level.dims_ = map.dims;
    level.count_ = points.size();
    level.coords_.resize(points.size() * static_cast<std::size_t>(map.dims));
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!same_field(*points[i].field(), *ps.field())) throw Error(ErrorKind::FieldMismatch, "witness point of a different field");
        fill_generic(ps, map, points[i], &level.coords_[i * static_cast<std::size_t>(map.dims)]);
    }
    level.generic_ = std::move(points);
    return level;
}

Rational separation_bound(const PlaceSystem& ps, const Alphabet& alphabet) {
    const mpfr_prec_t bits = ps.precision().start_bits;
    const NumberField& k = *ps.field();
    const BigInt D = alphabet.denominator();
    if (k.rational_mode()) {
        // Product formula over Q: the primes outside S_beta contribute at most the part of D coprime to t.
        BigInt coprime = D;
        int finite = 0;
        for (const auto& p : ps.places()) {
            if (p.archimedean()) continue;
            ++finite;
            while (coprime % p.prime == 0) coprime /= p.prime;
        }
        Real root(bits);
        mpfr_rootn_ui(root.get(), Interval(Rational(coprime), bits).hi().get(), static_cast<unsigned long>(finite + 1), MPFR_RNDU);
        const Interval out = Interval(1L, bits) / Interval::from_bounds(root, root);
        return out.lo().to_rational();
    }
    // Differences b = a - a'.
    std::vector<FieldElement> diffs;
    for (const auto& a : alphabet.digits) {
        for (const auto& b : alphabet.digits) diffs.push_back(a - b);
    }
    Interval product = Interval(Rational(D), bits).pow(k.degree());
    int s_embeddings = 0;
    for (const auto& p : ps.places()) {
        const int mult = p.kind == PlaceKind::Complex ? 2 : 1;
        if (p.modulus_class != ModulusClass::Contracting) {
            s_embeddings += mult;
            continue;
        }
        const int idx = static_cast<int>(&p - ps.places().data());
        Interval top(0L, bits);
        for (const auto& b : diffs) top = max(top, ps.abs_at(b, idx, bits));
        const Interval c = top / (Interval(1L, bits) - ps.beta_abs(idx, bits));
        product = product * c.pow(mult);
    }
    if (product.hi_d() <= 0) return Rational(1);
    Real root(bits);
    mpfr_rootn_ui(root.get(), product.hi().get(), static_cast<unsigned long>(s_embeddings), MPFR_RNDU);
    const Interval lower = Interval(1L, bits) / Interval::from_bounds(root, root);
    const Rational r = dyadic_floor(lower.lo_d(), 40);
    return r.sign() > 0 ? r : lower.lo().to_rational();
}

Interval min_gap(const PlaceSystem& ps, const SpectrumLevel& level) {
    const std::size_t n = level.size();
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "min_gap needs at least two points");
    std::vector<int> finite;
    for (std::size_t i = 0; i < ps.places().size(); ++i) {
        if (!ps.places()[i].archimedean()) finite.push_back(static_cast<int>(i));
    }
    const int dims = level.dims();
    const double w = max_width(level);
    double h = 0.5 * grid_pitch(level, 1e-9);
    while (true) {
        const Grid grid(level, h);
        double best_lo = std::numeric_limits<double>::infinity();
        double best_hi = best_lo;
        std::vector<std::int64_t> off(static_cast<std::size_t>(dims), -1);
        std::vector<std::vector<std::int64_t>> neigh;
        while (true) {
            neigh.push_back(off);
            int k = 0;
            while (k < dims && ++off[static_cast<std::size_t>(k)] > 1) off[static_cast<std::size_t>(k++)] = -1;
            if (k == dims) break;
        }
        std::vector<double> mid(static_cast<std::size_t>(dims));
        for (std::size_t i = 0; i < n; ++i) {
            for (int k = 0; k < dims; ++k) mid[static_cast<std::size_t>(k)] = level.coords(i)[k].mid();
            const auto base = grid.index_of(mid.data());
            for (const auto& o : neigh) {
                auto idx = base;
                for (int k = 0; k < dims; ++k) idx[static_cast<std::size_t>(k)] += o[static_cast<std::size_t>(k)];
                const auto* cell = grid.at(idx);
                if (!cell) continue;
                for (std::size_t j : *cell) {
                    if (j <= i) continue;
                    DInterval dist = distance(level.coords(i), level.coords(j), level);
                    if (!finite.empty()) {
                        const Rational diff = level.point(i).rational_value() - level.point(j).rational_value();
                        for (int p : finite) {
                            dist = dmax(dist, exact_d(diff.padic_abs(static_cast<unsigned long>(ps.places()[static_cast<std::size_t>(p)].prime))));
                        }
                    }
                    best_lo = std::min(best_lo, dist.lo);
                    best_hi = std::min(best_hi, dist.hi);
                }
            }
        }
        if (best_hi <= h - 2 * w - 1e-12) return Interval::from_doubles(best_lo, best_hi, 64);
        h *= 2;
    }
}

Region Region::scaled_ball(const PlaceSystem& ps, int k, const Rational& rho) {
    Region r;
    const mpfr_prec_t bits = ps.precision().start_bits;
    for (int p : archimedean_places(ps)) {
        r.center.push_back({Rational(0), Rational(0)});
        const Interval rad = ps.beta_abs(p, bits).pow(k) * Interval(rho, bits);
        r.radius.push_back(rad.hi().to_rational());
    }
    return r;
}

Interval covering_radius(const PlaceSystem& ps, const SpectrumLevel& level, const Region& region,
                         const CoveringOptions& opt) {
    (void)ps;
    const int dims = level.dims();
    const auto& off = level.offsets();
    const std::size_t np = off.size();
    if (region.center.size() != np || region.radius.size() != np) throw Error(ErrorKind::InvalidArgument, "region does not match the level's places");
    if (level.size() == 0) throw Error(ErrorKind::InvalidArgument, "covering radius of an empty level");
    std::vector<bool> cplx(np);
    for (std::size_t k = 0; k < np; ++k) cplx[k] = (k + 1 < np ? off[k + 1] : dims) - off[k] == 2;
    std::vector<DInterval> cre;
    std::vector<DInterval> cim;
    std::vector<double> rad_hi;
    std::vector<double> rad_lo;
    for (std::size_t k = 0; k < np; ++k) {
        cre.push_back(exact_d(region.center[k].re));
        cim.push_back(exact_d(region.center[k].im));
        const DInterval r = exact_d(region.radius[k]);
        rad_hi.push_back(r.hi);
        rad_lo.push_back(r.lo);
    }
    const double g = grid_pitch(level, std::max(1e-9, *std::max_element(rad_hi.begin(), rad_hi.end()) / 256));
    const Grid grid(level, g);
    const double w = max_width(level);
    std::vector<std::vector<std::int64_t>> shell;
    auto nearest = [&](const std::vector<double>& c) {
        std::vector<DInterval> cp(static_cast<std::size_t>(dims));
        for (int k = 0; k < dims; ++k) cp[static_cast<std::size_t>(k)] = DInterval::point(c[static_cast<std::size_t>(k)]);
        const auto base = grid.index_of(c.data());
        DInterval best{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
        for (int r = 0; r < 1'000'000; ++r) {
            shell_offsets(dims, r, shell);
            for (const auto& o : shell) {
                auto idx = base;
                for (int k = 0; k < dims; ++k) idx[static_cast<std::size_t>(k)] += o[static_cast<std::size_t>(k)];
                const auto* cell = grid.at(idx);
                if (!cell) continue;
                for (std::size_t j : *cell) {
                    const DInterval d = distance(cp.data(), level.coords(j), level);
                    best.lo = std::min(best.lo, d.lo);
                    best.hi = std::min(best.hi, d.hi);
                }
            }
            if (best.hi <= r * g - w) break;
        }
        return best;
    };
    struct Cell {
        std::vector<DInterval> box;
        double upper;
    };
    auto cmp = [](const Cell& a, const Cell& b) { return a.upper < b.upper; };
    std::priority_queue<Cell, std::vector<Cell>, decltype(cmp)> queue(cmp);
    double lower = 0.0;
    auto evaluate = [&](std::vector<DInterval> box) {
        // Skip cells disjoint from the region.
        for (std::size_t k = 0; k < np; ++k) {
            const int o = off[k];
            if (!cplx[k]) {
                const DInterval dx = (box[static_cast<std::size_t>(o)] - cre[k]).abs();
                if (dx.lo > rad_hi[k]) return;
            } else {
                const DInterval d2 = (box[static_cast<std::size_t>(o)] - cre[k]).abs().sqr() + (box[static_cast<std::size_t>(o) + 1] - cim[k]).abs().sqr();
                if (d2.lo > rad_hi[k] * rad_hi[k]) return;
            }
        }
        std::vector<double> c(static_cast<std::size_t>(dims));
        for (int k = 0; k < dims; ++k) c[static_cast<std::size_t>(k)] = box[static_cast<std::size_t>(k)].mid();
        const DInterval f = nearest(c);
        double half = 0.0;
        bool inside = true;
        for (std::size_t k = 0; k < np; ++k) {
            const int o = off[k];
            const double hx = DInterval::up(box[static_cast<std::size_t>(o)].hi - c[static_cast<std::size_t>(o)]);
            if (!cplx[k]) {
                half = std::max(half, hx);
                inside = inside && (DInterval::point(c[static_cast<std::size_t>(o)]) - cre[k]).abs().hi <= rad_lo[k];
            } else {
                const double hy = DInterval::up(box[static_cast<std::size_t>(o) + 1].hi - c[static_cast<std::size_t>(o) + 1]);
                half = std::max(half, (DInterval::point(hx).sqr() + DInterval::point(hy).sqr()).sqrt().hi);
                const DInterval d2 = (DInterval::point(c[static_cast<std::size_t>(o)]) - cre[k]).sqr() +
                                     (DInterval::point(c[static_cast<std::size_t>(o) + 1]) - cim[k]).sqr();
                inside = inside && d2.hi <= rad_lo[k] * rad_lo[k];
            }
        }
        if (inside) lower = std::max(lower, f.lo);
        queue.push({std::move(box), DInterval::up(f.hi + half)});
    };
    std::vector<DInterval> root(static_cast<std::size_t>(dims));
    for (std::size_t k = 0; k < np; ++k) {
        const int o = off[k];
        root[static_cast<std::size_t>(o)] = {DInterval::down(cre[k].lo - rad_hi[k]), DInterval::up(cre[k].hi + rad_hi[k])};
        if (cplx[k]) root[static_cast<std::size_t>(o) + 1] = {DInterval::down(cim[k].lo - rad_hi[k]), DInterval::up(cim[k].hi + rad_hi[k])};
    }
    // Initial split into refine^dims cells.
    std::vector<std::vector<DInterval>> init{root};
    const int split = std::max(1, opt.refine);
    for (int k = 0; k < dims && split > 1; ++k) {
        std::vector<std::vector<DInterval>> next;
        for (const auto& b : init) {
            const double lo = b[static_cast<std::size_t>(k)].lo;
            const double step = (b[static_cast<std::size_t>(k)].hi - lo) / split;
            for (int s = 0; s < split; ++s) {
                auto c = b;
                c[static_cast<std::size_t>(k)] = {lo + s * step, s + 1 == split ? b[static_cast<std::size_t>(k)].hi : lo + (s + 1) * step};
                next.push_back(std::move(c));
            }
        }
        init = std::move(next);
    }
    for (auto& b : init) evaluate(std::move(b));
    long cells = static_cast<long>(init.size());
    while (!queue.empty()) {
        const double upper = queue.top().upper;
        if (opt.accept && upper <= *opt.accept) break;
        if (opt.reject && lower > *opt.reject) break;
        if (upper <= lower + opt.tolerance) break;
        if (cells >= opt.max_cells) break;
        Cell cell = queue.top();
        queue.pop();
        std::size_t widest = 0;
        for (int k = 1; k < dims; ++k) {
            if (cell.box[static_cast<std::size_t>(k)].hi - cell.box[static_cast<std::size_t>(k)].lo >
                cell.box[widest].hi - cell.box[widest].lo) {
                widest = static_cast<std::size_t>(k);
            }
        }
        const double m = cell.box[widest].mid();
        auto left = cell.box;
        left[widest].hi = m;
        cell.box[widest].lo = m;
        evaluate(std::move(left));
        evaluate(std::move(cell.box));
        cells += 2;
    }
    const double upper = queue.empty() ? lower : queue.top().upper;
    return Interval::from_doubles(lower, std::max(lower, upper), 64);
}

const char* to_string(DensityKind kind) noexcept {
    switch (kind) {
        case DensityKind::CertifiedDense: return "certified-dense";
        case DensityKind::EvidenceDense: return "evidence-dense";
        case DensityKind::EvidenceSparse: return "evidence-sparse";
        case DensityKind::Inconclusive: return "inconclusive";
    }
    return "?";
}

DensityVerdict density_test(const PlaceSystem& ps, const Alphabet& alphabet, const DensityBudget& budget,
                            const CertificateSearch* known) {
    if (!ps.unit_places().empty()) throw Error(ErrorKind::UnitCirclePlacePresent, "density test needs no conjugates on the unit circle");
    DensityVerdict out;
    CertificateBudget cb;
    cb.max_level = budget.max_level;
    cb.max_points = budget.max_points;
    const CertificateSearch search = known ? *known : origin_interior_certificate(ps, alphabet, cb);
    if (search.certificate) {
        out.kind = DensityKind::CertifiedDense;
        out.detail = "origin interior to the attractor at level " + std::to_string(search.certificate->n);
        return out;
    }
    for (int n = 1; n <= budget.max_level; ++n) {
        SpectrumOptions so;
        so.max_points = budget.max_points;
        SpectrumLevel level;
        try {
            level = enumerate_spectrum(ps, alphabet, n - 1, so);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::MemoryBudgetExceeded) throw;
            break;
        }
        CoveringOptions co;
        co.tolerance = 1e-2;
        co.max_cells = 200'000;
        const Interval r = covering_radius(ps, level, Region::scaled_ball(ps, n, Rational(1)), co);
        out.trend.push_back(r.hi_d());
    }
    const auto& t = out.trend;
    if (search.refuted) {
        out.kind = DensityKind::EvidenceSparse;
        out.detail = "attractor lies in a half-space through the origin";
    } else if (t.size() >= 3) {
        const double a = t[t.size() - 3];
        const double b = t[t.size() - 2];
        const double c = t[t.size() - 1];
        if (b >= 1.2 * a && c >= 1.2 * b) {
            out.kind = DensityKind::EvidenceSparse;
            out.detail = "covering radius grows with the level";
        } else if (std::max({a, b, c}) <= 1.1 * std::min({a, b, c})) {
            out.kind = DensityKind::EvidenceDense;
            out.radius = c;
            out.detail = "covering radius plateaus";
        }
    }
    if (!t.empty()) out.radius = t.back();
    return out;
}

}  // namespace betarep
