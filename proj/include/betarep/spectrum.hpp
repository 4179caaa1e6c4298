#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "betarep/approximation.hpp"
#include "betarep/dinterval.hpp"

namespace betarep {

struct SpectrumOptions {
    /// Drop points whose |x|_beta certainly exceeds this radius.
    std::optional<Rational> prune_radius;
    /// Per-place windows (aligned with the archimedean S_beta places); overrides prune_radius.
    std::vector<Rational> place_windows;
    long max_points = 20'000'000;
};

/// The points sum_{i=0}^{n} a_i beta^i, deduplicated exactly, with enclosures of their
/// coordinates in the archimedean part of K_beta (one real coordinate per real place,
/// two per complex place).
class SpectrumLevel {
public:
    int n = 0;
    long pruned = 0;

    std::size_t size() const noexcept { return count_; }
    FieldElement point(std::size_t i) const;
    std::vector<FieldElement> points() const;
    /// Archimedean places of S_beta in coordinate order.
    const std::vector<int>& places() const noexcept { return places_; }
    /// Coordinate offset of each place.
    const std::vector<int>& offsets() const noexcept { return offsets_; }
    int dims() const noexcept { return dims_; }
    const DInterval* coords(std::size_t i) const { return &coords_[i * static_cast<std::size_t>(dims_)]; }
    const FieldPtr& field() const noexcept { return field_; }

private:
    friend SpectrumLevel enumerate_spectrum(const PlaceSystem&, const Alphabet&, int, const SpectrumOptions&);
    friend SpectrumLevel restrict_level(const SpectrumLevel&, const std::vector<std::size_t>&);
    friend SpectrumLevel level_of(const PlaceSystem&, int, std::vector<FieldElement>);
    FieldPtr field_;
    std::vector<int> places_;
    std::vector<int> offsets_;
    int dims_ = 0;
    std::size_t count_ = 0;
    // Integer storage: D*x in Z[beta], d entries per point.
    BigInt scale_ = 1;
    int degree_ = 0;
    std::vector<std::int64_t> ints_;
    // Exact storage when the integer path does not apply.
    std::vector<FieldElement> generic_;
    std::vector<DInterval> coords_;
};

SpectrumLevel enumerate_spectrum(const PlaceSystem& ps, const Alphabet& alphabet, int n,
                                 const SpectrumOptions& options = {});

/// A level holding the given points (for deserialized witnesses); membership in X_n is not checked.
SpectrumLevel level_of(const PlaceSystem& ps, int n, std::vector<FieldElement> points);

/// Sub-level keeping the given point indices.
SpectrumLevel restrict_level(const SpectrumLevel& level, const std::vector<std::size_t>& keep);

/// Positive rational lower bound on |z|_beta for nonzero z in X^{A-A}(beta).
Rational separation_bound(const PlaceSystem& ps, const Alphabet& alphabet);

/// Minimal pairwise |x - y|_beta; throws InvalidArgument with fewer than two points.
Interval min_gap(const PlaceSystem& ps, const SpectrumLevel& level);

/// Product of closed balls, one per coordinate place of a level.
struct Region {
    std::vector<ComplexRational> center;
    std::vector<Rational> radius;

    /// beta^k * B_rho(0) at the archimedean places of S_beta.
    static Region scaled_ball(const PlaceSystem& ps, int k, const Rational& rho);
};

struct CoveringOptions {
    double tolerance = 1e-3;
    long max_cells = 2'000'000;
    /// Stop as soon as the upper bound is <= accept or the lower bound is > reject.
    std::optional<double> accept;
    std::optional<double> reject;
    int refine = 1;
};

/// Bounds [lo, hi] on sup over the region of the distance to the nearest level point.
Interval covering_radius(const PlaceSystem& ps, const SpectrumLevel& level, const Region& region,
                         const CoveringOptions& options = {});

enum class DensityKind { CertifiedDense, EvidenceDense, EvidenceSparse, Inconclusive };
const char* to_string(DensityKind kind) noexcept;

struct DensityBudget {
    int max_level = 12;
    long max_points = 2'000'000;
};

struct DensityVerdict {
    DensityKind kind = DensityKind::Inconclusive;
    /// Upper bounds of the covering radius of X_{n-1} over beta^n D_1, by level n.
    std::vector<double> trend;
    double radius = 0.0;
    std::string detail;
};

struct CertificateSearch;

/// Relative-density semi-decision; throws UnitCirclePlacePresent. A finished certificate
/// search may be passed in to avoid repeating it.
DensityVerdict density_test(const PlaceSystem& ps, const Alphabet& alphabet, const DensityBudget& budget = {},
                            const CertificateSearch* known = nullptr);

}  // namespace betarep
