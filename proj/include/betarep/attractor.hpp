#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "betarep/engine.hpp"
#include "betarep/spectrum.hpp"

namespace betarep {

/// Partial sums sum_{i=1}^{n} a_i beta^{-i} with a per-place tail radius.
struct CylinderCover {
    int n = 0;
    std::vector<FieldElement> points;
    /// Aligned with the archimedean places of S_beta.
    std::vector<Interval> radius;
};

CylinderCover cylinder_cover(const PlaceSystem& ps, const Alphabet& alphabet, int n,
                             long max_points = 2'000'000);

/// beta^n B_rho(0) is contained in X_n + B_rho(0), where X_n holds the n-digit sums
/// sum_{i<n} a_i beta^i, and witness is the part of X_n inside the window.
struct InteriorCertificate {
    int n = 0;
    Rational rho;
    Rational slack;
    Alphabet alphabet;
    SpectrumLevel witness;
};

struct CertificateBudget {
    int max_level = 12;
    long max_points = 2'000'000;
    long max_cells = 400'000;
    /// Radii 1, 1/2, ..., 2^{-min_rho_log2}.
    int min_rho_log2 = 8;
};

struct CertificateSearch {
    std::optional<InteriorCertificate> certificate;
    /// K lies in a closed half-space through 0 at some place, so 0 is not interior.
    bool refuted = false;
    std::string refutation;
    /// Smallest ratio (covering radius upper bound) / rho seen during the search.
    double best_ratio = 0.0;
    int levels_tried = 0;
};

CertificateSearch origin_interior_certificate(const PlaceSystem& ps, const Alphabet& alphabet,
                                              const CertificateBudget& budget = {});

/// Independent re-verification at doubled precision on a finer initial grid.
bool check_certificate(const PlaceSystem& ps, const InteriorCertificate& cert);

/// Half-space obstruction: index of a real expanding place with sigma(beta) > 0 at which
/// all digits are >= 0 (sign +1) or all are <= 0 (sign -1).
struct HalfSpace {
    int place = -1;
    int sign = 0;
};
std::optional<HalfSpace> half_space_obstruction(const PlaceSystem& ps, const Alphabet& alphabet);

/// True when x sits strictly on the wrong side of the half-space, so no representation exists.
bool provably_unrepresentable(const PlaceSystem& ps, const Alphabet& alphabet, const FieldElement& x);

struct SampleSpec {
    int count = 20;
    /// Coefficients p/q with |p| <= height and 1 <= q <= height (integers for Z[beta] samples).
    long height = 6;
    std::uint64_t seed = 1;
    std::vector<FieldElement> extra;
};

struct CrossValidationCaps {
    long max_iters = 200'000;
    CertificateBudget certificate;
    DensityBudget density;
};

enum class ConditionVerdict { Positive, Negative, Undecided };
const char* to_string(ConditionVerdict v) noexcept;

enum class SampleStatus { Verified, IterationCap, NoAdmissibleDigit, Unrepresentable, VerifyFailed };
const char* to_string(SampleStatus s) noexcept;

struct SampleOutcome {
    FieldElement x;
    /// Sampled from Z[beta] (otherwise from Q(beta)).
    bool integral = false;
    SampleStatus status = SampleStatus::Verified;
    std::optional<Representation> rep;
};

struct CrossValidationReport {
    /// Conditions: Q(beta) in Per, Z[beta] in Per, relatively dense spectrum, 0 in int K.
    ConditionVerdict cond[4] = {ConditionVerdict::Undecided, ConditionVerdict::Undecided,
                                ConditionVerdict::Undecided, ConditionVerdict::Undecided};
    std::uint64_t seed = 0;
    std::vector<SampleOutcome> samples;
    CertificateSearch search;
    std::optional<DensityVerdict> density;
    std::vector<std::string> contradictions;
    std::vector<std::string> notes;
};

CrossValidationReport cross_validate_main2(const PlaceSystem& ps, const Alphabet& alphabet,
                                           const SampleSpec& samples = {}, const CrossValidationCaps& caps = {});

/// Seeded height-bounded samples: count from Q(beta) followed by count from Z[beta].
std::vector<std::pair<FieldElement, bool>> sample_elements(const FieldPtr& field, const SampleSpec& spec);

}  // namespace betarep
