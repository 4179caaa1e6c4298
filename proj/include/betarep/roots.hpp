#pragma once

#include <vector>

#include "betarep/interval.hpp"
#include "betarep/number_field.hpp"

namespace betarep {

/// Precision ladder for certified decisions: start, doubled up to the cap.
struct PrecisionContext {
    mpfr_prec_t start_bits = 64;
    mpfr_prec_t max_bits = 4096;
};

/// Disk that provably contains exactly one root of the minimal polynomial.
struct RootBall {
    Real center_re;
    Real center_im;
    Real radius;   // upper bound
    bool is_real = false;

    /// Rectangle enclosing the disk; the imaginary part is exactly [0,0] for real roots.
    CInterval enclosure() const;
    /// Certified modulus of the enclosed root.
    Interval modulus() const;
};

/// Certified isolation of all roots of the field's minimal polynomial. Balls are pairwise
/// disjoint, each of radius <= target_radius, sorted by real part then imaginary part.
std::vector<RootBall> isolate_roots(const NumberField& field, double target_radius,
                                    const PrecisionContext& ctx = {});
/// Target radius given as 2^log2_target, for targets below the double range.
std::vector<RootBall> isolate_roots_log2(const NumberField& field, long log2_target,
                                         const PrecisionContext& ctx = {});

/// Same as isolate_roots but never returns a ball larger than its counterpart in `previous`.
/// Result is ordered like `previous` (matched by proximity).
std::vector<RootBall> refine_roots(const NumberField& field, const std::vector<RootBall>& previous,
                                   long log2_target, const PrecisionContext& ctx = {});

}  // namespace betarep
