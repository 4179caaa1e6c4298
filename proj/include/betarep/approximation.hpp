#pragma once

#include <optional>
#include <string>
#include <vector>

#include "betarep/places.hpp"

namespace betarep {

struct ComplexRational {
    Rational re;
    Rational im;

    friend bool operator==(const ComplexRational&, const ComplexRational&) = default;
};

/// Finite digit set. When tags are present there is one tag vector per digit, aligned with
/// PlaceSystem::s_beta(): the cover point the digit approximates at every place of S_beta
/// (for finite places the residue k/t it represents).
struct Alphabet {
    std::vector<FieldElement> digits;
    Rational epsilon;
    std::vector<std::vector<ComplexRational>> tags;

    Alphabet() = default;
    /// Throws InvalidArgument on duplicate digits or mismatched tags.
    Alphabet(std::vector<FieldElement> digits, Rational epsilon = Rational(0),
             std::vector<std::vector<ComplexRational>> tags = {});

    static Alphabet integer_range(const FieldPtr& field, long lo, long hi);

    int size() const noexcept { return static_cast<int>(digits.size()); }
    bool tagged() const noexcept { return !tags.empty(); }
    /// lcm of all digit denominators.
    BigInt denominator() const;
    /// Index of a digit, or -1.
    int index_of(const FieldElement& a) const;
};

enum class CoverVerdict { Certified, Indeterminate, Refuted };
const char* to_string(CoverVerdict v) noexcept;

struct CoverCertificate {
    CoverVerdict verdict = CoverVerdict::Indeterminate;
    /// Largest unit-place radius the certificate covers; empty means every m >= 1.
    std::optional<Rational> m_validated;
    Rational delta;
    /// Distinct cover points per place of S_beta (tagged alphabets only).
    std::vector<std::vector<ComplexRational>> place_covers;
    std::string detail;

    bool certified() const noexcept { return verdict == CoverVerdict::Certified; }
    bool covers(const Rational& m) const { return certified() && (!m_validated || m <= *m_validated); }
};

struct CoverOptions {
    long max_cells = 400'000;
    /// Initial subdivision factor; 2 checks on a grid twice as fine.
    int refine = 1;
};

/// z in Q(beta) with certified |Phi(z) - target|_p < eps at every archimedean place of S_beta.
/// Targets are aligned with the archimedean members of s_beta(); targets at real places must be real.
FieldElement weak_approximate(const PlaceSystem& ps, const std::vector<ComplexRational>& targets,
                              const Rational& eps, const BigInt& denom_cap = BigInt(1) << 48);

enum class AlphabetMode { Guaranteed, ComplexPisotBound, IntegerRange };

struct AlphabetRequest {
    AlphabetMode mode = AlphabetMode::Guaranteed;
    long range = 1;                 // IntegerRange: {-M..M}
    Rational delta = Rational(1, 16);
};

Alphabet suggest_alphabet(const PlaceSystem& ps, const AlphabetRequest& request = {});

/// Smallest M with 2M+1 > beta*conj(beta) + |beta + conj(beta)|.
long complex_pisot_bound(const PlaceSystem& ps);

/// Checks beta*D_m subset of union (D_m + a) with overlap delta.
CoverCertificate validate_cover(const PlaceSystem& ps, const Alphabet& alphabet, const Rational& delta,
                                const CoverOptions& options = {});

}  // namespace betarep
