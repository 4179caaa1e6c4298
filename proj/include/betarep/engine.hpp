#pragma once

#include <optional>
#include <vector>

#include "betarep/approximation.hpp"

namespace betarep {

/// D_m: radius 1 at expanding archimedean places, m at unit-circle places, valuation >= 0 at finite places.
struct DomainSpec {
    Rational m = Rational(1);
};

enum class EngineMode { Guaranteed, Empirical };
const char* to_string(EngineMode mode) noexcept;

struct Policy {
    EngineMode mode = EngineMode::Empirical;
    /// Digit preference for ties, as alphabet indices; empty means smallest coefficient height first, then alphabet order.
    std::vector<int> tie_break;
    long max_iters = 1'000'000;
    /// epsilon of the unit-place radius m = max(1, epsilon + max |x|_p).
    Rational epsilon = Rational(1, 16);
    /// Guaranteed mode: precomputed certificate; validated on demand otherwise.
    std::optional<CoverCertificate> cover;
};

/// x = beta^L * (sum_i w_i beta^{-i}) with w = preperiod followed by period repeated.
struct Representation {
    FieldPtr field;
    Alphabet alphabet;
    long L = 0;
    std::vector<int> preperiod;
    std::vector<int> period;
};

struct OrbitTrace {
    /// states[i+1] = beta * states[i] - digit(digits[i]); the last state repeats states[cycle_start].
    std::vector<FieldElement> states;
    std::vector<int> digits;
    long cycle_start = 0;
};

struct StepResult {
    int digit = -1;
    FieldElement next;
};

struct RepresentResult {
    Representation rep;
    OrbitTrace trace;
};

bool in_domain(const PlaceSystem& ps, const FieldElement& x, const DomainSpec& spec);

/// Smallest L >= 0 with beta^{-L} x in D_m, where m = max(1, eps + max over unit places of |x|_p).
std::pair<long, Rational> shift_L(const PlaceSystem& ps, const FieldElement& x, const Rational& eps);

StepResult step(const PlaceSystem& ps, const FieldElement& x, const Alphabet& alphabet, const DomainSpec& spec,
                const Policy& policy);

RepresentResult represent(const PlaceSystem& ps, const FieldElement& x, const Alphabet& alphabet,
                          const Policy& policy = {});

FieldElement value_of(const Representation& rep);
bool verify(const Representation& rep, const FieldElement& x);

/// Minimal period and preperiod describing the same digit word.
Representation canonicalize(Representation rep);

struct SplitParts {
    FieldElement inp;
    Representation frp;
};

/// Integral part (digits at nonnegative powers) and the fractional tail as an L = 0 representation.
SplitParts split_parts(const Representation& rep);

}  // namespace betarep
