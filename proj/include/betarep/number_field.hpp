#pragma once

#include <memory>
#include <optional>
#include <string>

#include "betarep/error.hpp"
#include "betarep/polynomial.hpp"

namespace betarep {

/// Chooses which root of the minimal polynomial is identified with the base.
/// Without an index the root of maximal modulus is taken (ties: larger real part,
/// then larger imaginary part).
struct RootSelector {
    std::optional<int> index;
};

/// Outcome of the irreducibility procedure.
struct IrreducibilityCertificate {
    std::string method;  // "linear", "mod-p", "degree-patterns", "bounded-search"
    long prime = 0;      // witness prime for "mod-p"
};

/// Q(beta) = Q[x]/(m). Monic integer m, or a primitive linear t*x - s (rational base mode).
class NumberField {
public:
    const IntPolynomial& min_poly() const noexcept { return min_poly_; }
    int degree() const noexcept { return min_poly_.degree(); }
    bool rational_mode() const noexcept { return degree() == 1 && !min_poly_.is_monic(); }
    const RootSelector& root_selector() const noexcept { return selector_; }
    const IrreducibilityCertificate& certificate() const noexcept { return certificate_; }

    /// For degree 1 the base itself, s/t.
    Rational rational_base() const;

    friend std::shared_ptr<const NumberField> construct_field(const IntPolynomial& min_poly,
                                                              const RootSelector& selector);

private:
    NumberField() = default;
    IntPolynomial min_poly_;
    RootSelector selector_;
    IrreducibilityCertificate certificate_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

/// Thrown with a nontrivial factor when construct_field detects a reducible polynomial.
class ReducibleError : public Error {
public:
    ReducibleError(IntPolynomial witness, const std::string& what)
        : Error(ErrorKind::Reducible, what), witness_(std::move(witness)) {}
    const IntPolynomial& witness() const noexcept { return witness_; }

private:
    IntPolynomial witness_;
};

FieldPtr construct_field(const IntPolynomial& min_poly, const RootSelector& selector = {});

/// Irreducibility decision for a monic integer polynomial of degree <= 32:
/// returns the certificate or throws ReducibleError / IrreducibilityUndetermined.
IrreducibilityCertificate check_irreducible(const IntPolynomial& monic_poly,
                                            long search_budget = 2'000'000);

}  // namespace betarep
