#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "betarep/field_element.hpp"
#include "betarep/interval.hpp"
#include "betarep/roots.hpp"

namespace betarep {

enum class PlaceKind { Real, Complex, Finite };
enum class ModulusClass { Expanding, Unit, Contracting };

const char* to_string(PlaceKind kind) noexcept;
const char* to_string(ModulusClass cls) noexcept;

/// One place of Q(beta). Complex places keep one representative root of the conjugate pair.
struct Place {
    PlaceKind kind = PlaceKind::Real;
    int root = -1;       // archimedean: index into the root list
    int conjugate = -1;  // complex: the partner root
    long prime = 0;      // finite
    ModulusClass modulus_class = ModulusClass::Contracting;

    bool archimedean() const noexcept { return kind != PlaceKind::Finite; }
};

enum class BaseLabel {
    Pisot,
    Salem,
    ComplexPisot,
    ComplexSalem,
    RationalInteger,
    RationalNonInteger,
    ExpandingOther,
    Other,
};

const char* to_string(BaseLabel label) noexcept;

/// Root counts are over all d roots, not over places.
struct BaseClass {
    BaseLabel label = BaseLabel::Other;
    int expanding = 0;
    int unit = 0;
    int contracting = 0;
};

/// Enclosure of a field element at one place. Finite places carry the exact p-adic absolute value.
struct PlaceValue {
    int place = 0;
    CInterval value;
    std::optional<Rational> padic_abs;
};

using CertifiedValue = std::vector<PlaceValue>;

/// Root balls at one working precision together with the powers 1, r, ..., r^{d-1}.
struct RootTable {
    mpfr_prec_t bits = 0;
    std::vector<RootBall> balls;
    std::vector<std::vector<CInterval>> powers;
};

bool is_self_reciprocal(const IntPolynomial& p);

class PlaceSystem;
using PlaceSystemPtr = std::shared_ptr<const PlaceSystem>;

/// Certified roots, places and S_beta of a field with its distinguished root. Root tables
/// at higher precision are computed on demand and cached; radii never grow under refinement.
class PlaceSystem {
public:
    static PlaceSystemPtr build(FieldPtr field, const PrecisionContext& ctx = {});

    const FieldPtr& field() const noexcept { return field_; }
    const PrecisionContext& precision() const noexcept { return ctx_; }
    int degree() const noexcept { return field_->degree(); }

    /// Roots at the starting precision.
    const std::vector<RootBall>& roots() const { return table(ctx_.start_bits).balls; }
    const std::vector<ModulusClass>& root_classes() const noexcept { return root_classes_; }
    int distinguished_root() const noexcept { return distinguished_; }

    /// places()[0] is the place of the distinguished root.
    const std::vector<Place>& places() const noexcept { return places_; }
    const std::vector<int>& s_beta() const noexcept { return s_beta_; }
    const std::vector<int>& expanding_places() const noexcept { return expanding_; }
    const std::vector<int>& unit_places() const noexcept { return unit_; }
    /// Archimedean places outside S_beta.
    const std::vector<int>& contracting_places() const noexcept { return contracting_; }
    const BaseClass& base_class() const noexcept { return class_; }

    /// Tables are cached; bits is rounded up to a power-of-two multiple of the start precision.
    const RootTable& table(mpfr_prec_t bits) const;
    mpfr_prec_t next_bits(mpfr_prec_t bits) const;

    CInterval embed(const FieldElement& x, int place, mpfr_prec_t bits) const;
    /// Embeddings at every root (conjugates included), in root order.
    std::vector<CInterval> embed_all_roots(const FieldElement& x, mpfr_prec_t bits) const;
    /// |x|_p; exact for finite places and for rational x.
    Interval abs_at(const FieldElement& x, int place, mpfr_prec_t bits) const;
    /// |beta|_p.
    Interval beta_abs(int place, mpfr_prec_t bits) const;

private:
    PlaceSystem() = default;
    void check_element(const FieldElement& x) const;

    FieldPtr field_;
    PrecisionContext ctx_;
    std::vector<ModulusClass> root_classes_;
    int distinguished_ = 0;
    std::vector<Place> places_;
    std::vector<int> s_beta_;
    std::vector<int> expanding_;
    std::vector<int> unit_;
    std::vector<int> contracting_;
    BaseClass class_;

    mutable std::mutex mutex_;
    mutable std::map<mpfr_prec_t, std::unique_ptr<RootTable>> tables_;
};

CertifiedValue eval_embedding(const PlaceSystem& ps, const FieldElement& x, const std::vector<int>& places,
                              mpfr_prec_t bits);

/// Interval containing max over S_beta of |x|_p.
Interval beta_norm(const PlaceSystem& ps, const FieldElement& x, mpfr_prec_t bits);

/// Upper bound of max_{a in digits} |a|_p / (|beta|_p - 1); throws NotExpandingPlace.
Interval rep_constant(const PlaceSystem& ps, const std::vector<FieldElement>& digits, int place,
                      mpfr_prec_t bits);

BaseClass classify_base(const PlaceSystem& ps);

}  // namespace betarep
