#pragma once

#include <iosfwd>

#include <json.hpp>

#include "betarep/attractor.hpp"
#include "betarep/classify.hpp"

namespace betarep {

/// Insertion-ordered so that output is byte-stable.
using Json = nlohmann::ordered_json;

Json interval_to_json(const Interval& v);
Json root_to_json(const RootBall& r);

/// Coefficients constant term first; entries are numbers when they fit, else strings.
Json poly_to_json(const IntPolynomial& p);
/// Accepts {"minpoly": [...]}, a bare coefficient array, or an expression string.
IntPolynomial poly_from_json(const Json& j);

Json element_to_json(const FieldElement& x);
/// Accepts {"coeffs": [...]}, a rational string or an integer.
FieldElement element_from_json(const FieldPtr& field, const Json& j);

Json alphabet_to_json(const Alphabet& a);
Alphabet alphabet_from_json(const FieldPtr& field, const Json& j);

Json representation_to_json(const Representation& rep);
/// Builds the field from "minpoly" (and "root_index" when present).
Representation representation_from_json(const Json& j);

Json place_system_to_json(const PlaceSystem& ps);
Json classify_to_json(const PlaceSystem& ps);
Json cover_certificate_to_json(const CoverCertificate& c);
Json certificate_to_json(const InteriorCertificate& c);
InteriorCertificate certificate_from_json(const PlaceSystem& ps, const Json& j);
Json search_to_json(const CertificateSearch& s);
Json density_to_json(const DensityVerdict& d);
Json cylinder_to_json(const CylinderCover& c);
Json crossval_to_json(const CrossValidationReport& r);

/// One row per point: coefficients, then coordinate midpoints per place.
void write_points_csv(std::ostream& out, const SpectrumLevel& level);

}  // namespace betarep
