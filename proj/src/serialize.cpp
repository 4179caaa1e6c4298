#include "betarep/serialize.hpp"

#include <cstdio>
#include <ostream>

#include "betarep/error.hpp"

namespace betarep {
namespace {

Json bigint_json(const BigInt& v) {
    if (v.fits_slong_p()) return Json(v.get_si());
    return Json(v.get_str());
}

Rational rational_from(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw Error(ErrorKind::Parse, "expected a rational, got " + j.dump());
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json complex_rational_json(const ComplexRational& c) { return Json{{"re", c.re.str()}, {"im", c.im.str()}}; }

ComplexRational complex_rational_from(const Json& j) {
    if (!j.is_object()) return {rational_from(j), Rational(0)};
    return {rational_from(j.at("re")), j.contains("im") ? rational_from(j.at("im")) : Rational(0)};
}

const Json& field_of(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::Parse, std::string("missing key \"") + key + "\"");
    return j.at(key);
}

std::vector<int> int_list(const Json& j) {
    if (!j.is_array()) throw Error(ErrorKind::Parse, "expected an array of digit indices");
    std::vector<int> out;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw Error(ErrorKind::Parse, "digit index must be an integer");
        out.push_back(v.get<int>());
    }
    return out;
}

}  // namespace

Json interval_to_json(const Interval& v) { return Json{{"lo", v.lo().str(20)}, {"hi", v.hi().str(20)}}; }

Json root_to_json(const RootBall& r) {
    return Json{{"re", r.center_re.str(20)}, {"im", r.center_im.str(20)}, {"rad", r.radius.str(6)}};
}

Json poly_to_json(const IntPolynomial& p) {
    Json arr = Json::array();
    for (int k = 0; k <= p.degree(); ++k) arr.push_back(bigint_json(p[k]));
    return arr;
}

IntPolynomial poly_from_json(const Json& j) {
    if (j.is_object()) return poly_from_json(field_of(j, "minpoly"));
    if (j.is_string()) return IntPolynomial::parse(j.get<std::string>());
    if (!j.is_array() || j.empty()) throw Error(ErrorKind::Parse, "minpoly must be a nonempty coefficient array");
    std::vector<BigInt> c;
    for (const auto& v : j) {
        if (v.is_number_integer()) c.emplace_back(v.get<long>());
        else if (v.is_string()) c.push_back(parse_bigint(v.get<std::string>()));
        else throw Error(ErrorKind::Parse, "minpoly coefficients must be integers");
    }
    return IntPolynomial(std::move(c));
}

Json element_to_json(const FieldElement& x) {
    Json c = Json::array();
    for (const auto& v : x.coeffs()) c.push_back(v.str());
    return Json{{"coeffs", c}};
}

FieldElement element_from_json(const FieldPtr& field, const Json& j) {
    if (!j.is_object()) return FieldElement::from_rational(field, rational_from(j));
    const Json& c = field_of(j, "coeffs");
    if (!c.is_array() || c.size() > static_cast<std::size_t>(field->degree())) {
        throw Error(ErrorKind::Parse, "coeffs must be an array of at most " + std::to_string(field->degree()) + " rationals");
    }
    std::vector<Rational> v;
    for (const auto& e : c) v.push_back(rational_from(e));
    v.resize(static_cast<std::size_t>(field->degree()), Rational(0));
    return FieldElement(field, std::move(v));
}

Json alphabet_to_json(const Alphabet& a) {
    Json digits = Json::array();
    for (const auto& d : a.digits) digits.push_back(element_to_json(d));
    Json out{{"digits", digits}, {"epsilon", a.epsilon.str()}};
    if (a.tagged()) {
        Json tags = Json::array();
        for (const auto& t : a.tags) {
            Json row = Json::array();
            for (const auto& c : t) row.push_back(complex_rational_json(c));
            tags.push_back(row);
        }
        out["tags"] = tags;
    }
    return out;
}

Alphabet alphabet_from_json(const FieldPtr& field, const Json& j) {
    const Json& d = field_of(j, "digits");
    if (!d.is_array()) throw Error(ErrorKind::Parse, "digits must be an array");
    std::vector<FieldElement> digits;
    for (const auto& e : d) digits.push_back(element_from_json(field, e));
    const Rational eps = j.contains("epsilon") ? rational_from(j.at("epsilon")) : Rational(0);
    std::vector<std::vector<ComplexRational>> tags;
    if (j.contains("tags")) {
        for (const auto& row : j.at("tags")) {
            std::vector<ComplexRational> t;
            for (const auto& c : row) t.push_back(complex_rational_from(c));
            tags.push_back(std::move(t));
        }
    }
    return Alphabet(std::move(digits), eps, std::move(tags));
}

Json representation_to_json(const Representation& rep) {
    Json out{{"minpoly", poly_to_json(rep.field->min_poly())}};
    if (rep.field->root_selector().index) out["root_index"] = *rep.field->root_selector().index;
    out["alphabet"] = alphabet_to_json(rep.alphabet);
    out["L"] = rep.L;
    out["preperiod"] = rep.preperiod;
    out["period"] = rep.period;
    return out;
}

Representation representation_from_json(const Json& j) {
    RootSelector sel;
    if (j.contains("root_index")) sel.index = j.at("root_index").get<int>();
    Representation rep;
    rep.field = construct_field(poly_from_json(field_of(j, "minpoly")), sel);
    rep.alphabet = alphabet_from_json(rep.field, field_of(j, "alphabet"));
    const Json& L = field_of(j, "L");
    if (!L.is_number_integer()) throw Error(ErrorKind::Parse, "L must be an integer");
    rep.L = L.get<long>();
    rep.preperiod = int_list(field_of(j, "preperiod"));
    rep.period = int_list(field_of(j, "period"));
    if (rep.period.empty()) throw Error(ErrorKind::Parse, "period must be nonempty");
    for (int v : rep.preperiod) {
        if (v < 0 || v >= rep.alphabet.size()) throw Error(ErrorKind::Parse, "digit index out of range");
    }
    for (int v : rep.period) {
        if (v < 0 || v >= rep.alphabet.size()) throw Error(ErrorKind::Parse, "digit index out of range");
    }
    return rep;
}

Json place_system_to_json(const PlaceSystem& ps) {
    Json roots = Json::array();
    for (std::size_t i = 0; i < ps.roots().size(); ++i) {
        Json r = root_to_json(ps.roots()[i]);
        r["modulus"] = to_string(ps.root_classes()[i]);
        roots.push_back(r);
    }
    Json places = Json::array();
    for (const auto& p : ps.places()) {
        Json e{{"kind", to_string(p.kind)}};
        if (p.archimedean()) e["root"] = p.root;
        else e["prime"] = p.prime;
        e["modulus"] = to_string(p.modulus_class);
        places.push_back(e);
    }
    return Json{{"minpoly", poly_to_json(ps.field()->min_poly())},
                {"roots", roots},
                {"distinguished", ps.distinguished_root()},
                {"places", places},
                {"s_beta", ps.s_beta()},
                {"class", to_string(ps.base_class().label)}};
}

Json classify_to_json(const PlaceSystem& ps) {
    const BaseClass& c = ps.base_class();
    Json out{{"class", to_string(c.label)}};
    Json wg;
    Json witnesses = Json::array();
    try {
        const WeakGreedyVerdict v = weak_greedy_decision(ps);
        wg = v.admits;
        for (const auto& r : v.offending_conjugates) witnesses.push_back(root_to_json(r));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotMonic && e.kind() != ErrorKind::NotExpandingPlace) throw;
        wg = false;
    }
    out["weak_greedy"] = wg;
    out["witnesses"] = witnesses;
    out["expanding"] = c.expanding;
    out["unit"] = c.unit;
    out["contracting"] = c.contracting;
    out["distinguished"] = root_to_json(ps.roots()[static_cast<std::size_t>(ps.distinguished_root())]);
    return out;
}

Json cover_certificate_to_json(const CoverCertificate& c) {
    Json out{{"verdict", to_string(c.verdict)}, {"delta", c.delta.str()}};
    out["m_validated"] = c.m_validated ? Json(c.m_validated->str()) : Json("all");
    out["detail"] = c.detail;
    return out;
}

Json certificate_to_json(const InteriorCertificate& c) {
    Json pts = Json::array();
    for (std::size_t i = 0; i < c.witness.size(); ++i) pts.push_back(element_to_json(c.witness.point(i)));
    return Json{{"n", c.n},
                {"rho", c.rho.str()},
                {"slack", c.slack.str()},
                {"alphabet", alphabet_to_json(c.alphabet)},
                {"witness_points", pts}};
}

InteriorCertificate certificate_from_json(const PlaceSystem& ps, const Json& j) {
    InteriorCertificate c;
    c.n = field_of(j, "n").get<int>();
    c.rho = rational_from(field_of(j, "rho"));
    c.slack = j.contains("slack") ? rational_from(j.at("slack")) : Rational(0);
    c.alphabet = alphabet_from_json(ps.field(), field_of(j, "alphabet"));
    std::vector<FieldElement> pts;
    for (const auto& e : field_of(j, "witness_points")) pts.push_back(element_from_json(ps.field(), e));
    c.witness = level_of(ps, c.n - 1, std::move(pts));
    return c;
}

Json search_to_json(const CertificateSearch& s) {
    Json out{{"found", s.certificate.has_value()}};
    if (s.certificate) out["certificate"] = certificate_to_json(*s.certificate);
    out["refuted"] = s.refuted;
    if (s.refuted) out["refutation"] = s.refutation;
    out["levels_tried"] = s.levels_tried;
    if (!s.certificate && !s.refuted) out["best_ratio"] = fmt_double(s.best_ratio);
    return out;
}

Json density_to_json(const DensityVerdict& d) {
    Json trend = Json::array();
    for (double v : d.trend) trend.push_back(fmt_double(v));
    return Json{{"verdict", to_string(d.kind)}, {"radius", fmt_double(d.radius)}, {"trend", trend}, {"detail", d.detail}};
}

Json cylinder_to_json(const CylinderCover& c) {
    Json pts = Json::array();
    for (const auto& p : c.points) pts.push_back(element_to_json(p));
    Json rad = Json::array();
    for (const auto& r : c.radius) rad.push_back(r.hi().str(20));
    return Json{{"n", c.n}, {"points", pts}, {"radius", rad}};
}

Json crossval_to_json(const CrossValidationReport& r) {
    Json cond = Json::array();
    for (auto v : r.cond) cond.push_back(to_string(v));
    Json samples = Json::array();
    for (const auto& s : r.samples) {
        Json e{{"x", element_to_json(s.x)}, {"integral", s.integral}, {"status", to_string(s.status)}};
        if (s.rep) e["rep"] = Json{{"L", s.rep->L}, {"preperiod_length", s.rep->preperiod.size()}, {"period_length", s.rep->period.size()}};
        samples.push_back(e);
    }
    Json out{{"seed", r.seed}, {"conditions", cond}, {"certificate", search_to_json(r.search)}};
    if (r.density) out["density"] = density_to_json(*r.density);
    out["samples"] = samples;
    out["contradictions"] = r.contradictions;
    out["notes"] = r.notes;
    return out;
}

void write_points_csv(std::ostream& out, const SpectrumLevel& level) {
    const int d = level.field()->degree();
    for (int k = 0; k < d; ++k) out << (k ? "," : "") << "c" << k;
    const auto& off = level.offsets();
    for (std::size_t p = 0; p < off.size(); ++p) {
        const int width = (p + 1 < off.size() ? off[p + 1] : level.dims()) - off[p];
        out << ",p" << level.places()[p] << "_re";
        if (width == 2) out << ",p" << level.places()[p] << "_im";
    }
    out << "\n";
    for (std::size_t i = 0; i < level.size(); ++i) {
        const FieldElement x = level.point(i);
        for (int k = 0; k < d; ++k) out << (k ? "," : "") << x.coeffs()[static_cast<std::size_t>(k)].str();
        for (int k = 0; k < level.dims(); ++k) out << "," << fmt_double(level.coords(i)[k].mid());
        out << "\n";
    }
}

}  // namespace betarep
