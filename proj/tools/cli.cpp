#include "cli.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>

#include "betarep/serialize.hpp"

namespace betarep::cli {
namespace {

struct Common {
    std::string minpoly;
    int root_index = -1;
    long prec_start = 64;
    long prec_max = 4096;
    std::string format = "json";
};

void add_field_options(CLI::App& sub, Common& c, bool required = true) {
    auto* opt = sub.add_option("--minpoly", c.minpoly, "Minimal polynomial, e.g. \"x^4-x^3-x^2-x+1\" or [1,-1,-1,-1,1]");
    if (required) opt->required();
    sub.add_option("--root-index", c.root_index, "Index of the root taken as beta (default: maximal modulus)");
    sub.add_option("--prec-start", c.prec_start, "Starting precision in bits")->check(CLI::PositiveNumber);
    sub.add_option("--prec-max", c.prec_max, "Precision cap in bits")->check(CLI::PositiveNumber);
    sub.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "human", "csv"}));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
    }
}

PlaceSystemPtr build_system(const Common& c) {
    if (c.prec_max < c.prec_start) throw Error(ErrorKind::InvalidArgument, "--prec-max must be >= --prec-start");
    const std::string& m = c.minpoly;
    const IntPolynomial p = (!m.empty() && (m[0] == '[' || m[0] == '{')) ? poly_from_json(parse_json(m)) : IntPolynomial::parse(m);
    RootSelector sel;
    if (c.root_index >= 0) sel.index = c.root_index;
    PrecisionContext ctx;
    ctx.start_bits = c.prec_start;
    ctx.max_bits = c.prec_max;
    return PlaceSystem::build(construct_field(p, sel), ctx);
}

/// "lo..hi", inline JSON, or a JSON file.
Alphabet parse_alphabet(const FieldPtr& field, const std::string& text) {
    const auto dots = text.find("..");
    if (dots != std::string::npos && text.find('{') == std::string::npos) {
        try {
            const long lo = std::stol(text.substr(0, dots));
            const long hi = std::stol(text.substr(dots + 2));
            return Alphabet::integer_range(field, lo, hi);
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::Parse, "alphabet range must look like -2..2");
        }
    }
    if (!text.empty() && text[0] == '{') return alphabet_from_json(field, parse_json(text));
    return alphabet_from_json(field, parse_json(read_file(text)));
}

/// A rational, inline JSON ({"coeffs": ...} or a coefficient array), or @file.
FieldElement parse_element(const FieldPtr& field, const std::string& text) {
    if (!text.empty() && text[0] == '@') return element_from_json(field, parse_json(read_file(text.substr(1))));
    if (!text.empty() && text[0] == '[') {
        // Coefficient list; entries may be bare rationals such as 1/2.
        if (text.back() != ']') throw Error(ErrorKind::Parse, "unterminated coefficient list: " + text);
        std::vector<Rational> coeffs;
        std::stringstream items(text.substr(1, text.size() - 2));
        for (std::string item; std::getline(items, item, ',');) {
            std::erase_if(item, [](char ch) { return std::isspace(static_cast<unsigned char>(ch)) || ch == '"'; });
            if (!item.empty()) coeffs.push_back(Rational::parse(item));
        }
        return FieldElement(field, coeffs);
    }
    if (!text.empty() && text[0] == '{') return element_from_json(field, parse_json(text));
    return FieldElement::from_rational(field, Rational::parse(text));
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::PrecisionExhausted:
        case ErrorKind::IterationCapExceeded:
        case ErrorKind::MemoryBudgetExceeded:
        case ErrorKind::DenominatorCapExceeded:
        case ErrorKind::IrreducibilityUndetermined:
        case ErrorKind::NoCoverCertificate:
            return Inconclusive;
        case ErrorKind::NoAdmissibleDigit:
            return Negative;
        default:
            return Usage;
    }
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

std::string digit_word(const Representation& rep) {
    auto name = [&](int i) {
        const FieldElement& d = rep.alphabet.digits[static_cast<std::size_t>(i)];
        return d.is_rational() ? d.rational_value().str() : d.str();
    };
    std::string s = "L=" + std::to_string(rep.L) + " ";
    for (int d : rep.preperiod) s += name(d) + " ";
    s += "(";
    for (std::size_t k = 0; k < rep.period.size(); ++k) s += (k ? " " : "") + name(rep.period[k]);
    return s + ")^omega";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Eventually periodic representations in algebraic bases"};
    app.require_subcommand(1);
    Common c;

    auto* classify = app.add_subcommand("classify", "Classify a base and decide weak-greedy admissibility");
    add_field_options(*classify, c);
    bool show_places = false;
    classify->add_flag("--places", show_places, "Include roots and places");

    auto* represent_cmd = app.add_subcommand("represent", "Compute an eventually periodic representation");
    add_field_options(*represent_cmd, c);
    std::string alphabet_text;
    std::string x_text;
    std::string mode = "empirical";
    long max_iters = 1'000'000;
    std::string emit_path;
    std::string epsilon = "1/16";
    represent_cmd->add_option("--alphabet", alphabet_text, "Digits: range lo..hi, inline JSON or JSON file")->required();
    represent_cmd->add_option("--x", x_text, "Element: rational, coefficient JSON or @file")->required();
    represent_cmd->add_option("--mode", mode, "Digit rule")->check(CLI::IsMember({"empirical", "guaranteed"}));
    represent_cmd->add_option("--max-iters", max_iters, "Iteration cap")->check(CLI::PositiveNumber);
    represent_cmd->add_option("--epsilon", epsilon, "Unit-place margin");
    represent_cmd->add_option("--emit", emit_path, "Also write the representation JSON to FILE");

    auto* verify_cmd = app.add_subcommand("verify", "Check a representation against an element exactly");
    std::string rep_path;
    verify_cmd->add_option("--rep", rep_path, "Representation JSON file")->required();
    verify_cmd->add_option("--x", x_text, "Element: rational, coefficient JSON or @file")->required();

    auto* alphabet_cmd = app.add_subcommand("alphabet", "Construct or validate a digit alphabet");
    add_field_options(*alphabet_cmd, c);
    std::string amode = "guaranteed";
    std::string delta = "1/16";
    long range = 1;
    std::string validate_text;
    alphabet_cmd->add_option("--mode", amode, "Construction")->check(CLI::IsMember({"guaranteed", "complex-pisot", "range"}));
    alphabet_cmd->add_option("--delta", delta, "Cover margin (guaranteed mode)");
    alphabet_cmd->add_option("--range", range, "Half-width for range mode")->check(CLI::NonNegativeNumber);
    alphabet_cmd->add_option("--validate", validate_text, "Validate this alphabet instead of constructing one");

    auto* spectrum_cmd = app.add_subcommand("spectrum", "Enumerate spectrum levels and measure them");
    add_field_options(*spectrum_cmd, c);
    int level = 4;
    bool gap = false;
    bool density = false;
    int max_level = 12;
    long max_points = 2'000'000;
    spectrum_cmd->add_option("--alphabet", alphabet_text, "Digits")->required();
    spectrum_cmd->add_option("--level", level, "Level n (sums of n+1 digits)")->check(CLI::NonNegativeNumber);
    spectrum_cmd->add_option("--emit", emit_path, "Write the points as CSV to FILE");
    spectrum_cmd->add_flag("--gap", gap, "Certified minimal gap and separation bound");
    spectrum_cmd->add_flag("--density", density, "Relative density test");
    spectrum_cmd->add_option("--max-level", max_level, "Level budget for the density test")->check(CLI::PositiveNumber);
    spectrum_cmd->add_option("--max-points", max_points, "Point budget")->check(CLI::PositiveNumber);

    auto* attractor_cmd = app.add_subcommand("attractor", "Attractor covers and origin interior certificates");
    add_field_options(*attractor_cmd, c);
    bool check_origin = false;
    int cylinder = 0;
    std::string check_path;
    attractor_cmd->add_option("--alphabet", alphabet_text, "Digits")->required();
    attractor_cmd->add_flag("--check-origin", check_origin, "Search for a certificate that 0 is interior");
    attractor_cmd->add_option("--max-level", max_level, "Level budget")->check(CLI::PositiveNumber);
    attractor_cmd->add_option("--cylinder", cylinder, "Emit the level-n cylinder cover")->check(CLI::PositiveNumber);
    attractor_cmd->add_option("--check", check_path, "Re-verify a certificate JSON file");
    attractor_cmd->add_option("--emit", emit_path, "Write the certificate JSON to FILE");

    auto* crossval_cmd = app.add_subcommand("crossval", "Cross-validate the four equivalent conditions");
    add_field_options(*crossval_cmd, c);
    int samples = 20;
    long height = 6;
    std::uint64_t seed = 1;
    crossval_cmd->add_option("--alphabet", alphabet_text, "Digits")->required();
    crossval_cmd->add_option("--samples", samples, "Samples per ring")->check(CLI::NonNegativeNumber);
    crossval_cmd->add_option("--height", height, "Coefficient height bound")->check(CLI::PositiveNumber);
    crossval_cmd->add_option("--seed", seed, "Sampling seed");
    crossval_cmd->add_option("--max-iters", max_iters, "Iteration cap per sample")->check(CLI::PositiveNumber);
    crossval_cmd->add_option("--max-level", max_level, "Certificate level budget")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> argv(args.rbegin(), args.rend());
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Success;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return Success;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return Usage;
    }

    try {
        if (classify->parsed()) {
            const PlaceSystemPtr ps = build_system(c);
            Json j = classify_to_json(*ps);
            if (show_places) j["place_system"] = place_system_to_json(*ps);
            if (c.format == "human") {
                out << to_string(ps->base_class().label) << " weak_greedy=" << (j["weak_greedy"].get<bool>() ? "true" : "false") << "\n";
            } else {
                emit(out, j);
            }
            return Success;
        }
        if (represent_cmd->parsed()) {
            const PlaceSystemPtr ps = build_system(c);
            const Alphabet a = parse_alphabet(ps->field(), alphabet_text);
            const FieldElement x = parse_element(ps->field(), x_text);
            Policy policy;
            policy.mode = mode == "guaranteed" ? EngineMode::Guaranteed : EngineMode::Empirical;
            policy.max_iters = max_iters;
            policy.epsilon = Rational::parse(epsilon);
            const RepresentResult r = represent(*ps, x, a, policy);
            const Json j = representation_to_json(r.rep);
            if (!emit_path.empty()) {
                std::ofstream f(emit_path);
                if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + emit_path);
                f << j.dump(2) << "\n";
            }
            if (c.format == "human") out << digit_word(r.rep) << "\n";
            else emit(out, j);
            return Success;
        }
        if (verify_cmd->parsed()) {
            const Representation rep = representation_from_json(parse_json(read_file(rep_path)));
            const FieldElement x = parse_element(rep.field, x_text);
            const bool ok = verify(rep, x);
            emit(out, Json{{"equal", ok}, {"value", element_to_json(value_of(rep))}});
            return ok ? Success : Negative;
        }
        if (alphabet_cmd->parsed()) {
            const PlaceSystemPtr ps = build_system(c);
            const Rational d = Rational::parse(delta);
            Alphabet a;
            if (!validate_text.empty()) {
                a = parse_alphabet(ps->field(), validate_text);
            } else {
                AlphabetRequest req;
                req.mode = amode == "guaranteed" ? AlphabetMode::Guaranteed
                                                 : amode == "complex-pisot" ? AlphabetMode::ComplexPisotBound : AlphabetMode::IntegerRange;
                req.range = range;
                req.delta = d;
                a = suggest_alphabet(*ps, req);
            }
            const CoverCertificate cert = validate_cover(*ps, a, a.tagged() ? d : Rational(0));
            emit(out, Json{{"alphabet", alphabet_to_json(a)}, {"size", a.size()}, {"cover", cover_certificate_to_json(cert)}});
            return cert.verdict == CoverVerdict::Certified ? Success : cert.verdict == CoverVerdict::Refuted ? Negative : Inconclusive;
        }
        if (spectrum_cmd->parsed()) {
            const PlaceSystemPtr ps = build_system(c);
            const Alphabet a = parse_alphabet(ps->field(), alphabet_text);
            SpectrumOptions so;
            so.max_points = max_points;
            const SpectrumLevel lvl = enumerate_spectrum(*ps, a, level, so);
            if (!emit_path.empty()) {
                std::ofstream f(emit_path);
                if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + emit_path);
                write_points_csv(f, lvl);
            }
            if (c.format == "csv") {
                write_points_csv(out, lvl);
                return Success;
            }
            Json j{{"level", level}, {"points", lvl.size()}};
            int code = Success;
            if (gap) {
                j["separation_bound"] = separation_bound(*ps, a).str();
                if (lvl.size() >= 2) j["min_gap"] = interval_to_json(min_gap(*ps, lvl));
            }
            if (density) {
                DensityBudget b;
                b.max_level = max_level;
                b.max_points = max_points;
                const DensityVerdict v = density_test(*ps, a, b);
                j["density"] = density_to_json(v);
                code = v.kind == DensityKind::EvidenceSparse ? Negative : v.kind == DensityKind::Inconclusive ? Inconclusive : Success;
            }
            emit(out, j);
            return code;
        }
        if (attractor_cmd->parsed()) {
            const PlaceSystemPtr ps = build_system(c);
            const Alphabet a = parse_alphabet(ps->field(), alphabet_text);
            Json j = Json::object();
            int code = Success;
            if (cylinder > 0) j["cylinder"] = cylinder_to_json(cylinder_cover(*ps, a, cylinder));
            if (!check_path.empty()) {
                const InteriorCertificate cert = certificate_from_json(*ps, parse_json(read_file(check_path)));
                const bool ok = check_certificate(*ps, cert);
                j["check"] = ok;
                if (!ok) code = Negative;
            }
            if (check_origin || (cylinder == 0 && check_path.empty())) {
                CertificateBudget b;
                b.max_level = max_level;
                const CertificateSearch s = origin_interior_certificate(*ps, a, b);
                j["origin"] = search_to_json(s);
                if (s.certificate) {
                    j["origin"]["check"] = check_certificate(*ps, *s.certificate);
                    if (!emit_path.empty()) {
                        std::ofstream f(emit_path);
                        if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + emit_path);
                        f << certificate_to_json(*s.certificate).dump(2) << "\n";
                    }
                } else {
                    code = s.refuted ? Negative : Inconclusive;
                }
            }
            emit(out, j);
            return code;
        }
        if (crossval_cmd->parsed()) {
            const PlaceSystemPtr ps = build_system(c);
            const Alphabet a = parse_alphabet(ps->field(), alphabet_text);
            SampleSpec spec;
            spec.count = samples;
            spec.height = height;
            spec.seed = seed;
            CrossValidationCaps caps;
            caps.max_iters = max_iters == 1'000'000 ? caps.max_iters : max_iters;
            caps.certificate.max_level = max_level;
            caps.density.max_level = max_level;
            const CrossValidationReport r = cross_validate_main2(*ps, a, spec, caps);
            emit(out, crossval_to_json(r));
            return r.contradictions.empty() ? Success : Negative;
        }
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code_for(e.kind());
    }
    err << app.help();
    return Usage;
}

}  // namespace betarep::cli
