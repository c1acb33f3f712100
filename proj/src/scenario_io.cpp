#include "bp/scenario_io.hpp"

#include "bp/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <sstream>

namespace bp {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message)
{
    throw Error(ErrorKind::validation, path + ": " + message);
}

void check_keys(const Json& j, const std::string& path, std::initializer_list<const char*> allowed)
{
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& item : j.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return item.key() == k; });
        if (!known) fail(path + "." + item.key(), "unknown field");
    }
}

const Json* find(const Json& j, const char* key)
{
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double number_at(const Json& j, const std::string& path)
{
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
}

double number(const Json& j, const char* key, const std::string& path, std::optional<double> fallback = {})
{
    const Json* v = find(j, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(path + "." + key, "missing required field");
    }
    return number_at(*v, path + "." + key);
}

long long integer(const Json& j, const char* key, const std::string& path, std::optional<long long> fallback = {})
{
    const Json* v = find(j, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(path + "." + key, "missing required field");
    }
    if (!v->is_number_integer()) fail(path + "." + key, "expected an integer");
    return v->get<long long>();
}

std::string text(const Json& j, const char* key, const std::string& path, std::optional<std::string> fallback = {})
{
    const Json* v = find(j, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(path + "." + key, "missing required field");
    }
    if (!v->is_string()) fail(path + "." + key, "expected a string");
    return v->get<std::string>();
}

Vec vector_at(const Json& j, const std::string& path)
{
    if (!j.is_array()) fail(path, "expected an array of numbers");
    Vec out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_at(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

// Re-tags library errors with the JSON path that produced them.
template <class Fn>
auto at_path(const std::string& path, Fn&& fn)
{
    try {
        return fn();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::validation) throw;
        throw Error(ErrorKind::validation, path + ": " + e.what());
    }
}

Density density_from_json(const Json& j, const std::string& path)
{
    check_keys(j, path, {"terms"});
    const Json* terms = find(j, "terms");
    if (!terms || !terms->is_array()) fail(path + ".terms", "expected an array of {c, alpha}");
    std::vector<PowerTerm> out;
    for (std::size_t i = 0; i < terms->size(); ++i) {
        const std::string p = path + ".terms[" + std::to_string(i) + "]";
        check_keys((*terms)[i], p, {"c", "alpha"});
        out.push_back({number((*terms)[i], "c", p), number((*terms)[i], "alpha", p, 0.0)});
    }
    return at_path(path, [&] { return Density(std::move(out)); });
}

Json density_to_json(const Density& d)
{
    Json terms = Json::array();
    for (const PowerTerm& t : d.terms()) terms.push_back(Json{{"c", t.c}, {"alpha", t.alpha}});
    return Json{{"terms", terms}};
}

RadialProfile profile_from_json(const Json& j, const std::string& path)
{
    check_keys(j, path, {"terms", "modulation"});
    Json plain = j;
    plain.erase("modulation");
    Density d = density_from_json(plain, path);
    std::optional<Modulation> mod;
    if (const Json* m = find(j, "modulation")) {
        check_keys(*m, path + ".modulation", {"amp", "freq"});
        mod = Modulation{number(*m, "amp", path + ".modulation"), number(*m, "freq", path + ".modulation")};
    }
    return at_path(path, [&] { return RadialProfile::powers(std::move(d), mod); });
}

Json profile_to_json(const RadialProfile& p)
{
    Json j = density_to_json(p.density());
    if (p.modulation()) j["modulation"] = Json{{"amp", p.modulation()->amp}, {"freq", p.modulation()->freq}};
    return j;
}

Json number_or_inf(double p)
{
    if (std::isinf(p)) return "inf";
    return p;
}

}  // namespace

StarBody body_from_json(const Json& j, int dim, const std::string& path)
{
    if (!j.is_object()) fail(path, "expected a body object");
    const std::string kind = text(j, "kind", path);
    if (kind == "ball") {
        check_keys(j, path, {"kind", "r"});
        return at_path(path, [&] { return StarBody::ball(dim, number(j, "r", path, 1.0)); });
    }
    if (kind == "ellipsoid") {
        check_keys(j, path, {"kind", "semiaxes"});
        const Json* axes = find(j, "semiaxes");
        if (!axes) fail(path + ".semiaxes", "missing required field");
        Vec a = vector_at(*axes, path + ".semiaxes");
        if (a.size() != static_cast<std::size_t>(dim))
            fail(path + ".semiaxes", "expected " + std::to_string(dim) + " semiaxes");
        return at_path(path, [&] { return StarBody::ellipsoid(std::move(a)); });
    }
    if (kind == "lp_ball") {
        check_keys(j, path, {"kind", "p", "r"});
        const Json* p = find(j, "p");
        if (!p) fail(path + ".p", "missing required field");
        double exponent = 0.0;
        if (p->is_string()) {
            if (p->get<std::string>() != "inf") fail(path + ".p", "expected a number or \"inf\"");
            exponent = std::numeric_limits<double>::infinity();
        } else {
            exponent = number_at(*p, path + ".p");
        }
        return at_path(path, [&] { return StarBody::lp_ball(dim, exponent, number(j, "r", path, 1.0)); });
    }
    if (kind == "perturbed_ball") {
        check_keys(j, path, {"kind", "r", "terms"});
        std::vector<ZonalTerm> terms;
        if (const Json* t = find(j, "terms")) {
            if (!t->is_array()) fail(path + ".terms", "expected an array");
            for (std::size_t i = 0; i < t->size(); ++i) {
                const std::string p = path + ".terms[" + std::to_string(i) + "]";
                const Json& term = (*t)[i];
                check_keys(term, p, {"degree", "eps", "axis"});
                const Json* axis = find(term, "axis");
                if (!axis) fail(p + ".axis", "missing required field");
                terms.push_back({static_cast<int>(integer(term, "degree", p)), number(term, "eps", p),
                                 vector_at(*axis, p + ".axis")});
            }
        }
        return at_path(path, [&] { return StarBody::perturbed_ball(dim, number(j, "r", path, 1.0), terms); });
    }
    if (kind == "tabulated") {
        check_keys(j, path, {"kind", "grid"});
        const Json* grid = find(j, "grid");
        if (!grid) fail(path + ".grid", "missing required field");
        check_keys(*grid, path + ".grid", {"shape", "values"});
        TabulatedGrid g;
        const Json* shape = find(*grid, "shape");
        if (!shape || !shape->is_array()) fail(path + ".grid.shape", "expected an array of integers");
        for (std::size_t i = 0; i < shape->size(); ++i) {
            if (!(*shape)[i].is_number_integer())
                fail(path + ".grid.shape[" + std::to_string(i) + "]", "expected an integer");
            g.shape.push_back((*shape)[i].get<int>());
        }
        const Json* values = find(*grid, "values");
        if (!values) fail(path + ".grid.values", "missing required field");
        g.values = vector_at(*values, path + ".grid.values");
        return at_path(path, [&] { return StarBody::tabulated(dim, std::move(g)); });
    }
    if (kind == "scaled") {
        check_keys(j, path, {"kind", "factor", "base"});
        const Json* base = find(j, "base");
        if (!base) fail(path + ".base", "missing required field");
        const StarBody b = body_from_json(*base, dim, path + ".base");
        return at_path(path, [&] { return StarBody::scaled(b, number(j, "factor", path)); });
    }
    if (kind == "derived") {
        check_keys(j, path, {"kind", "generator", "resolution"});
        const Json* gen = find(j, "generator");
        if (!gen) fail(path + ".generator", "missing required field");
        const StarBody M = body_from_json(*gen, dim, path + ".generator");
        const int res = static_cast<int>(integer(j, "resolution", path, 24));
        return at_path(path, [&] { return derived_body_example31(M, build_sphere_quadrature(dim, res)); });
    }
    fail(path + ".kind", "unknown body kind \"" + kind + "\"");
}

Json body_to_json(const StarBody& body)
{
    const BodyDescription& d = body.description();
    Json j;
    j["kind"] = to_string(d.kind);
    switch (d.kind) {
    case BodyKind::ball: j["r"] = d.r; break;
    case BodyKind::ellipsoid: j["semiaxes"] = d.semiaxes; break;
    case BodyKind::lp_ball:
        j["p"] = number_or_inf(d.p);
        j["r"] = d.r;
        break;
    case BodyKind::perturbed_ball: {
        j["r"] = d.r;
        Json terms = Json::array();
        for (const ZonalTerm& t : d.terms) terms.push_back(Json{{"degree", t.degree}, {"eps", t.eps}, {"axis", t.axis}});
        j["terms"] = terms;
        break;
    }
    case BodyKind::tabulated: j["grid"] = Json{{"shape", d.grid.shape}, {"values", d.grid.values}}; break;
    case BodyKind::scaled:
        j["factor"] = d.factor;
        j["base"] = body_to_json(d.children.front());
        break;
    case BodyKind::derived:
        j["generator"] = body_to_json(d.children.front());
        j["resolution"] = d.resolution;
        break;
    }
    return j;
}

Scenario scenario_from_json(const Json& doc)
{
    const std::string root = "scenario";
    check_keys(doc, root, {"schema", "name", "dim", "mode", "zvavitch_orientation", "K", "L", "densities",
                           "decomposition", "quadrature", "truncation_degree", "pd", "tolerances"});
    if (text(doc, "schema", root) != kScenarioSchema)
        fail(root + ".schema", std::string("expected \"") + kScenarioSchema + "\"");
    Scenario s;
    s.name = text(doc, "name", root, std::string("scenario"));
    s.dim = static_cast<int>(integer(doc, "dim", root));
    if (s.dim < 3) fail(root + ".dim", "dimension must be >= 3");

    const std::string mode = text(doc, "mode", root, std::string("main_theorem"));
    if (mode == "main_theorem")
        s.mode = Mode::main_theorem;
    else if (mode == "zvavitch")
        s.mode = Mode::zvavitch;
    else
        fail(root + ".mode", "expected \"main_theorem\" or \"zvavitch\"");

    const Json* orientation = find(doc, "zvavitch_orientation");
    if (orientation && s.mode != Mode::zvavitch)
        fail(root + ".zvavitch_orientation", "only allowed in zvavitch mode");
    const std::string o = text(doc, "zvavitch_orientation", root, std::string("non_increasing"));
    if (o == "non_increasing")
        s.orientation = Orientation::non_increasing;
    else if (o == "non_decreasing")
        s.orientation = Orientation::non_decreasing;
    else
        fail(root + ".zvavitch_orientation", "expected \"non_increasing\" or \"non_decreasing\"");

    const Json* k = find(doc, "K");
    const Json* l = find(doc, "L");
    if (!k) fail(root + ".K", "missing required field");
    if (!l) fail(root + ".L", "missing required field");
    s.K = body_from_json(*k, s.dim, root + ".K");
    s.L = body_from_json(*l, s.dim, root + ".L");

    if (const Json* d = find(doc, "densities")) {
        const std::string p = root + ".densities";
        check_keys(*d, p, {"f_section", "f_volume", "g_section", "g_volume"});
        if (const Json* x = find(*d, "f_section")) s.f_section = density_from_json(*x, p + ".f_section");
        if (const Json* x = find(*d, "f_volume")) s.f_volume = density_from_json(*x, p + ".f_volume");
        if (const Json* x = find(*d, "g_section")) s.g_section = density_from_json(*x, p + ".g_section");
        if (const Json* x = find(*d, "g_volume")) s.g_volume = density_from_json(*x, p + ".g_volume");
    }

    const Json* dec = find(doc, "decomposition");
    if (s.mode == Mode::zvavitch) {
        if (dec) fail(root + ".decomposition", "not allowed in zvavitch mode (the pair is derived from h)");
    } else {
        if (!dec) fail(root + ".decomposition", "missing required field in main_theorem mode");
        const std::string p = root + ".decomposition";
        check_keys(*dec, p, {"a", "b"});
        const Json* a = find(*dec, "a");
        const Json* b = find(*dec, "b");
        s.decomposition.a = a ? profile_from_json(*a, p + ".a") : RadialProfile::zero();
        s.decomposition.b = b ? profile_from_json(*b, p + ".b") : RadialProfile::zero();
    }

    s.quadrature = default_quadrature(s.dim);
    if (const Json* q = find(doc, "quadrature")) {
        const std::string p = root + ".quadrature";
        check_keys(*q, p, {"scheme", "resolution", "seed", "radial_order", "eval_resolution", "section_resolution",
                           "xi_resolution"});
        QuadratureConfig& c = s.quadrature;
        if (find(*q, "scheme")) {
            c.scheme = at_path(p + ".scheme", [&] { return quadrature_scheme_from_string(text(*q, "scheme", p)); });
        }
        c.resolution = static_cast<int>(integer(*q, "resolution", p, c.resolution));
        const long long seed = integer(*q, "seed", p, static_cast<long long>(c.seed));
        if (seed < 0) fail(p + ".seed", "expected a nonnegative integer");
        c.seed = static_cast<std::uint64_t>(seed);
        c.radial_order = static_cast<int>(integer(*q, "radial_order", p, c.radial_order));
        c.eval_resolution = static_cast<int>(integer(*q, "eval_resolution", p, c.eval_resolution));
        c.section_resolution = static_cast<int>(integer(*q, "section_resolution", p, c.section_resolution));
        c.xi_resolution = static_cast<int>(integer(*q, "xi_resolution", p, c.xi_resolution));
    }
    s.truncation_degree = static_cast<int>(integer(doc, "truncation_degree", root, s.truncation_degree));
    if (const Json* pd = find(doc, "pd")) {
        const std::string p = root + ".pd";
        check_keys(*pd, p, {"tol", "tail_threshold"});
        s.pd_tol = number(*pd, "tol", p, s.pd_tol);
        s.pd_tail_threshold = number(*pd, "tail_threshold", p, s.pd_tail_threshold);
    }
    if (const Json* t = find(doc, "tolerances")) {
        const std::string p = root + ".tolerances";
        check_keys(*t, p, {"hypothesis", "conclusion", "decomposition"});
        s.tolerances.hypothesis = number(*t, "hypothesis", p, s.tolerances.hypothesis);
        s.tolerances.conclusion = number(*t, "conclusion", p, s.tolerances.conclusion);
        s.tolerances.decomposition = number(*t, "decomposition", p, s.tolerances.decomposition);
    }
    validate(s);
    return s;
}

Scenario parse_scenario(const std::string& input)
{
    Json doc;
    try {
        doc = Json::parse(input);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < input.size(); ++i) {
            if (input[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw Error(ErrorKind::validation,
                    "JSON syntax error at line " + std::to_string(line) + ", column " + std::to_string(column));
    }
    return scenario_from_json(doc);
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::validation, "cannot open scenario file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

Json scenario_to_json(const Scenario& s)
{
    Json j;
    j["schema"] = kScenarioSchema;
    j["name"] = s.name;
    j["dim"] = s.dim;
    j["mode"] = to_string(s.mode);
    if (s.mode == Mode::zvavitch) j["zvavitch_orientation"] = to_string(s.orientation);
    j["K"] = body_to_json(s.K);
    j["L"] = body_to_json(s.L);
    j["densities"] = Json{{"f_section", density_to_json(s.f_section)},
                          {"f_volume", density_to_json(s.f_volume)},
                          {"g_section", density_to_json(s.g_section)},
                          {"g_volume", density_to_json(s.g_volume)}};
    if (s.mode == Mode::main_theorem)
        j["decomposition"] = Json{{"a", profile_to_json(s.decomposition.a)}, {"b", profile_to_json(s.decomposition.b)}};
    const QuadratureConfig& q = s.quadrature;
    j["quadrature"] = Json{{"scheme", to_string(q.scheme)},
                           {"resolution", q.resolution},
                           {"seed", q.seed},
                           {"radial_order", q.radial_order},
                           {"eval_resolution", q.eval_resolution},
                           {"section_resolution", q.section_resolution},
                           {"xi_resolution", q.xi_resolution}};
    j["truncation_degree"] = s.truncation_degree;
    j["pd"] = Json{{"tol", s.pd_tol}, {"tail_threshold", s.pd_tail_threshold}};
    j["tolerances"] = Json{{"hypothesis", s.tolerances.hypothesis},
                           {"conclusion", s.tolerances.conclusion},
                           {"decomposition", s.tolerances.decomposition}};
    return j;
}

Json report_to_json(const VerificationReport& r)
{
    Json j;
    j["schema"] = kReportSchema;
    j["scenario"] = scenario_to_json(r.scenario);
    j["verdict"] = r.verdict;
    j["exit_code"] = r.exit_code;
    j["vacuous"] = r.vacuous;

    Json violations = Json::array();
    for (const auto& v : r.decomposition.violations)
        violations.push_back(
            Json{{"kind", to_string(v.kind)}, {"direction", v.direction}, {"r", v.r}, {"magnitude", v.magnitude}});
    j["decomposition"] = Json{{"ok", r.decomposition.ok},
                              {"rays", r.decomposition.rays},
                              {"samples", r.decomposition.samples},
                              {"violation_count", r.decomposition.violation_count},
                              {"max_sum_defect", r.decomposition.max_sum_defect},
                              {"violations", violations}};

    if (r.vacuous) {
        j["pd"] = Json{{"evaluated", false}};
    } else {
        const PDReport& p = r.pd;
        j["pd"] = Json{{"evaluated", true},
                       {"verdict", to_string(p.verdict)},
                       {"statistic", to_string(p.statistic)},
                       {"min_value", p.min_value},
                       {"min_direction", p.min_direction},
                       {"raw_min", p.raw_min},
                       {"scale", p.scale},
                       {"tail_energy", p.tail_energy},
                       {"tail_margin", p.tail_margin},
                       {"decision_band", p.decision_band},
                       {"tol", p.tol},
                       {"tail_threshold", p.tail_threshold},
                       {"smoothing", p.smoothing},
                       {"evaluation_resolution", p.evaluation ? p.evaluation->resolution() : 0},
                       {"transformed_density", p.transformed_density}};
    }

    const HypothesisResult& h = r.hypothesis;
    j["hypothesis"] = Json{{"ok", h.ok},
                           {"min_margin", h.min_margin},
                           {"scale", h.scale},
                           {"xi_count", h.margins.size()},
                           {"margins", h.margins}};
    j["conclusion"] = Json{{"lhs", r.conclusion.lhs},
                           {"rhs", r.conclusion.rhs},
                           {"scale", r.conclusion.scale},
                           {"ok", r.conclusion.ok}};
    j["endpoint_bound"] = Json{{"samples", r.endpoint.samples},
                               {"k_minus_l", r.endpoint.k_side},
                               {"l_minus_k", r.endpoint.l_side},
                               {"violations", r.endpoint.violations},
                               {"worst", r.endpoint.worst}};
    return j;
}

namespace {

std::string format_double(double v)
{
    if (!std::isfinite(v)) return std::isnan(v) ? "null" : (v > 0 ? "1e999" : "-1e999");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_json(std::ostringstream& os, const Json& j, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (const auto& item : j.items()) {
            if (!first) os << ",\n";
            first = false;
            os << inner << Json(item.key()).dump() << ": ";
            write_json(os, item.value(), indent + 1);
        }
        os << "\n" << pad << "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        const bool scalars = std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_primitive(); });
        if (scalars) {
            os << "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ", ";
                write_json(os, j[i], indent + 1);
            }
            os << "]";
            return;
        }
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) os << ",\n";
            os << inner;
            write_json(os, j[i], indent + 1);
        }
        os << "\n" << pad << "]";
        return;
    }
    case Json::value_t::number_float: os << format_double(j.get<double>()); return;
    default: os << j.dump(); return;
    }
}

}  // namespace

std::string dump_json(const Json& j)
{
    std::ostringstream os;
    write_json(os, j, 0);
    os << "\n";
    return os.str();
}

std::string section_profile_csv(const HypothesisResult& result, int dim)
{
    std::ostringstream os;
    os << "xi_index";
    for (int d = 0; d < dim; ++d) os << ",xi_" << d;
    os << ",margin\n";
    const auto n = static_cast<std::size_t>(dim);
    for (std::size_t i = 0; i < result.margins.size(); ++i) {
        os << i;
        for (std::size_t d = 0; d < n; ++d) os << ',' << format_double(result.xi[i * n + d]);
        os << ',' << format_double(result.margins[i]) << '\n';
    }
    return os.str();
}

const std::vector<std::string>& builtin_ids()
{
    static const std::vector<std::string> ids = {"example-3.1", "example-3.2", "example-3.3", "zvavitch-lebesgue"};
    return ids;
}

namespace {

Json terms(std::initializer_list<std::pair<double, double>> list)
{
    Json t = Json::array();
    for (const auto& [c, alpha] : list) t.push_back(Json{{"c", c}, {"alpha", alpha}});
    return Json{{"terms", t}};
}

// Largest section area of ρ = 1 + ε P_2(<v, e_3>) is at ξ ⊥ e_3. With
// R P_m = 2π P_m(0) P_m and P_2^2 = 1/5 + (2/7) P_2 + (18/35) P_4 it equals
// (1/2) [2π + επ + ε²(2π/5 + π/7 + (18/35)(3π/4)(3/8))].
double example32_scale(double eps)
{
    const double pi = std::numbers::pi;
    const double area = 0.5 * (2.0 * pi + eps * pi +
                               eps * eps * (2.0 * pi / 5.0 + pi / 7.0 + (18.0 / 35.0) * (3.0 * pi / 4.0) * 0.375));
    return std::sqrt(pi / area);
}

Json example_document(const std::string& id, double eps)
{
    Json j;
    j["schema"] = kScenarioSchema;
    j["dim"] = 3;
    if (id == "example-3.1") {
        // K from M = ball(1): ρ_K^{-1} = ∫_{M ∩ v^⊥} |x|^2 dx, L = 0.9 K.
        j["name"] = id;
        j["mode"] = "main_theorem";
        const Json derived = Json{{"kind", "derived"}, {"generator", Json{{"kind", "ball"}, {"r", 1.0}}}, {"resolution", 24}};
        j["K"] = derived;
        j["L"] = Json{{"kind", "scaled"}, {"factor", 0.9}, {"base", derived}};
        j["densities"] = Json{{"f_section", terms({{1.0, 2.0}})},
                              {"f_volume", terms({{1.0, 0.0}})},
                              {"g_section", terms({{1.0, 2.0}})},
                              {"g_volume", terms({{1.0, 0.0}})}};
        j["decomposition"] = Json{{"a", terms({{1.0, 1.0}})}, {"b", Json{{"terms", Json::array()}}}};
        return j;
    }
    if (id == "example-3.2") {
        // f_{n-1} = 1, f_n = |x|^{-n}; L's largest central section equals the ball's.
        const double pert = 0.2;
        j["name"] = id;
        j["mode"] = "main_theorem";
        j["K"] = Json{{"kind", "ball"}, {"r", 1.0}};
        j["L"] = Json{{"kind", "perturbed_ball"},
                      {"r", example32_scale(pert)},
                      {"terms", Json::array({Json{{"degree", 2}, {"eps", pert}, {"axis", {0.0, 0.0, 1.0}}}})}};
        j["densities"] = Json{{"f_section", terms({{1.0, 0.0}})},
                              {"f_volume", terms({{1.0, -3.0}})},
                              {"g_section", terms({{1.0, 0.0}})},
                              {"g_volume", terms({{1.0, -3.0}})}};
        j["decomposition"] = Json{{"a", terms({{1.0, 2.0}})}, {"b", Json{{"terms", Json::array()}}}};
        return j;
    }
    if (id == "example-3.3") {
        j["name"] = id;
        j["mode"] = "main_theorem";
        const double a = eps == 0.1 ? kExample33Semiaxis : example33_semiaxis(eps) - 1e-4;
        j["K"] = Json{{"kind", "ball"}, {"r", 1.0}};
        j["L"] = Json{{"kind", "ellipsoid"}, {"semiaxes", {a, a, 1.3}}};
        j["densities"] = Json{{"f_section", terms({{eps, 3.0}, {1.0, 1.0}})},
                              {"f_volume", terms({{1.0, 1.0}})},
                              {"g_section", terms({{eps, 5.0}, {1.0, 3.0}})},
                              {"g_volume", terms({{1.0, 3.0}})}};
        j["decomposition"] = Json{{"a", terms({{eps, 1.0}})}, {"b", terms({{1.0, -1.0}})}};
        return j;
    }
    // Lebesgue measure; L = ellipsoid(1, 1, 1.3) / sqrt(1.3) has largest section π.
    j["name"] = id;
    j["mode"] = "zvavitch";
    j["zvavitch_orientation"] = "non_increasing";
    const double s = 1.0 / std::sqrt(1.3);
    j["K"] = Json{{"kind", "ball"}, {"r", 1.0}};
    j["L"] = Json{{"kind", "ellipsoid"}, {"semiaxes", {s, s, 1.3 * s}}};
    return j;
}

}  // namespace

double example33_semiaxis(double eps)
{
    if (!(eps > 0.0)) throw Error(ErrorKind::domain, "example 3.3 needs ε > 0");
    const StarBody K = StarBody::ball(3, 1.0);
    const Density f_section({{eps, 3.0}, {1.0, 1.0}});
    const Density g_section({{eps, 5.0}, {1.0, 3.0}});
    // By symmetry the binding section is ξ ⊥ e_3; check it on a fine rule.
    const SphericalQuadrature inner = build_sphere_rule_any_dim(2, 96);
    const RadialRule radial(24);
    const Vec xi = {1.0, 0.0, 0.0};
    const SubsphereQuadrature sub = build_subsphere_quadrature(xi, inner);
    auto margin = [&](double a) {
        const StarBody L = StarBody::ellipsoid({a, a, 1.3});
        return section_measure(Region::K_minus_L, f_section, K, L, sub, radial, Exec::serial) -
               section_measure(Region::L_minus_K, g_section, K, L, sub, radial, Exec::serial);
    };
    double lo = 0.3, hi = 1.0;
    if (!(margin(lo) > 0.0)) throw Error(ErrorKind::degenerate_scenario, "example 3.3 bisection has no feasible start");
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (margin(mid) >= 0.0 ? lo : hi) = mid;
    }
    return lo;
}

Scenario builtin_scenario(const std::string& raw, std::optional<double> eps)
{
    std::string id = raw;
    if (id.rfind("example-", 0) != 0 && id != "zvavitch-lebesgue") id = "example-" + id;
    const auto& ids = builtin_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end())
        throw Error(ErrorKind::validation, "unknown example id \"" + raw + "\"");
    const double e = eps.value_or(0.1);
    if (!(e > 0.0) || !(e < 1.0)) throw Error(ErrorKind::validation, "eps must lie in (0, 1)");
    return scenario_from_json(example_document(id, e));
}

}  // namespace bp
