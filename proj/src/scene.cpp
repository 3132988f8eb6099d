#include "maxgraph/scene.hpp"

#include "maxgraph/catalog.hpp"
#include "maxgraph/expr.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace maxgraph::scene {

using nlohmann::json;

namespace {

template <class Map>
const typename Map::mapped_type& lookup(const Map& m, const std::string& name, const char* kind) {
    const auto it = m.find(name);
    if (it == m.end()) throw ValidationError(std::string("unknown ") + kind + " '" + name + "'");
    return it->second;
}

std::string require_string(const json& j, const std::string& what) {
    if (!j.is_string()) throw ValidationError(what + " must be a string");
    return j.get<std::string>();
}

double bound(const json& j, double if_null, const std::string& what) {
    if (j.is_null()) return if_null;
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw ValidationError(what + " must be a number, null, \"inf\" or \"-inf\"");
}

expr::Expr parse_in(const std::string& text, const std::string& where,
                    const expr::VariableSet& vars = expr::VariableSet::planar()) {
    try {
        return expr::parse(text, vars);
    } catch (const expr::ParseError& e) {
        throw ValidationError(where + ": " + e.what());
    }
}

FieldDef parse_field(const std::string& name, const json& j, const graph::ConformalMetric& metric,
                     graph::Signature sig) {
    FieldDef f;
    if (j.is_string()) {
        f.source = j.get<std::string>();
        f.u = ScalarField::from_expr(parse_in(f.source, "field '" + name + "'"));
        return f;
    }
    if (j.is_object() && j.contains("catalog")) {
        const std::string entry = require_string(j.at("catalog"), "field '" + name + "' catalog name");
        const catalog::CatalogEntry e = catalog::get_example(entry);
        f.source = "catalog:" + entry;
        f.u = e.u;
        // The stable margin is only valid with the entry's own geometry.
        if (e.metric.name() == metric.name() && e.signature == sig) f.margin = e.margin;
        return f;
    }
    throw ValidationError("field '" + name + "' must be an expression string or {\"catalog\": name}");
}

GridSpec parse_grid(const std::string& name, const json& j) {
    try {
        GridSpec g;
        g.x1_min = j.at("x1").at(0);
        g.x1_max = j.at("x1").at(1);
        g.x2_min = j.at("x2").at(0);
        g.x2_max = j.at("x2").at(1);
        g.nx = j.at("n").at(0);
        g.ny = j.at("n").at(1);
        g.validate();
        return g;
    } catch (const json::exception& e) {
        throw ValidationError("grid '" + name + "' needs x1:[a,b], x2:[c,d], n:[nx,ny]");
    } catch (const ValidationError& e) {
        throw ValidationError("grid '" + name + "': " + e.what());
    }
}

}  // namespace

graph::ConformalMetric parse_metric(const json& j) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "euclidean") return graph::ConformalMetric::euclidean();
        if (name == "hyperbolic-half-plane") return graph::ConformalMetric::hyperbolic_half_plane();
        if (name == "round-sphere") return graph::ConformalMetric::round_sphere();
        throw ValidationError("unknown metric preset '" + name + "'");
    }
    if (j.is_object() && j.contains("lambda")) {
        const std::string text = require_string(j.at("lambda"), "metric lambda");
        parse_in(text, "metric lambda");
        metrics::Rect domain;
        if (j.contains("domain")) {
            const json& d = j.at("domain");
            if (!d.is_array() || d.size() != 4) throw ValidationError("metric domain must have 4 entries");
            const double inf = std::numeric_limits<double>::infinity();
            domain = {bound(d[0], -inf, "domain"), bound(d[1], inf, "domain"), bound(d[2], -inf, "domain"),
                      bound(d[3], inf, "domain")};
            if (!(domain.x1_min < domain.x1_max && domain.x2_min < domain.x2_max)) {
                throw ValidationError("metric domain bounds must satisfy min < max");
            }
        }
        return graph::ConformalMetric::from_expression(text, domain);
    }
    throw ValidationError("metric must be a preset name or {\"lambda\": ..., \"domain\": [...]}");
}

const FieldDef& Scene::field(const std::string& name) const { return lookup(fields, name, "field"); }
const CurveDef& Scene::curve(const std::string& name) const { return lookup(curves, name, "curve"); }
const GridSpec& Scene::grid(const std::string& name) const { return lookup(grids, name, "grid"); }
const ProblemDef& Scene::problem(const std::string& name) const {
    return lookup(problems, name, "problem");
}

graph::GraphSurface Scene::surface(const std::string& field_name) const {
    const FieldDef& f = field(field_name);
    return {metric, f.u, signature, f.margin};
}

solver::DirichletProblem Scene::dirichlet(const std::string& problem_name) const {
    const ProblemDef& p = problem(problem_name);
    solver::DirichletProblem d{metric, signature, grid(p.grid), field(p.boundary).u};
    d.initial = p.initial;
    return d;
}

Scene Scene::from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("scene must be a JSON object");
    Scene s;
    s.metric = parse_metric(j.value("metric", json("euclidean")));
    const std::string sig = j.contains("signature") ? require_string(j.at("signature"), "signature")
                                                    : std::string("lorentzian");
    if (sig == "lorentzian") {
        s.signature = graph::Signature::Lorentzian;
    } else if (sig == "riemannian") {
        s.signature = graph::Signature::Riemannian;
    } else {
        throw ValidationError("signature must be \"lorentzian\" or \"riemannian\"");
    }

    const json fields = j.value("fields", json::object());
    for (const auto& [name, def] : fields.items()) {
        s.fields.emplace(name, parse_field(name, def, s.metric, s.signature));
    }
    const json grids = j.value("grids", json::object());
    for (const auto& [name, def] : grids.items()) {
        s.grids.emplace(name, parse_grid(name, def));
    }
    const json curves = j.value("curves", json::object());
    for (const auto& [name, def] : curves.items()) {
        try {
            const auto& iv = def.at("interval");
            const double inf = std::numeric_limits<double>::infinity();
            const double a = bound(iv.at(0), -inf, "curve interval"), b = bound(iv.at(1), inf, "curve interval");
            bool open_a = false, open_b = false;
            if (def.contains("open")) {
                open_a = def.at("open").at(0).get<bool>();
                open_b = def.at("open").at(1).get<bool>();
            }
            const std::string x1 = require_string(def.at("x1"), "curve x1");
            const std::string x2 = require_string(def.at("x2"), "curve x2");
            const auto vars = expr::VariableSet::curve_parameter();
            parse_in(x1, "curve '" + name + "' x1", vars);
            parse_in(x2, "curve '" + name + "' x2", vars);
            CurveDef c{completeness::Curve::from_expressions(name, x1, x2, a, b, open_a, open_b),
                       require_string(def.at("field"), "curve field")};
            s.field(c.field);
            s.curves.emplace(name, std::move(c));
        } catch (const json::exception&) {
            throw ValidationError("curve '" + name + "' needs x1, x2, interval:[a,b], field");
        }
    }
    const json problems = j.value("problems", json::object());
    for (const auto& [name, def] : problems.items()) {
        try {
            ProblemDef p;
            p.boundary = require_string(def.at("boundary"), "problem boundary");
            p.grid = require_string(def.at("grid"), "problem grid");
            const std::string init = def.value("initial", std::string("harmonic"));
            if (init == "harmonic") {
                p.initial = solver::InitialGuess::Harmonic;
            } else if (init == "boundary") {
                p.initial = solver::InitialGuess::Boundary;
            } else {
                throw ValidationError("problem '" + name + "' initial must be harmonic or boundary");
            }
            if (def.contains("exact")) p.exact = require_string(def.at("exact"), "problem exact");
            s.field(p.boundary);
            s.grid(p.grid);
            if (p.exact) s.field(*p.exact);
            s.problems.emplace(name, std::move(p));
        } catch (const json::exception&) {
            throw ValidationError("problem '" + name + "' needs boundary and grid names");
        }
    }
    return s;
}

Scene Scene::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scene file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("scene file '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

}  // namespace maxgraph::scene
