#pragma once

#include "maxgraph/completeness.hpp"
#include "maxgraph/graph.hpp"
#include "maxgraph/grid.hpp"
#include "maxgraph/solver.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>

namespace maxgraph::scene {

struct FieldDef {
    std::string source;  // expression text or "catalog:<name>"
    ScalarField u;
    graph::GraphSurface::MarginFn margin;
};

struct CurveDef {
    completeness::Curve curve;
    std::string field;
};

struct ProblemDef {
    std::string boundary;  // field name
    std::string grid;      // grid name
    solver::InitialGuess initial = solver::InitialGuess::Harmonic;
    std::optional<std::string> exact;  // field used as the error reference
};

/// A validated scene file: every expression parses and every name resolves.
struct Scene {
    graph::ConformalMetric metric = graph::ConformalMetric::euclidean();
    graph::Signature signature = graph::Signature::Lorentzian;
    std::map<std::string, FieldDef> fields;
    std::map<std::string, CurveDef> curves;
    std::map<std::string, GridSpec> grids;
    std::map<std::string, ProblemDef> problems;

    const FieldDef& field(const std::string& name) const;
    const CurveDef& curve(const std::string& name) const;
    const GridSpec& grid(const std::string& name) const;
    const ProblemDef& problem(const std::string& name) const;

    graph::GraphSurface surface(const std::string& field_name) const;
    solver::DirichletProblem dirichlet(const std::string& problem_name) const;

    /// Throws ValidationError describing the first problem found.
    static Scene from_json(const nlohmann::json& j);
    static Scene load(const std::string& path);
};

/// Metric from a scene "metric" value: a preset name or
/// {"lambda": expr, "domain": [x1_min, x1_max, x2_min, x2_max]} with null
/// for an unbounded side.
graph::ConformalMetric parse_metric(const nlohmann::json& j);

}  // namespace maxgraph::scene
