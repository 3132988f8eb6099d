#pragma once

#include "maxgraph/catalog.hpp"
#include "maxgraph/completeness.hpp"
#include "maxgraph/duality.hpp"
#include "maxgraph/graph.hpp"
#include "maxgraph/grid.hpp"
#include "maxgraph/solver.hpp"

#include <json.hpp>

namespace maxgraph::serialize {

using Json = nlohmann::ordered_json;

inline constexpr const char* kGridSchema = "maxgraph-grid/1";

Json to_json(const graph::PointReport& r);
Json to_json(const solver::SolveReport& r);
Json to_json(const solver::RefinementStudy& s);
Json to_json(const completeness::LengthResult& r);
Json to_json(const completeness::ScanResult& r);
/// Diagnostics only; node values go through grid_to_json.
Json to_json(const duality::DualityResult& r);

/// {"schema", "bounds", "resolution", "values"} with row-major values.
Json grid_to_json(const Grid2D& g);
Grid2D grid_from_json(const Json& j);

/// Scene-file snippet that references the entry by name.
Json catalog_snippet(const catalog::CatalogEntry& e);

}  // namespace maxgraph::serialize
