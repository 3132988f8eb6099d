#pragma once

#include "maxgraph/graph.hpp"

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace maxgraph::catalog {

enum class Property { Minimal, Maximal, Entire, Complete, Incomplete, TotallyGeodesic };

std::string property_name(Property p);

struct CatalogEntry {
    std::string name;
    std::string description;
    graph::ConformalMetric metric;
    graph::Signature signature;
    ScalarField u;
    std::set<Property> properties;
    /// Independent closed forms of (u_x1, u_x2), when known.
    std::optional<std::array<ScalarField, 2>> closed_form_partials;
    /// Cancellation-free 1 -/+ |Du|^2, when known.
    graph::GraphSurface::MarginFn margin;
    /// Expression text of u, when u is closed-form.
    std::optional<std::string> expression;

    graph::GraphSurface surface() const { return {metric, u, signature, margin}; }
    bool has(Property p) const { return properties.count(p) > 0; }
};

/// Names in catalog order.
const std::vector<std::string>& names();

/// Throws ValidationError for an unknown name.
CatalogEntry get_example(const std::string& name);

/// F(phi, k) = integral over [0, phi] of 1 / sqrt(1 - k^2 sin^2 t).
/// Requires |phi| <= pi/2 and 0 <= k < 1.
double elliptic_f(double phi, double k);

/// Smoothing of the flat incomplete graph on (-1, 1): phi(s) = a + b s^2 + c s^4.
struct FlatSmoothing {
    double a, b, c;
};
FlatSmoothing flat_smoothing();

}  // namespace maxgraph::catalog
