#pragma once

#include "maxgraph/field.hpp"
#include "maxgraph/grid.hpp"
#include "maxgraph/metrics.hpp"

namespace maxgraph::duality {

using metrics::ConformalMetric;

enum class Direction {
    MinimalToMaximal,  // J(Du / sqrt(1 + |Du|^2))
    MaximalToMinimal,  // J(Du / sqrt(1 - |Du|^2)), potential -u
};

/// Metric gradient Dw of the dual potential at p.
Vec2 dual_gradient(const ScalarField& u, const ConformalMetric& m, const Point& p,
                   Direction direction = Direction::MinimalToMaximal);

/// Coordinate partials (w_x1, w_x2) of the dual potential, lambda * Dw.
Vec2 dual_partials(const ScalarField& u, const ConformalMetric& m, const Point& p,
                   Direction direction = Direction::MinimalToMaximal);

/// Dual potential's partials and Hessian as a field without a value
/// function; evaluating its value throws.
ScalarField dual_gradient_field(const ScalarField& u, const ConformalMetric& m,
                                Direction direction = Direction::MinimalToMaximal);

/// | |Dw|^2 - |Du|^2 / (1 + |Du|^2) | at p.
double norm_identity_check(const ScalarField& u, const ConformalMetric& m, const Point& p);

/// Euclidean curl d1 w_x2 - d2 w_x1 of the dual 1-form; equals
/// lambda * Minimal[u] (or lambda * Maximal[u] in the reverse direction).
double closedness_defect(const ScalarField& u, const ConformalMetric& m, const Point& p,
                         Direction direction = Direction::MinimalToMaximal);

struct Options {
    Direction direction = Direction::MinimalToMaximal;
    /// Certification threshold on the sup of the closedness defect.
    double closed_tol = 1e-8;
};

struct DualityResult {
    /// Value from the nearest node plus the integral over a short L-path to
    /// the point; partials and Hessian exact from u.
    ScalarField w;
    Grid2D values;
    Point basepoint = Point::Zero();
    Direction direction = Direction::MinimalToMaximal;
    double closedness_sup = 0.0;
    double path_independence_err = 0.0;
    /// Minimum over nodes of 1 - |Dw|^2 (MinimalToMaximal) or of
    /// 1 + |Dw|^2 (reverse).
    double min_margin = 0.0;
    bool certified = false;
};

/// Reconstructs w with w(basepoint) = 0 by 32-point Gauss-Legendre
/// integration of the dual partials along axis-aligned L-paths, one panel per
/// grid spacing. Node values follow the path "x1 first, then x2"; the other
/// ordering is only used for path_independence_err.
DualityResult reconstruct_dual(const ScalarField& u, const ConformalMetric& m, const GridSpec& grid,
                               const Point& basepoint, const Options& opts = {});

/// Sup over nodes of |dual_gradient(w, reverse direction) + Du|_m; the
/// double dual has gradient -Du.
double roundtrip_check(const ScalarField& u, const ConformalMetric& m, const GridSpec& grid,
                       const DualityResult& dual);

}  // namespace maxgraph::duality
