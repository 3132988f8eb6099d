#pragma once

#include "maxgraph/graph.hpp"

#include <functional>
#include <string>
#include <vector>

namespace maxgraph::completeness {

using graph::GraphSurface;
using metrics::ConformalMetric;

/// Regular planar curve s -> (x1(s), x2(s)) on (a, b). Endpoints may be
/// infinite; an open finite endpoint is never evaluated.
struct Curve {
    std::string name;
    std::function<Point(double)> position;
    std::function<Vec2(double)> velocity;
    double a = 0.0;
    double b = 1.0;
    bool open_a = false;
    bool open_b = false;

    /// Components as expressions in `s`; the velocity is their symbolic
    /// derivative.
    static Curve from_expressions(std::string name, const std::string& x1, const std::string& x2,
                                  double a, double b, bool open_a, bool open_b);
    /// Straight segment from p to q, parametrized on [0, 1].
    static Curve segment(const Point& p, const Point& q);

    /// Improper if an endpoint is infinite or open.
    bool improper_a() const;
    bool improper_b() const;
};

inline constexpr double kLengthCap = 1e3;

struct LengthOptions {
    double tol = 1e-9;
    /// Dyadic tails stop once this many successive tails are below tol/10.
    int quiet_tails = 3;
    int max_tails = 200;
    double length_cap = kLengthCap;
};

struct LengthResult {
    double length = 0.0;
    double error_estimate = 0.0;
    /// False means `length` is only a lower bound.
    bool converged = false;
    /// A tail stopped at a breakdown point and the remainder was estimated
    /// by geometric extrapolation of the last tails.
    bool extrapolated = false;
    int tails = 0;
};

/// Squared length g(X, X) of a base vector X at p under the induced metric.
/// Uses the surface's stable margin when it has one. Does not apply the
/// lightlike guard; throws NonSpacelikeError where 1 - |Du|^2 <= 0.
double induced_norm_sq(const GraphSurface& s, const Point& p, const Vec2& X);

/// Integral of sqrt(g(c', c')) over the curve's interval.
LengthResult curve_length(const GraphSurface& s, const Curve& c, const LengthOptions& opts = {});

/// Same integral under the base metric alone.
LengthResult base_length(const ConformalMetric& m, const Curve& c, const LengthOptions& opts = {});

enum class Verdict { FiniteLength, Inconclusive };

struct ProbeResult {
    std::string curve;
    Verdict verdict = Verdict::Inconclusive;
    LengthResult length;
};

/// Finite length below the cap certifies incompleteness along a divergent
/// curve; anything else is inconclusive.
std::vector<ProbeResult> ray_probe(const GraphSurface& s, const std::vector<Curve>& curves,
                                   const LengthOptions& opts = {});

struct ScanResult {
    double infimum = 0.0;
    Point argmin = Point::Zero();
};

/// Infimum over samples and unit directions of g(X, X) / g_ref(X, X).
ScanResult metric_ratio_scan(const GraphSurface& s, const ConformalMetric& reference,
                             const std::vector<Point>& samples);

}  // namespace maxgraph::completeness
