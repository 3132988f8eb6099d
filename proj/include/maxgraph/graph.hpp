#pragma once

#include "maxgraph/field.hpp"
#include "maxgraph/metrics.hpp"
#include "maxgraph/types.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>

namespace maxgraph::graph {

using metrics::ConformalMetric;
using metrics::MetricField2x2;

enum class Signature { Riemannian, Lorentzian };

/// Sign of du (x) du in the induced metric: +1 Riemannian, -1 Lorentzian.
constexpr double sign(Signature s) { return s == Signature::Riemannian ? 1.0 : -1.0; }

/// Points with 1 - |Du|^2 below this are treated as numerically lightlike.
inline constexpr double kLightlikeGuard = 1e-10;

/// Graph of a height function u over (Omega, g_M) in M x R or M x R_1.
class GraphSurface {
public:
    using MarginFn = std::function<double(const Point&)>;

    /// `margin`, when given, evaluates 1 -/+ |Du|^2 in a cancellation-free
    /// form; it must agree with the naive expression.
    GraphSurface(ConformalMetric metric, ScalarField height, Signature signature,
                 MarginFn margin = {});

    const ConformalMetric& metric() const { return metric_; }
    const ScalarField& height() const { return height_; }
    Signature signature() const { return signature_; }
    bool has_stable_margin() const { return static_cast<bool>(margin_); }

    /// |Du|^2 with respect to g_M.
    double gradient_norm_sq(const Point& p) const;
    /// 1 + sign * |Du|^2: 1 - |Du|^2 for Lorentzian, 1 + |Du|^2 for Riemannian.
    double spacelike_margin(const Point& p) const;

    /// Lorentzian only: throws NonSpacelikeError when the margin is below
    /// kLightlikeGuard.
    void require_spacelike(const Point& p) const;

    /// Theta = -1/sqrt(1 - |Du|^2) (Lorentzian).
    double theta(const Point& p) const;

private:
    ConformalMetric metric_;
    ScalarField height_;
    Signature signature_;
    MarginFn margin_;
};

/// Induced metric g = g_M -/+ du (x) du in coordinates at p.
Mat2 induced_metric(const GraphSurface& s, const Point& p);
/// Same as a field, with analytic entry derivatives.
MetricField2x2 induced_metric_field(const GraphSurface& s);

struct CausalReport {
    bool spacelike = false;
    std::optional<double> theta;  // Lorentzian spacelike points only
    double gradient_norm_sq = 0.0;
};

CausalReport causal_report(const GraphSurface& s, const Point& p);

/// Future-pointing unit normal (Du + d_t)/sqrt(1 - |Du|^2) split into base
/// and time components.
struct Normal {
    Vec2 base;
    double time = 0.0;
};

Normal gauss_map(const GraphSurface& s, const Point& p);

/// Lorentzian inner product of two (base, time) vectors at p.
double ambient_inner(const ConformalMetric& m, const Point& p, const Normal& a, const Normal& b);

/// Matrix of the shape operator in the coordinate basis.
Mat2 shape_operator(const GraphSurface& s, const Point& p);

/// H with 2H = Div(Du / sqrt(1 -/+ |Du|^2)).
double mean_curvature(const GraphSurface& s, const Point& p);

/// Normalized gradient Du / sqrt(1 + sign |Du|^2) with analytic component
/// derivatives.
VectorField normalized_gradient(const ScalarField& u, const ConformalMetric& m, double sign);

/// The coordinate differential of u scaled by 1/sqrt(1 + sign |Du|^2), with
/// its Jacobian; the 1-form behind the normalized gradient.
struct NormalizedDifferential {
    Vec2 value;
    Mat2 jacobian;  // (k, j) = d/dx_j of component k
    double scale_sq = 1.0;  // 1 + sign |Du|^2
};

NormalizedDifferential normalized_differential(const ScalarField& u, const ConformalMetric& m,
                                               double sign, const Point& p);

/// Minimal[u] = Div(Du / sqrt(1 + |Du|^2)).
double residual_minimal(const ScalarField& u, const ConformalMetric& m, const Point& p);
/// Maximal[w] = Div(Dw / sqrt(1 - |Dw|^2)); requires a spacelike point.
double residual_maximal(const ScalarField& w, const ConformalMetric& m, const Point& p);
/// Explicit Euclidean expansion of Minimal[u] on the hyperbolic half-plane,
/// written with Delta_o u, |D_o u|^2 and Q(u).
double residual_minimal_halfplane(const ScalarField& u, const Point& p);
/// Q(u) = u_1^2 u_11 + 2 u_1 u_2 u_12 + u_2^2 u_22.
double q_term(const ScalarField& u, const Point& p);

struct ReportOptions {
    /// |H| at or below this marks the point maximal and enables the
    /// maximal-only identities.
    double maximal_tol = 1e-8;
    /// Step of the finite differences behind K_numeric.
    double brioschi_step = 1e-4;
    /// Steps of the finite-difference Laplacians of Theta-derived scalars.
    FdSteps oracle_steps{};
    /// Slack allowed below zero in the subharmonicity sign check.
    double sign_tol = 1e-6;
};

/// Geometric quantities and identity residuals at a point.
struct PointReport {
    Point point = Point::Zero();
    double theta = -1.0;
    double grad_h_norm_sq = 0.0;
    Vec2 grad_h = Vec2::Zero();
    double mean_curvature = 0.0;
    Mat2 shape_op = Mat2::Zero();
    double norm_A_sq = 0.0;
    double det_A = 0.0;
    double kappa_M = 0.0;
    double K_gauss_eq = 0.0;
    double K_numeric = 0.0;
    bool maximal = false;
    /// Laplacian of 1/Theta on the induced metric (finite differences).
    double laplace_inv_theta = 0.0;
    /// (1 - Theta)^2 K_hat = K - Delta log(1 - Theta).
    double khat_scaled = 0.0;
    /// Sign of Delta(1/Theta) >= 0; only decided where kappa_M >= 0.
    std::optional<bool> inv_theta_subharmonic;
    std::map<std::string, double> residuals;
};

PointReport invariant_report(const GraphSurface& s, const Point& p, const ReportOptions& opts = {});

}  // namespace maxgraph::graph
