#pragma once

#include "maxgraph/field.hpp"
#include "maxgraph/types.hpp"

#include <functional>
#include <limits>
#include <string>

namespace maxgraph::metrics {

/// Axis-aligned rectangle; infinite bounds are allowed.
struct Rect {
    double x1_min = -std::numeric_limits<double>::infinity();
    double x1_max = std::numeric_limits<double>::infinity();
    double x2_min = -std::numeric_limits<double>::infinity();
    double x2_max = std::numeric_limits<double>::infinity();

    /// Strict interior test with an inward margin.
    bool contains(const Point& p, double margin = 0.0) const;
    bool bounded() const;
};

/// Riemannian metric lambda(x) (dx1^2 + dx2^2) on an open planar domain.
class ConformalMetric {
public:
    ConformalMetric(std::string name, ScalarField lambda, Rect domain);

    static ConformalMetric euclidean();
    /// lambda = 1/x2^2 on {x2 > 0}.
    static ConformalMetric hyperbolic_half_plane();
    /// Stereographic round sphere, lambda = 4/(1+x1^2+x2^2)^2.
    static ConformalMetric round_sphere();
    static ConformalMetric from_expression(const std::string& lambda_text, Rect domain);

    const std::string& name() const { return name_; }
    const ScalarField& lambda_field() const { return lambda_; }
    const Rect& domain() const { return domain_; }

    double lambda(const Point& p) const { return lambda_.value(p); }

    /// Membership with the stencil-safety margin of 3 h_fd.
    bool contains(const Point& p) const;
    /// Throws DomainError when `p` is outside the domain or lambda(p) <= 0.
    void require(const Point& p) const;

    double inner(const Point& p, const Vec2& a, const Vec2& b) const { return lambda(p) * a.dot(b); }
    double norm_sq(const Point& p, const Vec2& v) const { return lambda(p) * v.squaredNorm(); }

private:
    std::string name_;
    ScalarField lambda_;
    Rect domain_;
};

/// Symmetric 2x2 metric field given by its entries.
struct MetricField2x2 {
    ScalarField g11;
    ScalarField g12;
    ScalarField g22;

    static MetricField2x2 from_conformal(const ConformalMetric& m);

    Mat2 at(const Point& p) const;
    bool positive_definite(const Point& p) const;
};

/// Metric gradient Df = (1/lambda) D_o f, as a coordinate vector.
Vec2 gradient(const ConformalMetric& m, const ScalarField& f, const Point& p);

/// Div X = Div_o X + <D_o log lambda, X>_o.
double divergence(const ConformalMetric& m, const VectorField& X, const Point& p);

/// Laplace-Beltrami operator (1/sqrt det g) d_i (sqrt det g g^{ij} d_j f).
/// Metric entry derivatives come from the entries' own partials. Throws
/// DomainError if g is not positive definite at p or at the neighbouring
/// points of a second-derivative stencil.
double laplace_beltrami(const MetricField2x2& g, const ScalarField& f, const Point& p);

/// Gaussian curvature -Delta_o(log lambda) / (2 lambda).
double gauss_curvature(const ConformalMetric& m, const Point& p);

/// Gaussian curvature of a general metric field by the Brioschi formula,
/// using the entries' own first and second partials.
double gauss_curvature(const MetricField2x2& g, const Point& p);

/// Positive quarter turn (a, b) -> (-b, a). For conformal metrics this is
/// also the metric's own rotation.
Vec2 rotate_j(const Vec2& v);

/// Christoffel symbols Gamma^k_{ij} of a conformal metric: gamma[k](i, j).
std::array<Mat2, 2> christoffel(const ConformalMetric& m, const Point& p);

/// Covariant derivative of a vector field: column j holds D_{e_j} X.
Mat2 covariant_jacobian(const ConformalMetric& m, const Vec2& X, const Mat2& dX, const Point& p);

}  // namespace maxgraph::metrics
