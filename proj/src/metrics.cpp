#include "maxgraph/metrics.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace maxgraph::metrics {

bool Rect::contains(const Point& p, double margin) const {
    return p.x() > x1_min + margin && p.x() < x1_max - margin && p.y() > x2_min + margin &&
           p.y() < x2_max - margin;
}

bool Rect::bounded() const {
    return std::isfinite(x1_min) && std::isfinite(x1_max) && std::isfinite(x2_min) &&
           std::isfinite(x2_max);
}

ConformalMetric::ConformalMetric(std::string name, ScalarField lambda, Rect domain)
    : name_(std::move(name)), lambda_(std::move(lambda)), domain_(domain) {}

ConformalMetric ConformalMetric::euclidean() {
    return {"euclidean", ScalarField::constant(1.0), Rect{}};
}

ConformalMetric ConformalMetric::hyperbolic_half_plane() {
    Rect upper;
    upper.x2_min = 0.0;
    return {"hyperbolic-half-plane", ScalarField::from_expr(expr::parse("1/x2^2")), upper};
}

ConformalMetric ConformalMetric::round_sphere() {
    return {"round-sphere", ScalarField::from_expr(expr::parse("4/(1+x1^2+x2^2)^2")), Rect{}};
}

ConformalMetric ConformalMetric::from_expression(const std::string& lambda_text, Rect domain) {
    return {"lambda:" + lambda_text, ScalarField::from_expr(expr::parse(lambda_text)), domain};
}

bool ConformalMetric::contains(const Point& p) const {
    return domain_.contains(p, 3.0 * kFdStep);
}

void ConformalMetric::require(const Point& p) const {
    if (!contains(p)) throw DomainError("point " + format_point(p) + " outside domain of " + name_);
    if (!(lambda(p) > 0.0)) {
        throw DomainError("conformal factor not positive at " + format_point(p) + " for " + name_);
    }
}

MetricField2x2 MetricField2x2::from_conformal(const ConformalMetric& m) {
    return {m.lambda_field(), ScalarField::constant(0.0), m.lambda_field()};
}

Mat2 MetricField2x2::at(const Point& p) const {
    Mat2 g;
    const double off = g12.value(p);
    g << g11.value(p), off, off, g22.value(p);
    return g;
}

bool MetricField2x2::positive_definite(const Point& p) const {
    const Mat2 g = at(p);
    return g(0, 0) > 0.0 && g.determinant() > 0.0;
}

Vec2 gradient(const ConformalMetric& m, const ScalarField& f, const Point& p) {
    m.require(p);
    return f.gradient(p) / m.lambda(p);
}

double divergence(const ConformalMetric& m, const VectorField& X, const Point& p) {
    m.require(p);
    const Mat2 J = X.jacobian(p);
    const Vec2 dlog = m.lambda_field().gradient(p) / m.lambda(p);
    return J.trace() + dlog.dot(X.value(p));
}

double laplace_beltrami(const MetricField2x2& g, const ScalarField& f, const Point& p) {
    const double reach = 2.0 * f.fd_steps().second;
    for (const Point& q : {p, Point(p + Vec2(reach, 0)), Point(p - Vec2(reach, 0)),
                           Point(p + Vec2(0, reach)), Point(p - Vec2(0, reach))}) {
        if (!g.positive_definite(q)) {
            throw DomainError("metric not positive definite at " + format_point(q));
        }
    }
    const double E = g.g11.value(p), F = g.g12.value(p), G = g.g22.value(p);
    const Vec2 dE = g.g11.gradient(p), dF = g.g12.gradient(p), dG = g.g22.gradient(p);
    const double det = E * G - F * F;
    const Vec2 ddet = dE * G + E * dG - 2.0 * F * dF;
    const double root = std::sqrt(det);

    // a = sqrt(det) g^{-1} = [[G, -F], [-F, E]] / sqrt(det)
    auto d_scaled = [&](double entry, const Vec2& d_entry) {
        return Vec2(d_entry / root - entry * ddet / (2.0 * det * root));
    };
    const double a11 = G / root, a12 = -F / root, a22 = E / root;
    const Vec2 da11 = d_scaled(G, dG), da12 = d_scaled(-F, -dF), da22 = d_scaled(E, dE);

    const Vec2 df = f.gradient(p);
    const Mat2 H = f.hessian(p);
    const double flux_div = da11[0] * df[0] + a11 * H(0, 0) + da12[0] * df[1] + a12 * H(1, 0) +
                            da12[1] * df[0] + a12 * H(0, 1) + da22[1] * df[1] + a22 * H(1, 1);
    return flux_div / root;
}

double gauss_curvature(const ConformalMetric& m, const Point& p) {
    m.require(p);
    const double lam = m.lambda(p);
    const Vec2 dl = m.lambda_field().gradient(p);
    const Mat2 H = m.lambda_field().hessian(p);
    const double lap_log = H.trace() / lam - dl.squaredNorm() / (lam * lam);
    return -lap_log / (2.0 * lam);
}

double gauss_curvature(const MetricField2x2& g, const Point& p) {
    const double E = g.g11.value(p), F = g.g12.value(p), G = g.g22.value(p);
    const Vec2 dE = g.g11.gradient(p), dF = g.g12.gradient(p), dG = g.g22.gradient(p);
    const double E_vv = g.g11.hessian(p)(1, 1);
    const double F_uv = g.g12.hessian(p)(0, 1);
    const double G_uu = g.g22.hessian(p)(0, 0);
    Eigen::Matrix3d first, second;
    first << -0.5 * E_vv + F_uv - 0.5 * G_uu, 0.5 * dE[0], dF[0] - 0.5 * dE[1],
        dF[1] - 0.5 * dG[0], E, F,
        0.5 * dG[1], F, G;
    second << 0.0, 0.5 * dE[1], 0.5 * dG[0],
        0.5 * dE[1], E, F,
        0.5 * dG[0], F, G;
    const double det = E * G - F * F;
    if (!(det > 0.0)) throw DomainError("metric not positive definite at " + format_point(p));
    return (first.determinant() - second.determinant()) / (det * det);
}

Vec2 rotate_j(const Vec2& v) { return {-v.y(), v.x()}; }

std::array<Mat2, 2> christoffel(const ConformalMetric& m, const Point& p) {
    const Vec2 l = m.lambda_field().gradient(p) / m.lambda(p);
    std::array<Mat2, 2> gamma;
    for (int k = 0; k < 2; ++k) {
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                gamma[k](i, j) =
                    0.5 * ((i == k ? l[j] : 0.0) + (j == k ? l[i] : 0.0) - (i == j ? l[k] : 0.0));
            }
        }
    }
    return gamma;
}

Mat2 covariant_jacobian(const ConformalMetric& m, const Vec2& X, const Mat2& dX, const Point& p) {
    const auto gamma = christoffel(m, p);
    Mat2 D = dX;
    for (int k = 0; k < 2; ++k) {
        for (int j = 0; j < 2; ++j) D(k, j) += gamma[k].row(j).dot(X);
    }
    return D;
}

}  // namespace maxgraph::metrics
