#include "maxgraph/graph.hpp"

#include <Eigen/LU>

#include <cmath>

namespace maxgraph::graph {

GraphSurface::GraphSurface(ConformalMetric metric, ScalarField height, Signature signature,
                           MarginFn margin)
    : metric_(std::move(metric)),
      height_(std::move(height)),
      signature_(signature),
      margin_(std::move(margin)) {}

double GraphSurface::gradient_norm_sq(const Point& p) const {
    return height_.gradient(p).squaredNorm() / metric_.lambda(p);
}

double GraphSurface::spacelike_margin(const Point& p) const {
    if (margin_) return margin_(p);
    return 1.0 + sign(signature_) * gradient_norm_sq(p);
}

void GraphSurface::require_spacelike(const Point& p) const {
    if (signature_ != Signature::Lorentzian) return;
    const double margin = spacelike_margin(p);
    if (!(margin >= kLightlikeGuard)) {
        throw NonSpacelikeError("graph is not spacelike at " + format_point(p) +
                                " (1 - |Du|^2 = " + std::to_string(margin) + ")");
    }
}

double GraphSurface::theta(const Point& p) const {
    if (signature_ != Signature::Lorentzian) {
        throw ValidationError("Theta is defined for Lorentzian graphs only");
    }
    require_spacelike(p);
    return -1.0 / std::sqrt(spacelike_margin(p));
}

Mat2 induced_metric(const GraphSurface& s, const Point& p) {
    s.metric().require(p);
    if (s.signature() == Signature::Lorentzian) s.require_spacelike(p);
    const Vec2 du = s.height().gradient(p);
    return s.metric().lambda(p) * Mat2::Identity() + sign(s.signature()) * du * du.transpose();
}

MetricField2x2 induced_metric_field(const GraphSurface& s) {
    const double sg = sign(s.signature());
    const ScalarField u = s.height();
    const ScalarField lam = s.metric().lambda_field();
    auto entry = [=](int i, int j) {
        return ScalarField::analytic(
            [=](const Point& p) {
                const Vec2 du = u.gradient(p);
                return (i == j ? lam.value(p) : 0.0) + sg * du[i] * du[j];
            },
            [=](const Point& p) {
                const Vec2 du = u.gradient(p);
                const Mat2 H = u.hessian(p);
                Vec2 d = sg * (H.row(i).transpose() * du[j] + du[i] * H.row(j).transpose());
                if (i == j) d += lam.gradient(p);
                return d;
            });
    };
    return {entry(0, 0), entry(0, 1), entry(1, 1)};
}

CausalReport causal_report(const GraphSurface& s, const Point& p) {
    CausalReport r;
    r.gradient_norm_sq = s.gradient_norm_sq(p);
    if (s.signature() == Signature::Riemannian) {
        r.spacelike = true;
        return r;
    }
    const double margin = s.spacelike_margin(p);
    r.spacelike = margin > 0.0;
    if (margin >= kLightlikeGuard) r.theta = -1.0 / std::sqrt(margin);
    return r;
}

Normal gauss_map(const GraphSurface& s, const Point& p) {
    if (s.signature() != Signature::Lorentzian) {
        throw ValidationError("the future-pointing Gauss map is defined for Lorentzian graphs");
    }
    s.metric().require(p);
    s.require_spacelike(p);
    const double root = std::sqrt(s.spacelike_margin(p));
    const Vec2 Du = s.height().gradient(p) / s.metric().lambda(p);
    return {Du / root, 1.0 / root};
}

double ambient_inner(const ConformalMetric& m, const Point& p, const Normal& a, const Normal& b) {
    return m.inner(p, a.base, b.base) - a.time * b.time;
}

Mat2 shape_operator(const GraphSurface& s, const Point& p) {
    const ConformalMetric& m = s.metric();
    m.require(p);
    s.require_spacelike(p);
    const double lam = m.lambda(p);
    const Vec2 dlam = m.lambda_field().gradient(p);
    const Vec2 du = s.height().gradient(p);
    const Mat2 H = s.height().hessian(p);

    const Vec2 Du = du / lam;
    const Mat2 dDu = H / lam - du * dlam.transpose() / (lam * lam);
    const Mat2 cov = metrics::covariant_jacobian(m, Du, dDu, p);

    const double root = std::sqrt(s.spacelike_margin(p));
    const Eigen::RowVector2d along = lam * Du.transpose() * cov;  // <D_{e_j} Du, Du>_M
    return -cov / root + sign(s.signature()) * Du * along / (root * root * root);
}

NormalizedDifferential normalized_differential(const ScalarField& u, const ConformalMetric& m,
                                               double sg, const Point& p) {
    m.require(p);
    const double lam = m.lambda(p);
    const Vec2 dlam = m.lambda_field().gradient(p);
    const Vec2 du = u.gradient(p);
    const Mat2 H = u.hessian(p);
    const double q = du.squaredNorm();
    const double scale_sq = 1.0 + sg * q / lam;
    if (!(scale_sq > 0.0)) {
        throw NonSpacelikeError("graph is not spacelike at " + format_point(p));
    }
    const double root = std::sqrt(scale_sq);
    const Vec2 d_ratio = 2.0 * H.transpose() * du / lam - q * dlam / (lam * lam);  // d(|Du|^2)
    const Vec2 d_root = sg * d_ratio / (2.0 * root);
    NormalizedDifferential nd;
    nd.value = du / root;
    nd.jacobian = H / root - du * d_root.transpose() / scale_sq;
    nd.scale_sq = scale_sq;
    return nd;
}

VectorField normalized_gradient(const ScalarField& u, const ConformalMetric& m, double sg) {
    auto component = [=](int i) {
        return ScalarField::analytic(
            [=](const Point& p) {
                return normalized_differential(u, m, sg, p).value[i] / m.lambda(p);
            },
            [=](const Point& p) {
                const NormalizedDifferential nd = normalized_differential(u, m, sg, p);
                const double lam = m.lambda(p);
                const Vec2 dlam = m.lambda_field().gradient(p);
                return Vec2(nd.jacobian.row(i).transpose() / lam -
                            nd.value[i] * dlam / (lam * lam));
            });
    };
    return {component(0), component(1)};
}

double mean_curvature(const GraphSurface& s, const Point& p) {
    s.require_spacelike(p);
    const VectorField X = normalized_gradient(s.height(), s.metric(), sign(s.signature()));
    return 0.5 * metrics::divergence(s.metric(), X, p);
}

double residual_minimal(const ScalarField& u, const ConformalMetric& m, const Point& p) {
    return metrics::divergence(m, normalized_gradient(u, m, 1.0), p);
}

double residual_maximal(const ScalarField& w, const ConformalMetric& m, const Point& p) {
    GraphSurface(m, w, Signature::Lorentzian).require_spacelike(p);
    return metrics::divergence(m, normalized_gradient(w, m, -1.0), p);
}

double q_term(const ScalarField& u, const Point& p) {
    const Vec2 du = u.gradient(p);
    const Mat2 H = u.hessian(p);
    return du[0] * du[0] * H(0, 0) + 2.0 * du[0] * du[1] * H(0, 1) + du[1] * du[1] * H(1, 1);
}

double residual_minimal_halfplane(const ScalarField& u, const Point& p) {
    const double x2 = p.y();
    if (!(x2 > 0.0)) throw DomainError("half-plane residual needs x2 > 0, got " + format_point(p));
    const Vec2 du = u.gradient(p);
    const double lap = u.hessian(p).trace();
    const double grad_sq = du.squaredNorm();
    const double w = 1.0 + x2 * x2 * grad_sq;
    return x2 * x2 * lap / std::sqrt(w) -
           x2 * x2 / std::pow(w, 1.5) * (x2 * du[1] * grad_sq + x2 * x2 * q_term(u, p));
}

PointReport invariant_report(const GraphSurface& s, const Point& p, const ReportOptions& opts) {
    if (s.signature() != Signature::Lorentzian) {
        throw ValidationError("invariant reports are defined for Lorentzian graphs");
    }
    const ConformalMetric& m = s.metric();
    m.require(p);
    s.require_spacelike(p);

    PointReport r;
    r.point = p;
    r.theta = s.theta(p);
    const double theta = r.theta;

    const Mat2 g = induced_metric(s, p);
    const Mat2 g_inv = g.inverse();
    const Vec2 dh = s.height().gradient(p);
    r.grad_h = g_inv * dh;
    r.grad_h_norm_sq = dh.dot(r.grad_h);

    const Mat2 A = shape_operator(s, p);
    r.shape_op = A;
    r.mean_curvature = -0.5 * A.trace();
    r.norm_A_sq = (A * A).trace();
    r.det_A = A.determinant();
    r.kappa_M = metrics::gauss_curvature(m, p);
    r.K_gauss_eq = r.kappa_M * theta * theta - r.det_A;

    const MetricField2x2 g_field = induced_metric_field(s);
    {
        const FdSteps brioschi{opts.brioschi_step, opts.brioschi_step};
        auto fd_entry = [&](const ScalarField& f) {
            return ScalarField::from_function([f](const Point& q) { return f.value(q); }, brioschi);
        };
        const MetricField2x2 fd_metric{fd_entry(g_field.g11), fd_entry(g_field.g12),
                                       fd_entry(g_field.g22)};
        r.K_numeric = metrics::gauss_curvature(fd_metric, p);
    }

    // Theta-derived scalars are finite-difference fields so the identities are
    // checked against an independent route.
    auto scalar = [&](auto fn) {
        return ScalarField::from_function([s, fn](const Point& q) { return fn(s.theta(q)); },
                                          opts.oracle_steps);
    };
    const ScalarField theta_f = scalar([](double t) { return t; });
    const ScalarField inv_theta_f = scalar([](double t) { return 1.0 / t; });
    const ScalarField log_f = scalar([](double t) { return std::log(1.0 - t); });

    const double lap_h = metrics::laplace_beltrami(g_field, s.height(), p);
    const Vec2 grad_theta = g_inv * theta_f.gradient(p);
    const Vec2 grad_defect = grad_theta - A * r.grad_h;
    const double t2m1 = theta * theta - 1.0;

    r.residuals["grad_h_norm"] = std::abs(r.grad_h_norm_sq - t2m1);
    r.residuals["laplace_h"] = std::abs(lap_h + 2.0 * r.mean_curvature * theta);
    r.residuals["grad_theta"] = std::sqrt(std::max(0.0, grad_defect.dot(g * grad_defect)));
    r.residuals["gauss_equation"] = std::abs(r.K_gauss_eq - r.K_numeric);

    r.laplace_inv_theta = metrics::laplace_beltrami(g_field, inv_theta_f, p);
    const double lap_log = metrics::laplace_beltrami(g_field, log_f, p);
    r.khat_scaled = r.K_gauss_eq - lap_log;

    r.maximal = std::abs(r.mean_curvature) <= opts.maximal_tol;
    if (r.maximal) {
        const double lap_theta = metrics::laplace_beltrami(g_field, theta_f, p);
        const double grad_theta_sq = grad_theta.dot(g * grad_theta);
        r.residuals["norm_grad_theta"] = std::abs(grad_theta_sq - 0.5 * r.norm_A_sq * t2m1);
        r.residuals["laplace_theta"] =
            std::abs(lap_theta - theta * (r.kappa_M * t2m1 + r.norm_A_sq));
        r.residuals["laplace_inv_theta"] = std::abs(
            r.laplace_inv_theta + (r.kappa_M * t2m1 + r.norm_A_sq / (theta * theta)) / theta);
        r.residuals["laplace_log"] = std::abs(lap_log - (r.K_gauss_eq + theta * r.kappa_M));
        r.residuals["squared_shape"] =
            (A * A - 0.5 * r.norm_A_sq * Mat2::Identity()).cwiseAbs().maxCoeff();
        r.residuals["det_shape"] = std::abs(r.det_A + 0.5 * r.norm_A_sq);
        if (r.kappa_M >= 0.0) r.inv_theta_subharmonic = r.laplace_inv_theta >= -opts.sign_tol;
    }
    return r;
}

}  // namespace maxgraph::graph
