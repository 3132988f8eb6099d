#include "maxgraph/field.hpp"

namespace maxgraph {

namespace fd {

Vec2 gradient(const ScalarField::ValueFn& f, const Point& p, double h) {
    Vec2 g;
    for (int i = 0; i < 2; ++i) {
        Point a = p, b = p;
        a[i] += h;
        b[i] -= h;
        g[i] = (f(a) - f(b)) / (2.0 * h);
    }
    return g;
}

namespace {

double mixed(const ScalarField::ValueFn& f, const Point& p, double h) {
    auto at = [&](double di, double dj) { return f(Point(p.x() + di, p.y() + dj)); };
    return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
}

}  // namespace

Mat2 hessian(const ScalarField::ValueFn& f, const Point& p, double h) {
    Mat2 H;
    const double f0 = f(p);
    for (int i = 0; i < 2; ++i) {
        auto at = [&](double d) {
            Point q = p;
            q[i] += d;
            return f(q);
        };
        H(i, i) = (-at(2 * h) + 16.0 * at(h) - 30.0 * f0 + 16.0 * at(-h) - at(-2 * h)) / (12.0 * h * h);
    }
    // Richardson step lifts the four-point mixed stencil to fourth order.
    const double m = (4.0 * mixed(f, p, h) - mixed(f, p, 2.0 * h)) / 3.0;
    H(0, 1) = H(1, 0) = m;
    return H;
}

Mat2 jacobian(const ScalarField::GradientFn& g, const Point& p, double h) {
    Mat2 J;
    for (int j = 0; j < 2; ++j) {
        Point a = p, b = p;
        a[j] += h;
        b[j] -= h;
        J.col(j) = (g(a) - g(b)) / (2.0 * h);
    }
    return J;
}

}  // namespace fd

struct ScalarField::Impl {
    ValueFn value;
    GradientFn gradient;
    HessianFn hessian;
    Provenance provenance = Provenance::Symbolic;
    FdSteps steps;
    std::optional<expr::Expr> expr;
    std::optional<std::array<expr::Expr, 2>> gradient_exprs;
};

ScalarField::ScalarField() : ScalarField(constant(0.0)) {}

ScalarField::ScalarField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

ScalarField ScalarField::constant(double c) {
    return from_expr(expr::Expr::constant(c));
}

namespace {

struct SymbolicJet {
    expr::Expr f;
    std::array<expr::Expr, 2> d;
    std::array<std::array<expr::Expr, 2>, 2> dd;  // dd[i][j] = d_j d_i f
};

}  // namespace

ScalarField ScalarField::from_expr(const expr::Expr& e) {
    auto impl = std::make_shared<Impl>();
    const expr::Expr d1 = expr::differentiate(e, Var::x1);
    const expr::Expr d2 = expr::differentiate(e, Var::x2);
    auto jet = std::make_shared<SymbolicJet>();
    jet->f = e;
    jet->d = {d1, d2};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) jet->dd[i][j] = expr::differentiate(jet->d[i], j);
    }
    impl->value = [jet](const Point& p) { return jet->f.eval(p); };
    impl->gradient = [jet](const Point& p) { return Vec2(jet->d[0].eval(p), jet->d[1].eval(p)); };
    impl->hessian = [jet](const Point& p) {
        Mat2 H;
        H << jet->dd[0][0].eval(p), jet->dd[0][1].eval(p), jet->dd[1][0].eval(p),
            jet->dd[1][1].eval(p);
        return H;
    };
    impl->provenance = Provenance::Symbolic;
    impl->expr = e;
    impl->gradient_exprs = std::array<expr::Expr, 2>{d1, d2};
    return ScalarField(std::move(impl));
}

ScalarField ScalarField::from_gradient_exprs(ValueFn value, expr::Expr d1, expr::Expr d2) {
    auto impl = std::make_shared<Impl>();
    auto jet = std::make_shared<SymbolicJet>();
    jet->d = {d1, d2};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) jet->dd[i][j] = expr::differentiate(jet->d[i], j);
    }
    impl->value = std::move(value);
    impl->gradient = [jet](const Point& p) { return Vec2(jet->d[0].eval(p), jet->d[1].eval(p)); };
    impl->hessian = [jet](const Point& p) {
        Mat2 H;
        H << jet->dd[0][0].eval(p), jet->dd[0][1].eval(p), jet->dd[1][0].eval(p),
            jet->dd[1][1].eval(p);
        return H;
    };
    impl->provenance = Provenance::Symbolic;
    impl->gradient_exprs = std::array<expr::Expr, 2>{std::move(d1), std::move(d2)};
    return ScalarField(std::move(impl));
}

ScalarField ScalarField::from_function(ValueFn value, FdSteps steps) {
    auto impl = std::make_shared<Impl>();
    impl->value = std::move(value);
    impl->provenance = Provenance::FiniteDifference;
    impl->steps = steps;
    return ScalarField(std::move(impl));
}

ScalarField ScalarField::analytic(ValueFn value, GradientFn gradient, HessianFn hessian,
                                  FdSteps steps) {
    auto impl = std::make_shared<Impl>();
    impl->value = std::move(value);
    impl->gradient = std::move(gradient);
    impl->hessian = std::move(hessian);
    impl->provenance = Provenance::Analytic;
    impl->steps = steps;
    return ScalarField(std::move(impl));
}

double ScalarField::value(const Point& p) const { return impl_->value(p); }

Vec2 ScalarField::gradient(const Point& p) const {
    if (impl_->gradient) return impl_->gradient(p);
    return fd::gradient(impl_->value, p, impl_->steps.first);
}

Mat2 ScalarField::hessian(const Point& p) const {
    if (impl_->hessian) return impl_->hessian(p);
    if (impl_->gradient) return fd::jacobian(impl_->gradient, p, impl_->steps.first);
    return fd::hessian(impl_->value, p, impl_->steps.second);
}

Provenance ScalarField::provenance() const { return impl_->provenance; }
const FdSteps& ScalarField::fd_steps() const { return impl_->steps; }
const std::optional<expr::Expr>& ScalarField::expr() const { return impl_->expr; }
const std::optional<std::array<expr::Expr, 2>>& ScalarField::gradient_exprs() const {
    return impl_->gradient_exprs;
}

Mat2 VectorField::jacobian(const Point& p) const {
    Mat2 J;
    J.row(0) = x1.gradient(p).transpose();
    J.row(1) = x2.gradient(p).transpose();
    return J;
}

}  // namespace maxgraph
