#pragma once

#include "maxgraph/expr.hpp"
#include "maxgraph/types.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>

namespace maxgraph {

/// Where a field's partial derivatives come from.
enum class Provenance {
    Symbolic,          // differentiated expression trees
    Analytic,          // hand-written closed-form derivatives
    FiniteDifference,  // centered stencils on the value function
};

/// Steps of the centered finite-difference stencils.
///
/// First derivatives use the two-point centered difference with `first`.
/// Second derivatives use the fourth-order five-point stencil with `second`
/// (and its Richardson-extrapolated four-point analogue for mixed partials).
struct FdSteps {
    double first = kFdStep;
    double second = 1e-4;
};

/// A twice-differentiable real function on a planar domain.
///
/// Cheap to copy; immutable after construction and safe to evaluate
/// concurrently.
class ScalarField {
public:
    using ValueFn = std::function<double(const Point&)>;
    using GradientFn = std::function<Vec2(const Point&)>;
    using HessianFn = std::function<Mat2(const Point&)>;

    /// Zero field.
    ScalarField();

    static ScalarField constant(double c);
    /// Symbolic partials of every order used by the toolkit.
    static ScalarField from_expr(const expr::Expr& e);
    /// Value from an arbitrary function, partials from expressions (the
    /// Hessian is their symbolic derivative).
    static ScalarField from_gradient_exprs(ValueFn value, expr::Expr d1, expr::Expr d2);
    /// Black-box function wrapped with centered finite differences.
    static ScalarField from_function(ValueFn value, FdSteps steps = {});
    /// Closed-form derivatives supplied by the caller; a missing Hessian is
    /// filled in by centered differences of the gradient.
    static ScalarField analytic(ValueFn value, GradientFn gradient, HessianFn hessian = {},
                                FdSteps steps = {});

    double value(const Point& p) const;
    double operator()(const Point& p) const { return value(p); }
    Vec2 gradient(const Point& p) const;
    /// H(i, j) = d/dx_j (d f / d x_i); for symbolic fields the two mixed
    /// entries are independent derivative trees.
    Mat2 hessian(const Point& p) const;

    double partial(Var i, const Point& p) const { return gradient(p)[index(i)]; }
    double partial2(Var i, Var j, const Point& p) const { return hessian(p)(index(i), index(j)); }

    Provenance provenance() const;
    const FdSteps& fd_steps() const;

    const std::optional<expr::Expr>& expr() const;
    const std::optional<std::array<expr::Expr, 2>>& gradient_exprs() const;

private:
    struct Impl;
    explicit ScalarField(std::shared_ptr<const Impl> impl);
    std::shared_ptr<const Impl> impl_;
};

/// Vector field given by its coordinate components.
struct VectorField {
    ScalarField x1;
    ScalarField x2;

    Vec2 value(const Point& p) const { return {x1.value(p), x2.value(p)}; }
    /// Row i is the gradient of component i.
    Mat2 jacobian(const Point& p) const;
};

/// Centered-difference derivatives of a black-box function; shared by
/// ScalarField and by the oracles that need an independent route.
namespace fd {

Vec2 gradient(const ScalarField::ValueFn& f, const Point& p, double h);
Mat2 hessian(const ScalarField::ValueFn& f, const Point& p, double h);
/// Jacobian of a vector-valued function: row i holds d g_i / d x_j.
Mat2 jacobian(const ScalarField::GradientFn& g, const Point& p, double h);

}  // namespace fd

}  // namespace maxgraph
