#include "maxgraph/duality.hpp"

#include "maxgraph/graph.hpp"
#include "maxgraph/parallel.hpp"
#include "maxgraph/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

namespace maxgraph::duality {

namespace {

double direction_sign(Direction d) { return d == Direction::MinimalToMaximal ? 1.0 : -1.0; }

Direction reverse(Direction d) {
    return d == Direction::MinimalToMaximal ? Direction::MaximalToMinimal
                                            : Direction::MinimalToMaximal;
}

graph::NormalizedDifferential normalized(const ScalarField& u, const ConformalMetric& m,
                                         const Point& p, Direction d) {
    if (d == Direction::MaximalToMinimal) {
        graph::GraphSurface(m, u, graph::Signature::Lorentzian).require_spacelike(p);
    }
    return graph::normalized_differential(u, m, direction_sign(d), p);
}

// Value part of `normalized` without the Hessian.
Vec2 normalized_value(const ScalarField& u, const ConformalMetric& m, const Point& p, Direction d) {
    m.require(p);
    const Vec2 du = u.gradient(p);
    const double scale_sq = 1.0 + direction_sign(d) * du.squaredNorm() / m.lambda(p);
    const double floor = d == Direction::MaximalToMinimal ? graph::kLightlikeGuard : 0.0;
    if (!(scale_sq > floor)) {
        throw NonSpacelikeError("graph is not spacelike at " + format_point(p));
    }
    return du / std::sqrt(scale_sq);
}

Mat2 rotated_jacobian(const Mat2& J) {
    Mat2 R;
    R.row(0) = -J.row(1);
    R.row(1) = J.row(0);
    return R;
}

// Integrals of f from `origin` to each of `targets`, accumulated segment by
// segment between neighbouring targets.
std::vector<double> cumulative(const quad::Integrand& f, double origin,
                               const std::vector<double>& targets) {
    std::vector<std::size_t> order(targets.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return targets[a] < targets[b]; });
    std::vector<double> out(targets.size(), 0.0);
    auto upper = std::lower_bound(order.begin(), order.end(), origin,
                                  [&](std::size_t k, double v) { return targets[k] < v; });
    double pos = origin, acc = 0.0;
    for (auto it = upper; it != order.end(); ++it) {
        acc += quad::gauss_legendre32(f, pos, targets[*it]);
        pos = targets[*it];
        out[*it] = acc;
    }
    pos = origin;
    acc = 0.0;
    for (auto it = std::make_reverse_iterator(upper); it != order.rend(); ++it) {
        acc += quad::gauss_legendre32(f, pos, targets[*it]);
        pos = targets[*it];
        out[*it] = acc;
    }
    return out;
}

}  // namespace

Vec2 dual_partials(const ScalarField& u, const ConformalMetric& m, const Point& p, Direction d) {
    return metrics::rotate_j(normalized_value(u, m, p, d));
}

Vec2 dual_gradient(const ScalarField& u, const ConformalMetric& m, const Point& p, Direction d) {
    return dual_partials(u, m, p, d) / m.lambda(p);
}

ScalarField dual_gradient_field(const ScalarField& u, const ConformalMetric& m, Direction d) {
    return ScalarField::analytic(
        [](const Point&) -> double {
            throw ValidationError("dual potential has no value without a reconstruction");
        },
        [=](const Point& p) { return dual_partials(u, m, p, d); },
        [=](const Point& p) { return rotated_jacobian(normalized(u, m, p, d).jacobian); });
}

double norm_identity_check(const ScalarField& u, const ConformalMetric& m, const Point& p) {
    const double lam = m.lambda(p);
    const double dw_sq = m.norm_sq(p, dual_gradient(u, m, p));
    const double du_sq = u.gradient(p).squaredNorm() / lam;
    return std::abs(dw_sq - du_sq / (1.0 + du_sq));
}

double closedness_defect(const ScalarField& u, const ConformalMetric& m, const Point& p, Direction d) {
    return normalized(u, m, p, d).jacobian.trace();
}

DualityResult reconstruct_dual(const ScalarField& u, const ConformalMetric& m, const GridSpec& grid,
                               const Point& basepoint, const Options& opts) {
    grid.validate();
    if (!(basepoint.x() >= grid.x1_min && basepoint.x() <= grid.x1_max &&
          basepoint.y() >= grid.x2_min && basepoint.y() <= grid.x2_max)) {
        throw ValidationError("basepoint " + format_point(basepoint) + " outside the grid");
    }
    const Direction dir = opts.direction;
    auto partial = [&](int k, double x1, double x2) { return dual_partials(u, m, {x1, x2}, dir)[k]; };

    std::vector<double> xs(grid.nx), ys(grid.ny);
    for (int i = 0; i < grid.nx; ++i) xs[i] = grid.x(i);
    for (int j = 0; j < grid.ny; ++j) ys[j] = grid.y(j);
    const double bx = basepoint.x(), by = basepoint.y();

    // x1 first: along x2 = by, then up each column.
    const auto along_base_row = cumulative([&](double t) { return partial(0, t, by); }, bx, xs);
    Grid2D first(grid);
    parallel_for(grid.nx, [&](std::size_t i) {
        const auto col = cumulative([&](double t) { return partial(1, xs[i], t); }, by, ys);
        for (int j = 0; j < grid.ny; ++j) first.at(i, j) = along_base_row[i] + col[j];
    });

    // x2 first: along x1 = bx, then across each row.
    const auto along_base_col = cumulative([&](double t) { return partial(1, bx, t); }, by, ys);
    Grid2D second(grid);
    parallel_for(grid.ny, [&](std::size_t j) {
        const auto row = cumulative([&](double t) { return partial(0, t, ys[j]); }, bx, xs);
        for (int i = 0; i < grid.nx; ++i) second.at(i, j) = along_base_col[j] + row[i];
    });

    DualityResult r{ScalarField(), first, basepoint, dir};
    std::vector<double> curl(grid.size()), margin(grid.size());
    parallel_for(grid.size(), [&](std::size_t k) {
        const Point p = grid.node(k % grid.nx, k / grid.nx);
        const auto nd = normalized(u, m, p, dir);
        curl[k] = std::abs(nd.jacobian.trace());
        margin[k] = 1.0 / nd.scale_sq;
    });
    for (std::size_t k = 0; k < grid.size(); ++k) {
        r.path_independence_err =
            std::max(r.path_independence_err, std::abs(first.values()[k] - second.values()[k]));
    }
    r.closedness_sup = *std::max_element(curl.begin(), curl.end());
    r.min_margin = *std::min_element(margin.begin(), margin.end());
    r.certified = r.closedness_sup < opts.closed_tol;

    // Node values are integrals from the basepoint, so w(basepoint) = 0 holds
    // without a shift. Off-node values add the exact integral over the short
    // L-path from the nearest node.
    auto table = std::make_shared<const Grid2D>(r.values);
    auto value = [table, u, m, dir](const Point& p) {
        const GridSpec& g = table->spec();
        if (!(p.x() >= g.x1_min && p.x() <= g.x1_max && p.y() >= g.x2_min && p.y() <= g.x2_max)) {
            throw DomainError("point " + format_point(p) + " outside the reconstruction grid");
        }
        const int i = std::clamp(static_cast<int>(std::lround((p.x() - g.x1_min) / g.h1())), 0, g.nx - 1);
        const int j = std::clamp(static_cast<int>(std::lround((p.y() - g.x2_min) / g.h2())), 0, g.ny - 1);
        const Point node = g.node(i, j);
        double w = table->at(i, j);
        if (p.x() != node.x()) {
            w += quad::gauss_legendre32(
                [&](double t) { return dual_partials(u, m, {t, node.y()}, dir)[0]; }, node.x(), p.x());
        }
        if (p.y() != node.y()) {
            w += quad::gauss_legendre32(
                [&](double t) { return dual_partials(u, m, {p.x(), t}, dir)[1]; }, node.y(), p.y());
        }
        return w;
    };
    r.w = ScalarField::analytic(
        value, [=](const Point& p) { return dual_partials(u, m, p, dir); },
        [=](const Point& p) { return rotated_jacobian(normalized(u, m, p, dir).jacobian); });
    return r;
}

double roundtrip_check(const ScalarField& u, const ConformalMetric& m, const GridSpec& grid,
                       const DualityResult& dual) {
    std::vector<double> err(grid.size());
    parallel_for(grid.size(), [&](std::size_t k) {
        const Point p = grid.node(k % grid.nx, k / grid.nx);
        const Vec2 back = dual_gradient(dual.w, m, p, reverse(dual.direction));
        const Vec2 du = u.gradient(p) / m.lambda(p);
        err[k] = std::sqrt(m.norm_sq(p, back + du));
    });
    return *std::max_element(err.begin(), err.end());
}

}  // namespace maxgraph::duality
