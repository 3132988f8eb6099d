#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "maxgraph/catalog.hpp"
#include "maxgraph/solver.hpp"
#include "support.hpp"

#include <cmath>

using namespace maxgraph;
using graph::Signature;
using metrics::ConformalMetric;
using solver::DirichletProblem;

namespace {

ScalarField sym(const std::string& text) { return ScalarField::from_expr(expr::parse(text)); }

GridSpec rect(int n) { return {-1.0, 1.0, 1.0, 2.0, n, n}; }

DirichletProblem from_catalog(const std::string& name, int n) {
    const auto e = catalog::get_example(name);
    return {e.metric, e.signature, rect(n), e.u};
}

double sup_error(const Grid2D& u, const ScalarField& exact) {
    const auto& g = u.spec();
    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) worst = std::max(worst, std::abs(u.at(i, j) - exact.value(g.node(i, j))));
    return worst;
}

ScalarField shifted(const ScalarField& f, double c) {
    return ScalarField::analytic([f, c](const Point& p) { return f.value(p) + c; },
                                 [f](const Point& p) { return f.gradient(p); },
                                 [f](const Point& p) { return f.hessian(p); });
}

}  // namespace

TEST_CASE("maximal-w2 boundary data at 65 x 65") {
    const auto p = from_catalog("maximal-w2", 65);
    const auto s = solver::solve_dirichlet(p);
    CHECK(s.report.converged);
    CHECK(s.report.iterations <= 10);
    CHECK(s.report.residual_sup < 1e-10);
    CHECK(sup_error(s.u, p.boundary) < 1e-3);
    for (double m : s.report.margin_history) CHECK(m >= p.eps_space);
    CHECK(s.report.min_margin >= p.eps_space);
    CHECK(s.report.residual_history.size() == static_cast<std::size_t>(s.report.iterations) + 1);
}

TEST_CASE("minimal-log boundary data at 65 x 65") {
    const auto p = from_catalog("minimal-log", 65);
    REQUIRE(p.signature == Signature::Riemannian);
    const auto s = solver::solve_dirichlet(p);
    CHECK(s.report.converged);
    CHECK(s.report.iterations <= 10);
    CHECK(sup_error(s.u, p.boundary) < 1e-3);
    CHECK(s.report.min_margin >= 1.0);
}

TEST_CASE("affine data on a flat base is reproduced exactly") {
    const DirichletProblem p{ConformalMetric::euclidean(), Signature::Lorentzian, {0.0, 1.0, 0.0, 1.0, 33, 33},
                             sym("(x1+x2)/4")};
    const auto s = solver::solve_dirichlet(p);
    CHECK(s.report.converged);
    CHECK(sup_error(s.u, p.boundary) < 1e-12);
    CHECK(s.report.min_margin == doctest::Approx(1.0 - 2.0 / 16).epsilon(1e-12));

    const auto study = solver::refinement_study(p, p.boundary, 3);
    REQUIRE(study.levels.size() == 3);
    for (const auto& l : study.levels) CHECK(l.sup_error < 1e-12);
}

TEST_CASE("refinement order") {
    for (const char* name : {"maximal-w2", "minimal-log"}) {
        CAPTURE(name);
        const auto p = from_catalog(name, 65);
        const auto study = solver::refinement_study(p, p.boundary, 3);
        REQUIRE(study.levels.size() == 3);
        CHECK(study.levels[0].n == 17);
        CHECK(study.levels[2].n == 65);
        CHECK(study.levels[1].h == doctest::Approx(study.levels[0].h / 2));
        for (std::size_t k = 1; k < study.levels.size(); ++k) {
            CHECK(study.levels[k].sup_error < study.levels[k - 1].sup_error);
        }
        CHECK(study.observed_order >= 1.8);
        CHECK(study.observed_order == doctest::Approx(*std::min_element(study.orders.begin(), study.orders.end())));
        if (p.signature == Signature::Lorentzian) {
            for (const auto& l : study.levels) CHECK(l.min_iterate_margin >= p.eps_space);
        }
    }
    auto p = from_catalog("maximal-w2", 33);
    CHECK_THROWS_AS(solver::refinement_study(p, p.boundary, 1), ValidationError);
    p.grid.nx = p.grid.ny = 34;
    CHECK_THROWS_AS(solver::refinement_study(p, p.boundary, 3), ValidationError);
}

TEST_CASE("residual never exceeds that of the sampled exact solution") {
    for (const char* name : {"maximal-w2", "minimal-log", "maximal-w1"}) {
        CAPTURE(name);
        const auto p = from_catalog(name, 33);
        const auto exact = Grid2D::sample(p.grid, [&](const Point& q) { return p.boundary.value(q); });
        const double r0 = solver::discrete_residual(p, exact).max_abs();
        const auto s = solver::solve_dirichlet(p);
        CHECK(s.report.residual_sup <= r0);
        CHECK(solver::discrete_residual(p, s.u).max_abs() <= r0);
        const auto& h = s.report.residual_history;
        for (std::size_t k = 1; k < h.size(); ++k) CHECK(h[k] < h[k - 1]);
    }
}

TEST_CASE("discrete residual vanishes on the boundary and on affine data") {
    const DirichletProblem p{ConformalMetric::euclidean(), Signature::Lorentzian, {-1.0, 2.0, 0.0, 1.0, 9, 7},
                             sym("0.3*x1-0.2*x2+1")};
    const auto u = Grid2D::sample(p.grid, [&](const Point& q) { return p.boundary.value(q); });
    CHECK(solver::discrete_residual(p, u).max_abs() < 1e-12);

    const auto w2 = from_catalog("maximal-w2", 9);
    const auto v = Grid2D::sample(w2.grid, [&](const Point& q) { return w2.boundary.value(q) * 2.0; });
    const auto r = solver::discrete_residual(w2, v);
    for (int i = 0; i < 9; ++i) {
        CHECK(r.at(i, 0) == 0.0);
        CHECK(r.at(i, 8) == 0.0);
        CHECK(r.at(0, i) == 0.0);
        CHECK(r.at(8, i) == 0.0);
    }
    CHECK(r.max_abs() > 0.0);
}

TEST_CASE("solution is invariant under constant shifts of the data") {
    for (const char* name : {"maximal-w2", "minimal-log"}) {
        CAPTURE(name);
        auto p = from_catalog(name, 33);
        const auto a = solver::solve_dirichlet(p);
        p.boundary = shifted(p.boundary, 3.0);
        const auto b = solver::solve_dirichlet(p);
        double worst = 0.0;
        for (std::size_t k = 0; k < a.u.values().size(); ++k) {
            worst = std::max(worst, std::abs(b.u.values()[k] - a.u.values()[k] - 3.0));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("initial guess policies reach the same solution") {
    auto p = from_catalog("maximal-w2", 33);
    const auto a = solver::solve_dirichlet(p);
    p.initial = solver::InitialGuess::Boundary;
    const auto b = solver::solve_dirichlet(p);
    CHECK(b.report.converged);
    for (std::size_t k = 0; k < a.u.values().size(); ++k) {
        CHECK(std::abs(a.u.values()[k] - b.u.values()[k]) < 1e-9);
    }
}

TEST_CASE("steep boundary data is rejected") {
    DirichletProblem p{ConformalMetric::euclidean(), Signature::Lorentzian, {0.0, 1.0, 0.0, 1.0, 9, 9},
                       sym("1.2*x1")};
    CHECK_THROWS_AS(solver::solve_dirichlet(p), NonSpacelikeError);
    // The same data is fine for the minimal surface equation.
    p.signature = Signature::Riemannian;
    CHECK(solver::solve_dirichlet(p).report.converged);
}

TEST_CASE("iteration limit raises SolveError with a report") {
    auto p = from_catalog("maximal-w2", 33);
    p.max_iterations = 1;
    try {
        solver::solve_dirichlet(p);
        FAIL("expected SolveError");
    } catch (const solver::SolveError& e) {
        CHECK_FALSE(e.report().converged);
        CHECK(e.report().iterations == 1);
        CHECK(e.report().residual_sup > 1e-10);
        CHECK(e.report().residual_history.size() == 2);
    }
    p.grid.nx = 2;
    CHECK_THROWS_AS(solver::solve_dirichlet(p), ValidationError);
}

TEST_CASE("solves are deterministic") {
    const auto p = from_catalog("maximal-w2", 33);
    setenv("MAXGRAPH_THREADS", "1", 1);
    const auto a = solver::solve_dirichlet(p);
    setenv("MAXGRAPH_THREADS", "4", 1);
    const auto b = solver::solve_dirichlet(p);
    unsetenv("MAXGRAPH_THREADS");
    CHECK(a.u.values() == b.u.values());
    CHECK(a.report.residual_history == b.report.residual_history);
}
