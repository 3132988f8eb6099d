#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "maxgraph/catalog.hpp"
#include "maxgraph/duality.hpp"
#include "maxgraph/graph.hpp"
#include "support.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

using namespace maxgraph;
using duality::Direction;
using metrics::ConformalMetric;
using testing::near;

namespace {

ScalarField sym(const std::string& text) { return ScalarField::from_expr(expr::parse(text)); }

const ConformalMetric kH2 = ConformalMetric::hyperbolic_half_plane();
const GridSpec kGrid{-2.0, 2.0, 0.5, 3.0, 65, 65};
const Point kBase(0.0, 1.0);

// Real form of the dual of log(x1^2+x2^2), normalized to vanish on the
// x2-axis: w = -(2/sqrt 5) F(atan(x1/x2), 2/sqrt 5).
double w1_oracle(const Point& p) {
    const double k = 2.0 / std::sqrt(5.0);
    return -k * std::ellint_1(k, std::atan(p.x() / p.y()));
}

double sup_over_nodes(const GridSpec& g, const std::function<double(const Point&)>& f) {
    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) worst = std::max(worst, std::abs(f(g.node(i, j))));
    return worst;
}

}  // namespace

TEST_CASE("dual gradient examples") {
    const ScalarField u1 = sym("log(x1^2+x2^2)");
    const Vec2 d = duality::dual_partials(u1, kH2, Point(0, 1));
    CHECK(d[0] == doctest::Approx(-2.0 / std::sqrt(5.0)).epsilon(1e-15));
    CHECK(d[1] == 0.0);
    const Vec2 g = duality::dual_gradient(u1, kH2, Point(0, 2));
    const Vec2 pd = duality::dual_partials(u1, kH2, Point(0, 2));
    CHECK(near(g[0], 4.0 * pd[0], 1e-15));

    const ScalarField u2 = sym("x1/(x1^2+x2^2)");
    CHECK(duality::dual_partials(u2, kH2, Point(0, 1))[1] ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

    CHECK(duality::dual_gradient(sym("5"), kH2, Point(0.3, 0.7)).norm() == 0.0);
}

TEST_CASE("dual partials reproduce the closed forms") {
    for (const auto& [src, dst] : {std::pair{"minimal-log", "maximal-w1"}, {"minimal-inv", "maximal-w2"}}) {
        const auto u = catalog::get_example(src).u;
        const auto partials = *catalog::get_example(dst).closed_form_partials;
        for (const auto& p : testing::random_points(100, -3, 3, 0.2, 3, 1)) {
            const Vec2 d = duality::dual_partials(u, kH2, p);
            CHECK(near(d[0], partials[0].value(p), 1e-13));
            CHECK(near(d[1], partials[1].value(p), 1e-13));
        }
    }
}

TEST_CASE("reverse direction needs a spacelike input") {
    CHECK_THROWS_AS(duality::dual_gradient(sym("2*x1"), ConformalMetric::euclidean(), Point(0, 0),
                                           Direction::MaximalToMinimal),
                    NonSpacelikeError);
    CHECK_NOTHROW(duality::dual_gradient(sym("2*x1"), ConformalMetric::euclidean(), Point(0, 0)));
}

TEST_CASE("norm identity") {
    const ScalarField u1 = sym("log(x1^2+x2^2)");
    const Vec2 Dw = duality::dual_gradient(u1, kH2, Point(0, 1));
    CHECK(kH2.norm_sq(Point(0, 1), Dw) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(duality::norm_identity_check(u1, kH2, Point(0, 1)) < 1e-12);
    CHECK(duality::norm_identity_check(sym("3"), kH2, Point(0, 1)) == 0.0);

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> coef(-3, 3);
    for (int trial = 0; trial < 10; ++trial) {
        const std::string text = std::to_string(coef(rng)) + "*sin(" + std::to_string(coef(rng)) +
                                 "*x1)+" + std::to_string(coef(rng)) + "*x2^2*x1+exp(" +
                                 std::to_string(coef(rng) / 3) + "*x2)";
        const ScalarField u = sym(text);
        for (const auto& p : testing::random_points(100, -3, 3, 0.2, 3, 100 + trial)) {
            CHECK(duality::norm_identity_check(u, kH2, p) < 1e-12);
            CHECK(duality::norm_identity_check(u, ConformalMetric::round_sphere(), p) < 1e-12);
        }
    }
}

TEST_CASE("closedness defect equals lambda times the minimal surface operator") {
    const ScalarField fields[] = {sym("sin(x1)*x2"), sym("x1*x2^2+exp(-x1^2)"),
                                  sym("log(x1^2+x2^2)"), sym("x1/(x1^2+x2^2)")};
    for (const auto& u : fields) {
        for (const auto& p : testing::random_points(100, -3, 3, 0.2, 3, 2)) {
            const double curl = duality::closedness_defect(u, kH2, p);
            const double pde = kH2.lambda(p) * graph::residual_minimal(u, kH2, p);
            CHECK(std::abs(curl - pde) < 1e-8 * std::max(1.0, std::abs(pde)));
        }
    }
    // Reverse direction: curl of J(Dw/sqrt(1-|Dw|^2)) is lambda Maximal[w].
    const auto w2 = catalog::get_example("maximal-w2").u;
    const ScalarField bump = sym("0.2*sin(x1)+0.1*x2^2");
    for (const auto& p : testing::random_points(100, -3, 3, 0.2, 2, 3)) {
        CHECK(std::abs(duality::closedness_defect(w2, kH2, p, Direction::MaximalToMinimal)) < 1e-8);
        const double curl = duality::closedness_defect(bump, kH2, p, Direction::MaximalToMinimal);
        const double pde = kH2.lambda(p) * graph::residual_maximal(bump, kH2, p);
        CHECK(std::abs(curl - pde) < 1e-8 * std::max(1.0, std::abs(pde)));
    }
}

TEST_CASE("reconstruction of the dual of minimal-log") {
    const auto u = catalog::get_example("minimal-log").u;
    const auto dual = duality::reconstruct_dual(u, kH2, kGrid, kBase);
    CHECK(dual.certified);
    CHECK(dual.closedness_sup < 1e-8);
    CHECK(dual.path_independence_err < 1e-7);
    CHECK(dual.min_margin > 0.0);
    CHECK(std::abs(dual.w.value(kBase)) < 1e-15);
    CHECK(std::abs(dual.w.value(kBase + Vec2(1e-3, -2e-3))) > 1e-4);

    const auto partials = *catalog::get_example("maximal-w1").closed_form_partials;
    const double grad_err = sup_over_nodes(kGrid, [&](const Point& p) {
        return (dual.w.gradient(p) - Vec2(partials[0].value(p), partials[1].value(p))).cwiseAbs().maxCoeff();
    });
    CHECK(grad_err < 1e-6);

    // Node values against the independent elliptic-integral oracle.
    const double value_err = sup_over_nodes(kGrid, [&](const Point& p) {
        int i = static_cast<int>(std::lround((p.x() - kGrid.x1_min) / kGrid.h1()));
        int j = static_cast<int>(std::lround((p.y() - kGrid.x2_min) / kGrid.h2()));
        return dual.values.at(i, j) - w1_oracle(p);
    });
    CHECK(value_err < 1e-12);
    for (const auto& p : testing::random_points(100, -2, 2, 0.5, 3, 4)) {
        CHECK(std::abs(dual.w.value(p) - w1_oracle(p)) < 1e-12);
    }
    CHECK_THROWS_AS(dual.w.value(Point(2.5, 1)), DomainError);

    const double closed = sup_over_nodes(kGrid, [&](const Point& p) { return graph::residual_minimal(u, kH2, p); });
    CHECK(std::abs(dual.closedness_sup - closed) < 1e-8);

    CHECK(std::abs(graph::residual_maximal(dual.w, kH2, Point(1, 1))) < 1e-6);
    CHECK(duality::roundtrip_check(u, kH2, kGrid, dual) < 1e-5);
}

TEST_CASE("reconstruction of the dual of minimal-inv") {
    const auto u = catalog::get_example("minimal-inv").u;
    const auto dual = duality::reconstruct_dual(u, kH2, kGrid, kBase);
    CHECK(dual.certified);
    CHECK(dual.path_independence_err < 1e-7);
    CHECK(dual.min_margin > 0.0);

    const auto w2 = catalog::get_example("maximal-w2");
    const auto& partials = *w2.closed_form_partials;
    const double grad_err = sup_over_nodes(kGrid, [&](const Point& p) {
        return (dual.w.gradient(p) - Vec2(partials[0].value(p), partials[1].value(p))).cwiseAbs().maxCoeff();
    });
    CHECK(grad_err < 1e-6);

    // Closed forms agree up to an additive constant.
    const double shift = w2.u.value(kBase);
    const double value_err = sup_over_nodes(kGrid, [&](const Point& p) {
        return dual.w.value(p) - (w2.u.value(p) - shift);
    });
    CHECK(value_err < 1e-12);
    CHECK(duality::roundtrip_check(u, kH2, kGrid, dual) < 1e-5);
}

TEST_CASE("constant input dualizes to zero") {
    const ScalarField c = sym("4.5");
    const auto dual = duality::reconstruct_dual(c, kH2, kGrid, kBase);
    CHECK(dual.values.max_abs() == 0.0);
    CHECK(dual.min_margin == 1.0);
    CHECK(duality::roundtrip_check(c, kH2, kGrid, dual) == 0.0);
}

TEST_CASE("parallel gradients stay parallel") {
    const ConformalMetric e2 = ConformalMetric::euclidean();
    const GridSpec grid{-1, 1, -1, 1, 33, 33};
    const auto dual = duality::reconstruct_dual(sym("0.3*x1-0.5*x2"), e2, grid, Point(0, 0));
    Vec2 mean = Vec2::Zero();
    std::vector<Vec2> grads;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) grads.push_back(dual.w.gradient(grid.node(i, j)));
    for (const auto& g : grads) mean += g;
    mean /= static_cast<double>(grads.size());
    double var = 0.0;
    for (const auto& g : grads) var += (g - mean).squaredNorm();
    var /= static_cast<double>(grads.size());
    CHECK(var < 1e-10);
    // J(0.3, -0.5) / sqrt(1.34)
    const Vec2 expected = Vec2(0.5, 0.3) / std::sqrt(1.34);
    CHECK((mean - expected).norm() < 1e-14);
    CHECK(sup_over_nodes(grid, [&](const Point& p) { return dual.w.value(p) - expected.dot(p); }) < 1e-14);
}

TEST_CASE("non-minimal inputs are reported but not certified") {
    const auto dual = duality::reconstruct_dual(sym("x1*x2^2"), kH2, kGrid, kBase);
    CHECK_FALSE(dual.certified);
    CHECK(dual.closedness_sup > 1e-3);
    CHECK(dual.path_independence_err > 1e-6);
}

TEST_CASE("reverse reconstruction recovers -u") {
    const auto w2 = catalog::get_example("maximal-w2");
    duality::Options opts;
    opts.direction = Direction::MaximalToMinimal;
    const auto back = duality::reconstruct_dual(w2.u, kH2, kGrid, kBase, opts);
    CHECK(back.certified);
    const ScalarField u = catalog::get_example("minimal-inv").u;
    const double shift = u.value(kBase);
    CHECK(sup_over_nodes(kGrid, [&](const Point& p) { return back.w.value(p) + (u.value(p) - shift); }) < 1e-12);
}

TEST_CASE("reconstruction validates its inputs") {
    const ScalarField u = sym("log(x1^2+x2^2)");
    CHECK_THROWS_AS(duality::reconstruct_dual(u, kH2, kGrid, Point(5, 1)), ValidationError);
    CHECK_THROWS_AS(duality::reconstruct_dual(u, kH2, GridSpec{-1, 1, -1, 1, 9, 9}, Point(0, 0.5)),
                    DomainError);
    CHECK_THROWS_AS(duality::reconstruct_dual(u, kH2, GridSpec{-1, 1, 1, 2, 1, 9}, Point(0, 1.5)),
                    ValidationError);
    CHECK_THROWS_AS(duality::dual_gradient_field(u, kH2).value(Point(0, 1)), ValidationError);
}

TEST_CASE("reconstruction is deterministic across thread counts") {
    const ScalarField u = catalog::get_example("minimal-inv").u;
    const GridSpec grid{-2, 2, 0.5, 3, 33, 33};
    ::setenv("MAXGRAPH_THREADS", "1", 1);
    const auto serial = duality::reconstruct_dual(u, kH2, grid, kBase);
    ::setenv("MAXGRAPH_THREADS", "4", 1);
    const auto threaded = duality::reconstruct_dual(u, kH2, grid, kBase);
    ::unsetenv("MAXGRAPH_THREADS");
    const auto& a = serial.values.values();
    const auto& b = threaded.values.values();
    REQUIRE(a.size() == b.size());
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    CHECK(serial.path_independence_err == threaded.path_independence_err);
}
