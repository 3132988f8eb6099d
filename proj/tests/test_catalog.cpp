#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "maxgraph/catalog.hpp"
#include "maxgraph/graph.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>

using namespace maxgraph;
using catalog::Property;
using testing::near;

namespace {

std::vector<Point> grid50() {
    std::vector<Point> out;
    for (int j = 0; j < 50; ++j)
        for (int i = 0; i < 50; ++i) out.emplace_back(-3.0 + 6.0 * i / 49, 0.2 + 2.8 * j / 49);
    return out;
}

double riemann_f(double phi, double k, int n) {
    double sum = 0.0;
    const double h = phi / n;
    for (int i = 0; i < n; ++i) {
        const double s = std::sin((i + 0.5) * h);
        sum += 1.0 / std::sqrt(1.0 - k * k * s * s);
    }
    return sum * h;
}

}  // namespace

TEST_CASE("registry") {
    const auto& names = catalog::names();
    CHECK(names.size() == 7);
    for (const auto& name : names) {
        const auto e = catalog::get_example(name);
        CHECK(e.name == name);
        CHECK_FALSE(e.description.empty());
    }
    CHECK_THROWS_AS(catalog::get_example("catenoid"), ValidationError);
    CHECK(catalog::property_name(Property::TotallyGeodesic) == "totally_geodesic");
}

TEST_CASE("properties and signatures") {
    using graph::Signature;
    auto e = catalog::get_example("minimal-log");
    CHECK(e.signature == Signature::Riemannian);
    CHECK(e.has(Property::Minimal));
    CHECK(e.metric.name() == "hyperbolic-half-plane");
    e = catalog::get_example("maximal-w1");
    CHECK(e.signature == Signature::Lorentzian);
    CHECK(e.has(Property::Complete));
    e = catalog::get_example("maximal-w2");
    CHECK(e.has(Property::Incomplete));
    CHECK_FALSE(e.has(Property::Complete));
    e = catalog::get_example("flat-incomplete");
    CHECK(e.metric.name() == "euclidean");
    CHECK(e.has(Property::Incomplete));
    e = catalog::get_example("affine");
    CHECK(e.has(Property::TotallyGeodesic));
}

TEST_CASE("entry examples") {
    const auto w2 = catalog::get_example("maximal-w2");
    CHECK(w2.u.value(Point(0, 1)) == doctest::Approx(std::log(1.0 / (2.0 * (1.0 + std::sqrt(2.0))))).epsilon(1e-15));
    CHECK(w2.u.value(Point(0, 1)) == doctest::Approx(-1.5745).epsilon(1e-4));

    const auto w1 = catalog::get_example("maximal-w1");
    const Vec2 g = w1.u.gradient(Point(0, 1));
    CHECK(g[0] == doctest::Approx(-2.0 / std::sqrt(5.0)).epsilon(1e-15));
    CHECK(g[1] == 0.0);
    const auto& cp = *w1.closed_form_partials;
    CHECK(cp[0].value(Point(0, 1)) == doctest::Approx(-2.0 / std::sqrt(5.0)).epsilon(1e-15));

    const auto slice = catalog::get_example("slice");
    CHECK(slice.has(Property::TotallyGeodesic));
    for (const auto& p : testing::random_points(20, -3, 3, 0.2, 3, 1)) {
        CHECK(slice.u.value(p) == 0.0);
        CHECK(slice.u.gradient(p).norm() == 0.0);
    }
}

TEST_CASE("elliptic integral of the first kind") {
    CHECK(catalog::elliptic_f(0.0, 0.7) == 0.0);
    CHECK(catalog::elliptic_f(1.1, 0.0) == doctest::Approx(1.1).epsilon(1e-15));
    const double k = 1.0 / std::sqrt(5.0);
    const double oracle = riemann_f(std::numbers::pi / 2, k, 1'000'000);
    CHECK(std::abs(catalog::elliptic_f(std::numbers::pi / 2, k) - oracle) < 1e-9);
    CHECK(std::abs(catalog::elliptic_f(0.8, 0.9) - riemann_f(0.8, 0.9, 1'000'000)) < 1e-9);
    CHECK(catalog::elliptic_f(-0.8, 0.9) == -catalog::elliptic_f(0.8, 0.9));
    CHECK_THROWS_AS(catalog::elliptic_f(0.5, 1.0), ValidationError);
    CHECK_THROWS_AS(catalog::elliptic_f(0.5, -0.1), ValidationError);
    CHECK_THROWS_AS(catalog::elliptic_f(2.0, 0.5), ValidationError);
}

TEST_CASE("maximal-w1 matches the real elliptic form") {
    // With k' = 2/sqrt 5 the imaginary-amplitude form becomes
    // w1 = -k' F(atan(x1/x2), k'), which vanishes on the x2-axis.
    const double kp = 2.0 / std::sqrt(5.0);
    const auto w1 = catalog::get_example("maximal-w1");
    for (const auto& p : testing::random_points(200, -5, 5, 0.05, 4, 2)) {
        const double expected = -kp * catalog::elliptic_f(std::atan(p.x() / p.y()), kp);
        CHECK(std::abs(w1.u.value(p) - expected) < 1e-12);
    }
    CHECK(w1.u.value(Point(0, 2.5)) == 0.0);
}

TEST_CASE("closed-form partials match the fields") {
    for (const auto& name : catalog::names()) {
        const auto e = catalog::get_example(name);
        if (!e.closed_form_partials) continue;
        CAPTURE(name);
        const auto& cp = *e.closed_form_partials;
        for (const auto& p : testing::random_points(100, -3, 3, 0.2, 3, 3)) {
            const Vec2 g = e.u.gradient(p);
            CHECK(std::abs(g[0] - cp[0].value(p)) < 1e-10);
            CHECK(std::abs(g[1] - cp[1].value(p)) < 1e-10);
        }
    }
}

TEST_CASE("explicit minimal graphs solve the minimal surface equation") {
    for (const char* name : {"minimal-log", "minimal-inv"}) {
        const auto e = catalog::get_example(name);
        double worst = 0.0, expansion = 0.0;
        for (const auto& p : grid50()) {
            const double r = graph::residual_minimal(e.u, e.metric, p);
            worst = std::max(worst, std::abs(r));
            expansion = std::max(expansion, std::abs(graph::residual_minimal_halfplane(e.u, p) - r));
        }
        CAPTURE(name);
        CHECK(worst < 1e-10);
        CHECK(expansion < 1e-9);
    }
}

TEST_CASE("explicit maximal graphs solve the maximal surface equation") {
    for (const char* name : {"maximal-w1", "maximal-w2"}) {
        const auto e = catalog::get_example(name);
        double worst = 0.0;
        for (const auto& p : grid50()) {
            worst = std::max(worst, std::abs(graph::residual_maximal(e.u, e.metric, p)));
        }
        CAPTURE(name);
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("stable margins agree with the naive expression") {
    for (const char* name : {"maximal-w1", "maximal-w2", "flat-incomplete"}) {
        const auto e = catalog::get_example(name);
        const graph::GraphSurface naive(e.metric, e.u, e.signature);
        for (const auto& p : testing::random_points(200, -3, 3, 0.2, 3, 4)) {
            CHECK(near(e.margin(p), naive.spacelike_margin(p), 1e-12));
        }
    }
    // Near the boundary only the stable form keeps its digits.
    const auto w2 = catalog::get_example("maximal-w2");
    const double x2 = 1e-9;
    CHECK(w2.margin(Point(0, x2)) == doctest::Approx(x2 * x2).epsilon(1e-12));
}

TEST_CASE("maximal-w1 is uniformly spacelike") {
    const auto s = catalog::get_example("maximal-w1").surface();
    for (const auto& p : testing::random_points(1000, -50, 50, 1e-3, 50, 5)) {
        CHECK(s.spacelike_margin(p) >= 0.2);
    }
}

TEST_CASE("flat-incomplete is spacelike everywhere") {
    const auto e = catalog::get_example("flat-incomplete");
    for (int k = -2000; k <= 2000; ++k) {
        const Point p(k / 100.0, 0.3);
        CHECK(e.u.gradient(p).squaredNorm() < 1.0);
    }
    // C^2 across the seams at |x1| = 1.
    for (double s : {-1.0, 1.0}) {
        const double h = 1e-9;
        CHECK(near(e.u.value(Point(s - h, 0)), e.u.value(Point(s + h, 0)), 1e-8));
        CHECK(near(e.u.gradient(Point(s - h, 0))[0], e.u.gradient(Point(s + h, 0))[0], 1e-8));
        CHECK(near(e.u.hessian(Point(s - h, 0))(0, 0), e.u.hessian(Point(s + h, 0))(0, 0), 1e-8));
    }
}
