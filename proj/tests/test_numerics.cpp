#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "maxgraph/grid.hpp"
#include "maxgraph/parallel.hpp"
#include "maxgraph/quadrature.hpp"
#include "maxgraph/serialize.hpp"
#include "support.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

using namespace maxgraph;

TEST_CASE("Gauss-Legendre is exact on polynomials of degree 63") {
    auto f = [](double x) { return std::pow(x, 63) + 3 * std::pow(x, 62) - x + 1; };
    // integral over [-1, 2]
    const double exact = (std::pow(2.0, 64) - 1) / 64 + 3 * (std::pow(2.0, 63) + 1) / 63 - 1.5 + 3;
    CHECK(testing::near(quad::gauss_legendre32(f, -1, 2), exact, 1e-13));
    CHECK(quad::gauss_legendre32(f, 0.5, 0.5) == 0.0);
}

TEST_CASE("adaptive quadrature") {
    auto r = quad::adaptive([](double x) { return std::sin(x); }, 0, std::numbers::pi, 1e-12);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 2.0) < 1e-12);

    // Integrable endpoint singularity.
    r = quad::adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0, 1, 1e-9, 5000);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 2.0) < 1e-8);

    const auto fwd = quad::adaptive([](double x) { return std::exp(x); }, -1, 3, 1e-12);
    const auto rev = quad::adaptive([](double x) { return std::exp(x); }, 3, -1, 1e-12);
    CHECK(rev.value == -fwd.value);
    CHECK(rev.converged);
    CHECK(std::abs(fwd.value - (std::exp(3.0) - std::exp(-1.0))) < 1e-11);

    const auto empty = quad::adaptive([](double) -> double { throw std::logic_error("evaluated"); }, 1, 1, 1e-9);
    CHECK(empty.value == 0.0);
    CHECK(empty.converged);

    // Too few intervals for a wildly oscillating integrand.
    const auto hard = quad::adaptive([](double x) { return std::sin(1.0 / x); }, 1e-6, 1, 1e-14, 10);
    CHECK_FALSE(hard.converged);
    CHECK(hard.intervals <= 10);
}

TEST_CASE("grid spec validation and nodes") {
    GridSpec g{-1, 1, 2, 3, 5, 3};
    g.validate();
    CHECK(g.h1() == 0.5);
    CHECK(g.x(0) == -1.0);
    CHECK(g.x(4) == 1.0);
    CHECK(g.y(2) == 3.0);
    CHECK(g.size() == 15);
    for (GridSpec bad : {GridSpec{1, -1, 0, 1, 3, 3}, GridSpec{0, 1, 0, 1, 1, 3},
                         GridSpec{0, INFINITY, 0, 1, 3, 3}, GridSpec{0, 1, NAN, 1, 3, 3}}) {
        CHECK_THROWS_AS(bad.validate(), ValidationError);
    }
    CHECK_THROWS_AS(Grid2D(g, std::vector<double>(14)), ValidationError);
}

TEST_CASE("bilinear interpolation") {
    const GridSpec g{0, 2, -1, 1, 5, 9};
    // Bilinear functions are reproduced exactly.
    auto f = [](const Point& p) { return 1.5 + 2 * p.x() - p.y() + 0.75 * p.x() * p.y(); };
    const Grid2D grid = Grid2D::sample(g, f);
    for (const auto& p : testing::random_points(200, 0, 2, -1, 1, 9)) {
        CHECK(testing::near(grid.bilinear(p), f(p), 1e-13));
    }
    CHECK(grid.bilinear(Point(2, 1)) == f(Point(2, 1)));
    CHECK(grid.bilinear(Point(0, -1)) == f(Point(0, -1)));
    CHECK_THROWS_AS(grid.bilinear(Point(2.001, 0)), DomainError);
    CHECK_THROWS_AS(grid.bilinear(Point(1, -1.5)), DomainError);
    CHECK(grid.max_abs() == doctest::Approx(1.5 + 4 - 1 + 1.5));
}

TEST_CASE("CSV output") {
    const GridSpec g{0, 1, 0, 2, 2, 3};
    const Grid2D grid(g, {1, 2, 3, 4, 5, 6});
    std::ostringstream s;
    grid.write_csv(s);
    std::istringstream in(s.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x1,x2,value");
    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == "0,0,1");
    CHECK(rows[1] == "1,0,2");
    CHECK(rows[5] == "1,2,6");
}

TEST_CASE("grid JSON round trip") {
    const GridSpec g{-1, 1, 0.5, 2, 4, 3};
    const Grid2D grid = Grid2D::sample(g, [](const Point& p) { return std::sin(p.x()) / p.y() + 1e-17; });
    const auto j = serialize::grid_to_json(grid);
    CHECK(j.at("schema") == serialize::kGridSchema);
    const Grid2D back = serialize::grid_from_json(serialize::Json::parse(j.dump()));
    CHECK(back.values() == grid.values());
    CHECK(back.spec().nx == 4);
    CHECK(back.spec().x2_min == 0.5);

    auto wrong = j;
    wrong["schema"] = "maxgraph-grid/2";
    CHECK_THROWS_AS(serialize::grid_from_json(wrong), ValidationError);
    auto truncated = j;
    truncated["values"].erase(0);
    CHECK_THROWS_AS(serialize::grid_from_json(truncated), ValidationError);
    auto malformed = j;
    malformed.erase("bounds");
    CHECK_THROWS_AS(serialize::grid_from_json(malformed), ValidationError);
}

TEST_CASE("parallel_for visits every index once") {
    for (const char* threads : {"1", "3", "8"}) {
        setenv("MAXGRAPH_THREADS", threads, 1);
        CHECK(thread_count() == static_cast<unsigned>(std::atoi(threads)));
        std::vector<std::atomic<int>> hits(1000);
        parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
        for (const auto& h : hits) CHECK(h.load() == 1);
    }
    setenv("MAXGRAPH_THREADS", "zero", 1);
    CHECK(thread_count() >= 1);
    unsetenv("MAXGRAPH_THREADS");
    CHECK(thread_count() >= 1);
    parallel_for(0, [](std::size_t) { throw std::logic_error("never called"); });
}

TEST_CASE("parallel_for rethrows the lowest failing index") {
    for (const char* threads : {"1", "4"}) {
        setenv("MAXGRAPH_THREADS", threads, 1);
        std::atomic<int> visited{0};
        try {
            parallel_for(500, [&](std::size_t i) {
                visited++;
                if (i % 97 == 13) throw std::runtime_error("index " + std::to_string(i));
            });
            FAIL("expected an exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()) == "index 13");
        }
        CHECK(visited.load() == 500);
    }
    unsetenv("MAXGRAPH_THREADS");
}
