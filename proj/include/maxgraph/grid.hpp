#pragma once

#include "maxgraph/types.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace maxgraph {

/// Uniform tensor grid on a closed rectangle, nodes included on the boundary.
struct GridSpec {
    double x1_min = 0.0, x1_max = 1.0;
    double x2_min = 0.0, x2_max = 1.0;
    int nx = 2, ny = 2;

    /// Throws ValidationError unless bounds are finite and ordered and both
    /// resolutions are at least 2.
    void validate() const;

    double h1() const { return (x1_max - x1_min) / (nx - 1); }
    double h2() const { return (x2_max - x2_min) / (ny - 1); }
    double x(int i) const;
    double y(int j) const;
    Point node(int i, int j) const { return {x(i), y(j)}; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
};

/// Node values stored row-major: index j * nx + i.
class Grid2D {
public:
    explicit Grid2D(GridSpec spec, double fill = 0.0);
    Grid2D(GridSpec spec, std::vector<double> values);

    /// Evaluates fn at every node, in parallel.
    static Grid2D sample(const GridSpec& spec, const std::function<double(const Point&)>& fn);

    const GridSpec& spec() const { return spec_; }
    const std::vector<double>& values() const { return values_; }

    double& at(int i, int j) { return values_[static_cast<std::size_t>(j) * spec_.nx + i]; }
    double at(int i, int j) const { return values_[static_cast<std::size_t>(j) * spec_.nx + i]; }

    /// Bilinear interpolation; DomainError outside the closed rectangle.
    double bilinear(const Point& p) const;

    double max_abs() const;

    /// `x1,x2,value` with one row per node in storage order.
    void write_csv(std::ostream& out) const;

private:
    GridSpec spec_;
    std::vector<double> values_;
};

}  // namespace maxgraph
