#include "maxgraph/grid.hpp"

#include "maxgraph/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace maxgraph {

void GridSpec::validate() const {
    const bool finite = std::isfinite(x1_min) && std::isfinite(x1_max) && std::isfinite(x2_min) &&
                        std::isfinite(x2_max);
    if (!finite || !(x1_min < x1_max) || !(x2_min < x2_max)) {
        throw ValidationError("grid bounds must be finite with min < max");
    }
    if (nx < 2 || ny < 2) throw ValidationError("grid resolution must be at least 2 x 2");
}

// The last node is pinned to the bound so boundary data is sampled exactly there.
double GridSpec::x(int i) const { return i == nx - 1 ? x1_max : x1_min + i * h1(); }
double GridSpec::y(int j) const { return j == ny - 1 ? x2_max : x2_min + j * h2(); }

Grid2D::Grid2D(GridSpec spec, double fill) : spec_(spec), values_(spec.size(), fill) {
    spec_.validate();
}

Grid2D::Grid2D(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
    spec_.validate();
    if (values_.size() != spec_.size()) throw ValidationError("grid value count does not match resolution");
}

Grid2D Grid2D::sample(const GridSpec& spec, const std::function<double(const Point&)>& fn) {
    Grid2D g(spec);
    parallel_for(spec.size(), [&](std::size_t k) {
        const int i = static_cast<int>(k % spec.nx), j = static_cast<int>(k / spec.nx);
        g.at(i, j) = fn(spec.node(i, j));
    });
    return g;
}

double Grid2D::bilinear(const Point& p) const {
    const GridSpec& s = spec_;
    if (!(p.x() >= s.x1_min && p.x() <= s.x1_max && p.y() >= s.x2_min && p.y() <= s.x2_max)) {
        throw DomainError("point " + format_point(p) + " outside the grid");
    }
    // Snap to nodes so a node query returns the stored value exactly.
    auto cell = [](double f) { return std::abs(f - std::round(f)) < 1e-12 ? std::round(f) : f; };
    const double fx = cell((p.x() - s.x1_min) / s.h1()), fy = cell((p.y() - s.x2_min) / s.h2());
    const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, s.nx - 2);
    const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, s.ny - 2);
    const double tx = fx - i, ty = fy - j;
    return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) +
           (1 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
}

double Grid2D::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

void Grid2D::write_csv(std::ostream& out) const {
    out << "x1,x2,value\n";
    char line[96];
    for (int j = 0; j < spec_.ny; ++j) {
        for (int i = 0; i < spec_.nx; ++i) {
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", spec_.x(i), spec_.y(j), at(i, j));
            out << line;
        }
    }
}

}  // namespace maxgraph
