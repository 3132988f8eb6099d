#pragma once

#include "maxgraph/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace testing {

using maxgraph::Point;

inline std::vector<Point> random_points(std::size_t n, double x1_lo, double x1_hi, double x2_lo,
                                        double x2_hi, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> a(x1_lo, x1_hi), b(x2_lo, x2_hi);
    std::vector<Point> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = a(rng);
        out.emplace_back(x, b(rng));
    }
    return out;
}

// |a - b| <= tol * max(1, |a|, |b|)
inline bool near(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testing
