#pragma once

#include <functional>

namespace maxgraph::quad {

using Integrand = std::function<double(double)>;

struct Estimate {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
    bool converged = false;
};

/// Fixed 32-point Gauss-Legendre rule on [a, b].
double gauss_legendre32(const Integrand& f, double a, double b);

/// Globally adaptive 7/15-point Gauss-Kronrod on the finite interval [a, b].
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate is below `abs_tol` or `max_intervals` is reached. Nodes are
/// interior, so integrable endpoint singularities are never evaluated.
/// b < a integrates over [b, a] and flips the sign.
Estimate adaptive(const Integrand& f, double a, double b, double abs_tol,
                  int max_intervals = 2000);

}  // namespace maxgraph::quad
