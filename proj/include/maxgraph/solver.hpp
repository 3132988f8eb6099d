#pragma once

#include "maxgraph/graph.hpp"
#include "maxgraph/grid.hpp"

#include <vector>

namespace maxgraph::solver {

enum class InitialGuess {
    Harmonic,  // discrete Laplace extension of the boundary data
    Boundary,  // the boundary field sampled at every node
};

/// Dirichlet problem for Div(Du / sqrt(1 +/- |Du|^2)) = 0 on a rectangle.
struct DirichletProblem {
    graph::ConformalMetric metric;
    graph::Signature signature = graph::Signature::Lorentzian;
    GridSpec grid;
    /// Sampled on the boundary nodes (and everywhere for InitialGuess::Boundary).
    ScalarField boundary;
    InitialGuess initial = InitialGuess::Harmonic;
    /// Lorentzian iterates keep 1 - |Du|^2 >= eps_space on every cell face.
    double eps_space = 1e-6;
    int max_iterations = 50;
};

struct SolveReport {
    int iterations = 0;
    double residual_sup = 0.0;
    double initial_residual_sup = 0.0;
    /// Minimum over faces of 1 -/+ |Du|^2 at the returned iterate.
    double min_margin = 0.0;
    bool converged = false;
    /// One entry per accepted iterate, starting with the initial guess.
    std::vector<double> residual_history;
    std::vector<double> margin_history;
    std::vector<double> step_lengths;
};

struct Solution {
    Grid2D u;
    SolveReport report;
};

/// Raised when the Newton iteration fails; carries the partial report.
class SolveError : public Error {
public:
    SolveError(const std::string& what, SolveReport report)
        : Error(what), report_(std::move(report)) {}
    const SolveReport& report() const { return report_; }

private:
    SolveReport report_;
};

/// Flux-form residual lambda * Div(Du / s) at the interior nodes (zero on
/// the boundary). Nine-point stencil: normal differences across each cell
/// face, transverse derivatives averaged from the two adjacent nodes.
Grid2D discrete_residual(const DirichletProblem& p, const Grid2D& u);

/// Damped Newton with an analytic Jacobian and banded LU. Steps are halved
/// until the iterate is spacelike (Lorentzian) and the residual sup-norm
/// decreases. Throws SolveError on failure to converge within
/// max_iterations or when no admissible step exists, and NonSpacelikeError
/// when the initial guess already violates the margin.
Solution solve_dirichlet(const DirichletProblem& p, double tol_newton = 1e-10);

struct RefinementLevel {
    int n = 0;
    double h = 0.0;
    double sup_error = 0.0;
    int iterations = 0;
    double min_margin = 0.0;
    /// Minimum face margin over every accepted iterate of this level.
    double min_iterate_margin = 0.0;
};

struct RefinementStudy {
    std::vector<RefinementLevel> levels;
    /// log2 of successive error ratios.
    std::vector<double> orders;
    /// Smallest of `orders`.
    double observed_order = 0.0;
};

/// Solves on the problem's grid and on `levels - 1` successively halved
/// resolutions (n -> (n - 1)/2 + 1), coarsest first, measuring the nodal
/// sup error against `exact`. The problem's resolution minus one must be
/// divisible by 2^(levels-1).
RefinementStudy refinement_study(const DirichletProblem& p, const ScalarField& exact, int levels = 3,
                                 double tol_newton = 1e-10);

}  // namespace maxgraph::solver
