#include "maxgraph/solver.hpp"

#include "maxgraph/parallel.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace maxgraph::solver {

namespace {

struct FaceValue {
    double flux, d_normal, d_transverse, margin;
};

// flux = D / s with s^2 = 1 + sign (D^2 + T^2) / lambda.
FaceValue face(double D, double T, double lam, double sg) {
    const double margin = 1.0 + sg * (D * D + T * T) / lam;
    if (!(margin > 0.0)) return {0.0, 0.0, 0.0, margin};
    const double s = std::sqrt(margin);
    const double s3 = s * margin;
    return {D / s, (1.0 - sg * D * D / (lam * margin)) / s, -sg * D * T / (lam * s3), margin};
}

// Conformal factors at face midpoints, shared by every iterate.
struct Faces {
    std::vector<double> east;   // (i + 1/2, j), index j * nx + i
    std::vector<double> north;  // (i, j + 1/2), index j * nx + i
};

Faces face_lambdas(const DirichletProblem& p) {
    const GridSpec& g = p.grid;
    Faces f{std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), 0.0)};
    parallel_for(g.size(), [&](std::size_t k) {
        const int i = k % g.nx, j = k / g.nx;
        if (i + 1 < g.nx) {
            const Point q(g.x(i) + 0.5 * g.h1(), g.y(j));
            p.metric.require(q);
            f.east[k] = p.metric.lambda(q);
        }
        if (j + 1 < g.ny) {
            const Point q(g.x(i), g.y(j) + 0.5 * g.h2());
            p.metric.require(q);
            f.north[k] = p.metric.lambda(q);
        }
    });
    return f;
}

class Discretization {
public:
    explicit Discretization(const DirichletProblem& p)
        : g_(p.grid), lam_(face_lambdas(p)), sg_(graph::sign(p.signature)) {}

    int unknowns() const { return (g_.nx - 2) * (g_.ny - 2); }
    int band() const { return g_.nx - 1; }
    int unknown(int i, int j) const { return (j - 1) * (g_.nx - 2) + (i - 1); }
    bool interior(int i, int j) const { return i > 0 && j > 0 && i < g_.nx - 1 && j < g_.ny - 1; }

    FaceValue east(const Grid2D& u, int i, int j) const {
        const double D = (u.at(i + 1, j) - u.at(i, j)) / g_.h1();
        const double T = (u.at(i, j + 1) - u.at(i, j - 1) + u.at(i + 1, j + 1) - u.at(i + 1, j - 1)) /
                         (4.0 * g_.h2());
        return face(D, T, lam_.east[j * g_.nx + i], sg_);
    }
    FaceValue north(const Grid2D& u, int i, int j) const {
        const double D = (u.at(i, j + 1) - u.at(i, j)) / g_.h2();
        const double T = (u.at(i + 1, j) - u.at(i - 1, j) + u.at(i + 1, j + 1) - u.at(i - 1, j + 1)) /
                         (4.0 * g_.h1());
        return face(D, T, lam_.north[j * g_.nx + i], sg_);
    }

    double min_margin(const Grid2D& u) const {
        double m = std::numeric_limits<double>::infinity();
        for (int j = 1; j < g_.ny - 1; ++j)
            for (int i = 0; i < g_.nx - 1; ++i) m = std::min(m, east(u, i, j).margin);
        for (int j = 0; j < g_.ny - 1; ++j)
            for (int i = 1; i < g_.nx - 1; ++i) m = std::min(m, north(u, i, j).margin);
        return m;
    }

    Grid2D residual(const Grid2D& u) const {
        Grid2D r(g_);
        parallel_for(g_.ny - 2, [&](std::size_t jj) {
            const int j = static_cast<int>(jj) + 1;
            for (int i = 1; i < g_.nx - 1; ++i) {
                r.at(i, j) = (east(u, i, j).flux - east(u, i - 1, j).flux) / g_.h1() +
                             (north(u, i, j).flux - north(u, i, j - 1).flux) / g_.h2();
            }
        });
        return r;
    }

    // Column-major LAPACK band storage of the residual Jacobian.
    std::vector<double> jacobian(const Grid2D& u) const {
        const int n = unknowns(), kl = band(), ku = band(), ld = 2 * kl + ku + 1;
        std::vector<double> ab(static_cast<std::size_t>(ld) * n, 0.0);
        auto add = [&](int row, int ci, int cj, double v) {
            if (!interior(ci, cj)) return;
            const int col = unknown(ci, cj);
            ab[static_cast<std::size_t>(kl + ku + row - col) + static_cast<std::size_t>(col) * ld] += v;
        };
        const double h1 = g_.h1(), h2 = g_.h2();
        // A face flux enters the rows of its two nodes with opposite signs.
        auto east_face = [&](int i, int j) {
            const FaceValue f = east(u, i, j);
            const double dn = f.d_normal / h1, dt = f.d_transverse / (4.0 * h2);
            for (int side = 0; side < 2; ++side) {
                const int ri = side == 0 ? i : i + 1;
                if (!interior(ri, j)) continue;
                const double w = (side == 0 ? 1.0 : -1.0) / h1;
                const int row = unknown(ri, j);
                add(row, i + 1, j, w * dn);
                add(row, i, j, -w * dn);
                add(row, i, j + 1, w * dt);
                add(row, i, j - 1, -w * dt);
                add(row, i + 1, j + 1, w * dt);
                add(row, i + 1, j - 1, -w * dt);
            }
        };
        auto north_face = [&](int i, int j) {
            const FaceValue f = north(u, i, j);
            const double dn = f.d_normal / h2, dt = f.d_transverse / (4.0 * h1);
            for (int side = 0; side < 2; ++side) {
                const int rj = side == 0 ? j : j + 1;
                if (!interior(i, rj)) continue;
                const double w = (side == 0 ? 1.0 : -1.0) / h2;
                const int row = unknown(i, rj);
                add(row, i, j + 1, w * dn);
                add(row, i, j, -w * dn);
                add(row, i + 1, j, w * dt);
                add(row, i - 1, j, -w * dt);
                add(row, i + 1, j + 1, w * dt);
                add(row, i - 1, j + 1, -w * dt);
            }
        };
        for (int j = 1; j < g_.ny - 1; ++j)
            for (int i = 0; i < g_.nx - 1; ++i) east_face(i, j);
        for (int j = 0; j < g_.ny - 1; ++j)
            for (int i = 1; i < g_.nx - 1; ++i) north_face(i, j);
        return ab;
    }

    const GridSpec& grid() const { return g_; }
    double sign() const { return sg_; }

private:
    GridSpec g_;
    Faces lam_;
    double sg_;
};

std::vector<double> band_solve(std::vector<double> ab, int n, int kl, int ku, std::vector<double> rhs) {
    std::vector<lapack_int> ipiv(n);
    const lapack_int info = LAPACKE_dgbsv(LAPACK_COL_MAJOR, n, kl, ku, 1, ab.data(), 2 * kl + ku + 1,
                                          ipiv.data(), rhs.data(), n);
    if (info != 0) throw Error("banded LU failed (LAPACK info " + std::to_string(info) + ")");
    return rhs;
}

double sup_norm(const Grid2D& g) { return g.max_abs(); }

Grid2D boundary_only(const DirichletProblem& p) {
    const GridSpec& g = p.grid;
    Grid2D u(g);
    for (int i = 0; i < g.nx; ++i) {
        u.at(i, 0) = p.boundary.value(g.node(i, 0));
        u.at(i, g.ny - 1) = p.boundary.value(g.node(i, g.ny - 1));
    }
    for (int j = 0; j < g.ny; ++j) {
        u.at(0, j) = p.boundary.value(g.node(0, j));
        u.at(g.nx - 1, j) = p.boundary.value(g.node(g.nx - 1, j));
    }
    return u;
}

// Five-point Laplace extension of the boundary values.
Grid2D harmonic_extension(const DirichletProblem& p, const Discretization& d) {
    Grid2D u = boundary_only(p);
    const GridSpec& g = p.grid;
    const int n = d.unknowns(), kl = d.band(), ku = d.band(), ld = 2 * kl + ku + 1;
    std::vector<double> ab(static_cast<std::size_t>(ld) * n, 0.0), rhs(n, 0.0);
    const double c1 = 1.0 / (g.h1() * g.h1()), c2 = 1.0 / (g.h2() * g.h2());
    for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 1; i < g.nx - 1; ++i) {
            const int row = d.unknown(i, j);
            auto put = [&](int ci, int cj, double v) {
                if (d.interior(ci, cj)) {
                    const int col = d.unknown(ci, cj);
                    ab[static_cast<std::size_t>(kl + ku + row - col) + static_cast<std::size_t>(col) * ld] += v;
                } else {
                    rhs[row] -= v * u.at(ci, cj);
                }
            };
            put(i, j, -2.0 * (c1 + c2));
            put(i - 1, j, c1);
            put(i + 1, j, c1);
            put(i, j - 1, c2);
            put(i, j + 1, c2);
        }
    }
    const auto x = band_solve(std::move(ab), n, kl, ku, std::move(rhs));
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) u.at(i, j) = x[d.unknown(i, j)];
    return u;
}

}  // namespace

Grid2D discrete_residual(const DirichletProblem& p, const Grid2D& u) {
    p.grid.validate();
    return Discretization(p).residual(u);
}

Solution solve_dirichlet(const DirichletProblem& p, double tol_newton) {
    p.grid.validate();
    if (p.grid.nx < 3 || p.grid.ny < 3) throw ValidationError("solver grid needs at least 3 x 3 nodes");
    const Discretization d(p);
    const bool lorentzian = p.signature == graph::Signature::Lorentzian;
    auto admissible = [&](double margin) { return !lorentzian || margin >= p.eps_space; };

    Grid2D u = p.initial == InitialGuess::Harmonic ? harmonic_extension(p, d)
                                                   : Grid2D::sample(p.grid, [&](const Point& q) {
                                                         return p.boundary.value(q);
                                                     });
    SolveReport rep;
    double margin = d.min_margin(u);
    if (!admissible(margin)) {
        throw NonSpacelikeError("initial guess is not spacelike (min 1 - |Du|^2 = " +
                                std::to_string(margin) + "); boundary data too steep");
    }
    Grid2D r = d.residual(u);
    double norm = sup_norm(r);
    rep.initial_residual_sup = norm;
    rep.residual_history.push_back(norm);
    rep.margin_history.push_back(margin);

    const int n = d.unknowns(), kl = d.band();
    while (norm >= tol_newton) {
        if (rep.iterations >= p.max_iterations) {
            rep.residual_sup = norm;
            rep.min_margin = margin;
            throw SolveError("Newton iteration did not converge in " + std::to_string(p.max_iterations) +
                                 " iterations (residual " + std::to_string(norm) + ")",
                             rep);
        }
        std::vector<double> rhs(n);
        for (int j = 1; j < p.grid.ny - 1; ++j)
            for (int i = 1; i < p.grid.nx - 1; ++i) rhs[d.unknown(i, j)] = -r.at(i, j);
        const auto step = band_solve(d.jacobian(u), n, kl, kl, std::move(rhs));

        bool accepted = false;
        for (double alpha = 1.0; alpha > 1e-12; alpha *= 0.5) {
            Grid2D trial = u;
            for (int j = 1; j < p.grid.ny - 1; ++j)
                for (int i = 1; i < p.grid.nx - 1; ++i) trial.at(i, j) += alpha * step[d.unknown(i, j)];
            const double trial_margin = d.min_margin(trial);
            if (!admissible(trial_margin)) continue;
            Grid2D trial_r = d.residual(trial);
            const double trial_norm = sup_norm(trial_r);
            if (!(trial_norm < norm)) continue;
            u = std::move(trial);
            r = std::move(trial_r);
            norm = trial_norm;
            margin = trial_margin;
            rep.step_lengths.push_back(alpha);
            accepted = true;
            break;
        }
        if (!accepted) {
            rep.residual_sup = norm;
            rep.min_margin = margin;
            throw SolveError("no admissible Newton step (residual " + std::to_string(norm) + ")", rep);
        }
        ++rep.iterations;
        rep.residual_history.push_back(norm);
        rep.margin_history.push_back(margin);
    }
    rep.residual_sup = norm;
    rep.min_margin = margin;
    rep.converged = true;
    return {std::move(u), rep};
}

RefinementStudy refinement_study(const DirichletProblem& p, const ScalarField& exact, int levels,
                                 double tol_newton) {
    if (levels < 2) throw ValidationError("refinement study needs at least two levels");
    const int factor = 1 << (levels - 1);
    if ((p.grid.nx - 1) % factor != 0 || (p.grid.ny - 1) % factor != 0) {
        throw ValidationError("grid resolution minus one must be divisible by 2^(levels-1)");
    }
    RefinementStudy study;
    for (int level = levels - 1; level >= 0; --level) {
        DirichletProblem q = p;
        q.grid.nx = (p.grid.nx - 1) / (1 << level) + 1;
        q.grid.ny = (p.grid.ny - 1) / (1 << level) + 1;
        const Solution s = solve_dirichlet(q, tol_newton);
        RefinementLevel row;
        row.n = q.grid.nx;
        row.h = std::max(q.grid.h1(), q.grid.h2());
        row.iterations = s.report.iterations;
        row.min_margin = s.report.min_margin;
        row.min_iterate_margin =
            *std::min_element(s.report.margin_history.begin(), s.report.margin_history.end());
        for (int j = 0; j < q.grid.ny; ++j)
            for (int i = 0; i < q.grid.nx; ++i)
                row.sup_error = std::max(row.sup_error, std::abs(s.u.at(i, j) - exact.value(q.grid.node(i, j))));
        study.levels.push_back(row);
    }
    for (std::size_t k = 1; k < study.levels.size(); ++k) {
        study.orders.push_back(std::log2(study.levels[k - 1].sup_error / study.levels[k].sup_error));
    }
    study.observed_order = *std::min_element(study.orders.begin(), study.orders.end());
    return study;
}

}  // namespace maxgraph::solver
