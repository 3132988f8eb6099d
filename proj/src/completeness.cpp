#include "maxgraph/completeness.hpp"

#include "maxgraph/expr.hpp"
#include "maxgraph/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace maxgraph::completeness {

using graph::Signature;

Curve Curve::from_expressions(std::string name, const std::string& x1, const std::string& x2,
                              double a, double b, bool open_a, bool open_b) {
    const auto vars = expr::VariableSet::curve_parameter();
    const expr::Expr c1 = expr::parse(x1, vars), c2 = expr::parse(x2, vars);
    const expr::Expr d1 = expr::simplify(expr::differentiate(c1, 0));
    const expr::Expr d2 = expr::simplify(expr::differentiate(c2, 0));
    if (!(a < b)) throw ValidationError("curve '" + name + "' needs an interval with a < b");
    Curve c;
    c.name = std::move(name);
    c.position = [c1, c2](double s) { return Point(c1.eval(s), c2.eval(s)); };
    c.velocity = [d1, d2](double s) { return Vec2(d1.eval(s), d2.eval(s)); };
    c.a = a;
    c.b = b;
    c.open_a = open_a || std::isinf(a);
    c.open_b = open_b || std::isinf(b);
    return c;
}

Curve Curve::segment(const Point& p, const Point& q) {
    Curve c;
    c.name = "segment";
    c.position = [p, q](double s) { return Point(p + s * (q - p)); };
    c.velocity = [p, q](double) { return Vec2(q - p); };
    return c;
}

bool Curve::improper_a() const { return open_a || std::isinf(a); }
bool Curve::improper_b() const { return open_b || std::isinf(b); }

double induced_norm_sq(const GraphSurface& s, const Point& p, const Vec2& X) {
    const auto& m = s.metric();
    if (!m.domain().contains(p)) throw DomainError("curve leaves the domain at " + format_point(p));
    const double lam = m.lambda(p);
    if (!(lam > 0.0)) throw DomainError("conformal factor not positive at " + format_point(p));
    const Vec2 du = s.height().gradient(p);
    if (s.signature() == Signature::Lorentzian && !(s.spacelike_margin(p) > 0.0)) {
        throw NonSpacelikeError("graph is not spacelike on the curve at " + format_point(p));
    }
    double g;
    if (s.signature() == Signature::Lorentzian && s.has_stable_margin()) {
        // lambda |X|^2 - (X.du)^2 = lambda |X|^2 (1 - |Du|^2) + (X x du)^2
        const double cross = X.x() * du.y() - X.y() * du.x();
        g = lam * X.squaredNorm() * s.spacelike_margin(p) + cross * cross;
    } else {
        const double along = X.dot(du);
        g = lam * X.squaredNorm() + graph::sign(s.signature()) * along * along;
    }
    if (g < 0.0) throw NonSpacelikeError("curve tangent is timelike at " + format_point(p));
    return g;
}

namespace {

struct Tail {
    double sum = 0.0;
    double last = 0.0, previous = 0.0;
    int count = 0;
    bool converged = false;
    bool extrapolated = false;
    double error = 0.0;
};

// Sums dyadic pieces produced by `piece(k)` until `quiet` successive pieces
// are below tol/10, the running total passes the cap, or the integrand
// breaks down.
template <class Piece>
Tail sum_tail(Piece piece, const LengthOptions& opts, double core) {
    Tail t;
    int quiet = 0;
    auto remainder = [&]() -> std::optional<double> {
        if (t.count < 2 || t.previous <= 0.0) return std::nullopt;
        const double rho = t.last / t.previous;
        if (!(rho >= 0.0 && rho < 1.0)) return std::nullopt;
        return t.last * rho / (1.0 - rho);
    };
    for (int k = 0; k < opts.max_tails; ++k) {
        quad::Estimate e;
        try {
            e = piece(k);
        } catch (const DomainError&) {
            const auto rem = remainder();
            if (!rem) throw;
            t.sum += *rem;
            t.error += *rem;
            t.extrapolated = true;
            t.converged = true;
            return t;
        }
        t.previous = t.last;
        t.last = e.value;
        t.sum += e.value;
        t.error += e.error;
        ++t.count;
        if (core + t.sum > opts.length_cap) return t;
        quiet = e.value < opts.tol / 10 ? quiet + 1 : 0;
        if (quiet >= opts.quiet_tails) {
            if (const auto rem = remainder()) {
                t.sum += *rem;
                t.error += *rem;
            }
            t.converged = true;
            return t;
        }
    }
    return t;
}

LengthResult integrate(const std::function<double(double)>& speed, const Curve& c,
                       const LengthOptions& opts) {
    const bool fin_a = std::isfinite(c.a), fin_b = std::isfinite(c.b);
    double ca, cb;
    if (fin_a && fin_b) {
        const double span = c.b - c.a;
        ca = c.improper_a() ? c.a + span / 4 : c.a;
        cb = c.improper_b() ? c.b - span / 4 : c.b;
    } else if (fin_a) {
        ca = c.improper_a() ? c.a + 0.5 : c.a;
        cb = ca + 1.0;
    } else if (fin_b) {
        cb = c.improper_b() ? c.b - 0.5 : c.b;
        ca = cb - 1.0;
    } else {
        ca = -1.0;
        cb = 1.0;
    }
    const double piece_tol = opts.tol / 100;

    LengthResult r;
    const quad::Estimate core = quad::adaptive(speed, ca, cb, opts.tol / 4);
    r.length = core.value;
    r.error_estimate = core.error;
    r.converged = core.converged;

    auto absorb = [&](const Tail& t) {
        r.length += t.sum;
        r.error_estimate += t.error;
        r.converged = r.converged && t.converged;
        r.extrapolated = r.extrapolated || t.extrapolated;
        r.tails += t.count;
    };
    if (c.improper_a()) {
        if (fin_a) {
            const double d = ca - c.a;
            absorb(sum_tail([&](int k) {
                return quad::adaptive(speed, c.a + d / std::ldexp(1.0, k + 1), c.a + d / std::ldexp(1.0, k), piece_tol);
            }, opts, r.length));
        } else {
            const double d = std::max(1.0, cb - ca);
            absorb(sum_tail([&](int k) {
                return quad::adaptive(speed, ca - (std::ldexp(1.0, k + 1) - 1) * d, ca - (std::ldexp(1.0, k) - 1) * d, piece_tol);
            }, opts, r.length));
        }
    }
    if (c.improper_b()) {
        if (fin_b) {
            const double d = c.b - cb;
            absorb(sum_tail([&](int k) {
                return quad::adaptive(speed, c.b - d / std::ldexp(1.0, k), c.b - d / std::ldexp(1.0, k + 1), piece_tol);
            }, opts, r.length));
        } else {
            const double d = std::max(1.0, cb - ca);
            absorb(sum_tail([&](int k) {
                return quad::adaptive(speed, cb + (std::ldexp(1.0, k) - 1) * d, cb + (std::ldexp(1.0, k + 1) - 1) * d, piece_tol);
            }, opts, r.length));
        }
    }
    if (r.length > opts.length_cap) r.converged = false;
    return r;
}

}  // namespace

LengthResult curve_length(const GraphSurface& s, const Curve& c, const LengthOptions& opts) {
    return integrate(
        [&](double t) { return std::sqrt(induced_norm_sq(s, c.position(t), c.velocity(t))); }, c, opts);
}

LengthResult base_length(const ConformalMetric& m, const Curve& c, const LengthOptions& opts) {
    return integrate(
        [&](double t) {
            const Point p = c.position(t);
            if (!m.domain().contains(p)) throw DomainError("curve leaves the domain at " + format_point(p));
            return std::sqrt(m.norm_sq(p, c.velocity(t)));
        },
        c, opts);
}

std::vector<ProbeResult> ray_probe(const GraphSurface& s, const std::vector<Curve>& curves,
                                   const LengthOptions& opts) {
    std::vector<ProbeResult> out;
    for (const Curve& c : curves) {
        ProbeResult p;
        p.curve = c.name;
        p.length = curve_length(s, c, opts);
        p.verdict = p.length.converged && p.length.length < opts.length_cap ? Verdict::FiniteLength
                                                                            : Verdict::Inconclusive;
        out.push_back(p);
    }
    return out;
}

ScanResult metric_ratio_scan(const GraphSurface& s, const ConformalMetric& reference,
                             const std::vector<Point>& samples) {
    if (samples.empty()) throw ValidationError("metric ratio scan needs at least one sample");
    ScanResult r;
    r.infimum = std::numeric_limits<double>::infinity();
    for (const Point& p : samples) {
        s.metric().require(p);
        reference.require(p);
        s.require_spacelike(p);
        // Eigenvalues of lambda I -/+ du du^T are lambda and lambda (1 -/+ |Du|^2).
        const double lam = s.metric().lambda(p);
        const double low = std::min(lam, lam * s.spacelike_margin(p));
        const double ratio = low / reference.lambda(p);
        if (ratio < r.infimum) {
            r.infimum = ratio;
            r.argmin = p;
        }
    }
    return r;
}

}  // namespace maxgraph::completeness
