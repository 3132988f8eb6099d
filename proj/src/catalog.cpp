#include "maxgraph/catalog.hpp"

#include "maxgraph/duality.hpp"
#include "maxgraph/expr.hpp"
#include "maxgraph/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace maxgraph::catalog {

using graph::ConformalMetric;
using graph::Signature;

std::string property_name(Property p) {
    switch (p) {
        case Property::Minimal: return "minimal";
        case Property::Maximal: return "maximal";
        case Property::Entire: return "entire";
        case Property::Complete: return "complete";
        case Property::Incomplete: return "incomplete";
        case Property::TotallyGeodesic: return "totally_geodesic";
    }
    return "unknown";
}

const std::vector<std::string>& names() {
    static const std::vector<std::string> all{"minimal-log", "minimal-inv", "maximal-w1", "maximal-w2",
                                              "flat-incomplete", "slice", "affine"};
    return all;
}

double elliptic_f(double phi, double k) {
    if (!(std::abs(phi) <= std::numbers::pi / 2)) throw ValidationError("elliptic_f needs |phi| <= pi/2");
    if (!(k >= 0.0 && k < 1.0)) throw ValidationError("elliptic_f needs 0 <= k < 1");
    return std::ellint_1(k, phi);
}

FlatSmoothing flat_smoothing() {
    const double v1 = std::sqrt(1.0 - std::exp(-1.0));
    const double U1 = 2.0 * std::log1p(v1) + 1.0 - 2.0 * v1;
    const double U2 = std::exp(-1.0) / (2.0 * v1);
    FlatSmoothing f;
    f.c = (U2 - v1) / 8.0;
    f.b = (v1 - 4.0 * f.c) / 2.0;
    f.a = U1 - f.b - f.c;
    return f;
}

namespace {

ScalarField field(const std::string& text) { return ScalarField::from_expr(expr::parse(text)); }

std::array<ScalarField, 2> partials(const std::string& d1, const std::string& d2) {
    return {field(d1), field(d2)};
}

CatalogEntry closed_form(std::string name, std::string description, ConformalMetric metric,
                         Signature sig, const std::string& text, std::set<Property> props) {
    return CatalogEntry{std::move(name), std::move(description), std::move(metric), sig, field(text),
                        std::move(props), std::nullopt, {}, text};
}

CatalogEntry minimal_log() {
    auto e = closed_form("minimal-log", "entire minimal graph log(x1^2+x2^2) over the half-plane",
                         ConformalMetric::hyperbolic_half_plane(), Signature::Riemannian,
                         "log(x1^2+x2^2)",
                         {Property::Minimal, Property::Entire, Property::Complete});
    e.closed_form_partials = partials("2*x1/(x1^2+x2^2)", "2*x2/(x1^2+x2^2)");
    return e;
}

CatalogEntry minimal_inv() {
    auto e = closed_form("minimal-inv", "entire minimal graph x1/(x1^2+x2^2) over the half-plane",
                         ConformalMetric::hyperbolic_half_plane(), Signature::Riemannian,
                         "x1/(x1^2+x2^2)",
                         {Property::Minimal, Property::Entire, Property::Complete});
    e.closed_form_partials = partials("(x2^2-x1^2)/(x1^2+x2^2)^2", "-2*x1*x2/(x1^2+x2^2)^2");
    return e;
}

// Value by quadrature of the dual partial along the horizontal segment from
// the x2-axis, where the dual vanishes; partials straight from the duality.
CatalogEntry maximal_w1() {
    const ConformalMetric h2 = ConformalMetric::hyperbolic_half_plane();
    const ScalarField source = minimal_log().u;
    const ScalarField dual = duality::dual_gradient_field(source, h2);
    auto value = [source, h2](const Point& p) {
        h2.require(p);
        const double x2 = p.y();
        auto integrand = [&](double t) { return duality::dual_partials(source, h2, {t, x2})[0]; };
        return quad::adaptive(integrand, 0.0, p.x(), 1e-14).value;
    };
    CatalogEntry e{"maximal-w1",
                   "complete entire maximal graph dual to minimal-log",
                   h2,
                   Signature::Lorentzian,
                   ScalarField::analytic(value, [dual](const Point& p) { return dual.gradient(p); },
                                         [dual](const Point& p) { return dual.hessian(p); }),
                   {Property::Maximal, Property::Entire, Property::Complete},
                   partials("-2*x2/sqrt((x1^2+x2^2)*(x1^2+5*x2^2))",
                            "2*x1/sqrt((x1^2+x2^2)*(x1^2+5*x2^2))"),
                   [](const Point& p) {
                       const double r2 = p.squaredNorm();
                       return r2 / (p.x() * p.x() + 5.0 * p.y() * p.y());
                   },
                   std::nullopt};
    return e;
}

CatalogEntry maximal_w2() {
    auto e = closed_form("maximal-w2", "incomplete entire maximal graph dual to minimal-inv",
                         ConformalMetric::hyperbolic_half_plane(), Signature::Lorentzian,
                         "log((x1^2+x2^2)/(2*(x2+sqrt(x2^2+(x1^2+x2^2)^2))))",
                         {Property::Maximal, Property::Entire, Property::Incomplete});
    e.closed_form_partials =
        partials("2*x1*x2/((x1^2+x2^2)*sqrt((x1^2+x2^2)^2+x2^2))",
                 "(x2^2-x1^2)/((x1^2+x2^2)*sqrt((x1^2+x2^2)^2+x2^2))");
    // r^4 / (r^4 + x2^2) written with q = r^2 / x2 so it survives x2 -> 0.
    e.margin = [](const Point& p) {
        const double q = p.squaredNorm() / p.y();
        return q * q / (q * q + 1.0);
    };
    return e;
}

// u(x1) = U(|x1|) for |x1| >= 1 with U(x) = integral of sqrt(1 - e^-t) over
// [0, x] = 2 log(1 + v) + x - 2 v, v = sqrt(1 - e^-x); the even quartic
// smoothing inside.
CatalogEntry flat_incomplete() {
    const FlatSmoothing f = flat_smoothing();
    auto value = [f](const Point& p) {
        const double x = std::abs(p.x());
        if (x < 1.0) return f.a + x * x * (f.b + f.c * x * x);
        const double v = std::sqrt(-std::expm1(-x));
        return 2.0 * std::log1p(v) + x - 2.0 * v;
    };
    auto slope = [f](double x) {  // d/dx1 for x1 >= 0
        if (x < 1.0) return x * (2.0 * f.b + 4.0 * f.c * x * x);
        return std::sqrt(-std::expm1(-x));
    };
    auto gradient = [slope](const Point& p) {
        const double x = p.x();
        return Vec2(std::copysign(slope(std::abs(x)), x), 0.0);
    };
    auto hessian = [f](const Point& p) {
        const double x = std::abs(p.x());
        Mat2 H = Mat2::Zero();
        H(0, 0) = x < 1.0 ? 2.0 * f.b + 12.0 * f.c * x * x
                          : std::exp(-x) / (2.0 * std::sqrt(-std::expm1(-x)));
        return H;
    };
    CatalogEntry e{"flat-incomplete",
                   "entire spacelike graph in flat Lorentzian space with finite-length horizontal rays",
                   ConformalMetric::euclidean(),
                   Signature::Lorentzian,
                   ScalarField::analytic(value, gradient, hessian),
                   {Property::Entire, Property::Incomplete},
                   std::nullopt,
                   [slope](const Point& p) {
                       const double x = std::abs(p.x());
                       if (x >= 1.0) return std::exp(-x);
                       const double d = slope(x);
                       return 1.0 - d * d;
                   },
                   std::nullopt};
    return e;
}

CatalogEntry slice() {
    auto e = closed_form("slice", "horizontal slice u = 0 over the half-plane",
                         ConformalMetric::hyperbolic_half_plane(), Signature::Lorentzian, "0",
                         {Property::Maximal, Property::Entire, Property::Complete,
                          Property::TotallyGeodesic});
    e.closed_form_partials = partials("0", "0");
    return e;
}

CatalogEntry affine() {
    auto e = closed_form("affine", "spacelike affine plane in flat Lorentzian space",
                         ConformalMetric::euclidean(), Signature::Lorentzian, "0.3*x1+0.4*x2",
                         {Property::Maximal, Property::Entire, Property::Complete,
                          Property::TotallyGeodesic});
    e.closed_form_partials = partials("0.3", "0.4");
    return e;
}

}  // namespace

CatalogEntry get_example(const std::string& name) {
    if (name == "minimal-log") return minimal_log();
    if (name == "minimal-inv") return minimal_inv();
    if (name == "maximal-w1") return maximal_w1();
    if (name == "maximal-w2") return maximal_w2();
    if (name == "flat-incomplete") return flat_incomplete();
    if (name == "slice") return slice();
    if (name == "affine") return affine();
    throw ValidationError("unknown catalog entry '" + name + "'");
}

}  // namespace maxgraph::catalog
