#include "maxgraph/quadrature.hpp"

#include "maxgraph/types.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

namespace maxgraph::quad {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss7 = boost::math::quadrature::gauss<double, 7>;

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel kronrod_panel(const Integrand& f, double a, double b) {
    const auto& x = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss7::weights();
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    const double f0 = f(c);
    double k = wk[0] * f0;
    double g = wg[0] * f0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double s = f(c - r * x[i]) + f(c + r * x[i]);
        k += wk[i] * s;
        if (i % 2 == 0) g += wg[i / 2] * s;
    }
    k *= r;
    g *= r;
    if (!std::isfinite(k)) throw DomainError("non-finite integrand on [" + std::to_string(a) + ", " +
                                             std::to_string(b) + "]");
    return {a, b, k, std::abs(k - g)};
}

}  // namespace

double gauss_legendre32(const Integrand& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 32>::integrate(f, a, b);
}

Estimate adaptive(const Integrand& f, double a, double b, double abs_tol, int max_intervals) {
    if (b < a) {
        Estimate flipped = adaptive(f, b, a, abs_tol, max_intervals);
        flipped.value = -flipped.value;
        return flipped;
    }
    if (a == b) return {0.0, 0.0, 0, true};
    std::priority_queue<Panel> heap;
    Panel first = kronrod_panel(f, a, b);
    double value = first.value, error = first.error;
    heap.push(first);
    while (error > abs_tol && static_cast<int>(heap.size()) < max_intervals) {
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        const Panel left = kronrod_panel(f, worst.a, mid);
        const Panel right = kronrod_panel(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to drop the drift of the running updates.
    Estimate out;
    out.intervals = static_cast<int>(heap.size());
    std::vector<Panel> panels;
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
    for (const Panel& p : panels) {
        out.value += p.value;
        out.error += p.error;
    }
    out.converged = out.error <= abs_tol;
    return out;
}

}  // namespace maxgraph::quad
