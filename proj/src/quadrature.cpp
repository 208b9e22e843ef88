#include "heun_rsj/quadrature.hpp"

#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "heun_rsj/error.hpp"

namespace heun_rsj {

namespace {

struct Panel {
    double a;
    double b;
    double value;
    double error;
    double l1;

    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel apply_rule(const std::function<double(double)>& f, double a, double b) {
    using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
    double error = 0.0;
    double l1 = 0.0;
    const double value = Rule::integrate(f, a, b, 0, 0.0, &error, &l1);
    if (!std::isfinite(value) || !std::isfinite(error)) {
        throw Error(ErrorCode::QuadratureFailure,
                    "non-finite integrand on [" + short_number(a) + ", " + short_number(b) + "]");
    }
    return {a, b, value, error, l1};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, double rel_tol, int max_intervals) {
    if (a == b) return {};
    std::priority_queue<Panel> panels;
    panels.push(apply_rule(f, a, b));
    double value = panels.top().value;
    double error = panels.top().error;
    double l1 = panels.top().l1;

    auto converged = [&] { return error <= std::max(abs_tol, rel_tol * l1); };
    while (!converged()) {
        if (static_cast<int>(panels.size()) >= max_intervals) {
            throw Error(ErrorCode::QuadratureFailure,
                        "error estimate " + std::to_string(error) + " after " +
                            std::to_string(panels.size()) + " intervals");
        }
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = apply_rule(f, worst.a, mid);
        const Panel right = apply_rule(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        panels.push(left);
        panels.push(right);
    }

    // Re-sum from the panels so the running updates leave no drift.
    QuadratureResult result;
    result.intervals = static_cast<int>(panels.size());
    while (!panels.empty()) {
        result.value += panels.top().value;
        result.error += panels.top().error;
        result.abs_integral += panels.top().l1;
        panels.pop();
    }
    return result;
}

}  // namespace heun_rsj
