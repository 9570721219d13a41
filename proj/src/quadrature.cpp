#include "rbm/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <queue>
#include <vector>

#include "rbm/errors.hpp"

namespace rbm {

namespace {

struct Panel {
    double a;
    double b;
    cplx kronrod;
    double error;
    double abs_integral;
};

struct Rule {
    // Non-negative abscissae of the 15-point Kronrod rule; entries with even
    // index are the 7-point Gauss nodes.
    std::vector<double> x;
    std::vector<double> wk;
    std::vector<double> wg;
};

const Rule& rule()
{
    static const Rule r = [] {
        using boost::math::quadrature::gauss;
        using boost::math::quadrature::gauss_kronrod;
        Rule out;
        const auto& x = gauss_kronrod<double, 15>::abscissa();
        const auto& wk = gauss_kronrod<double, 15>::weights();
        const auto& wg = gauss<double, 7>::weights();
        out.x.assign(x.begin(), x.end());
        out.wk.assign(wk.begin(), wk.end());
        out.wg.assign(wg.begin(), wg.end());
        return out;
    }();
    return r;
}

Panel evaluate_panel(const std::function<cplx(double)>& f, double a, double b)
{
    const Rule& q = rule();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    cplx k{0.0, 0.0};
    cplx g{0.0, 0.0};
    double k_abs = 0.0;
    for (std::size_t i = 0; i < q.x.size(); ++i) {
        const bool gauss_node = i % 2 == 0;
        if (q.x[i] == 0.0) {
            const cplx v = f(c);
            k += q.wk[i] * v;
            k_abs += q.wk[i] * std::abs(v);
            if (gauss_node)
                g += q.wg[i / 2] * v;
            continue;
        }
        const cplx lo = f(c - h * q.x[i]);
        const cplx hi = f(c + h * q.x[i]);
        k += q.wk[i] * (lo + hi);
        k_abs += q.wk[i] * (std::abs(lo) + std::abs(hi));
        if (gauss_node)
            g += q.wg[i / 2] * (lo + hi);
    }
    return {a, b, k * h, std::abs(k - g) * h, k_abs * h};
}

} // namespace

AdaptiveIntegral integrate_adaptive(const std::function<cplx(double)>& f, double a, double b,
                                    const AdaptiveOptions& options)
{
    constexpr std::size_t kNodesPerPanel = 15;
    auto worse = [](const Panel& p, const Panel& q) { return p.error < q.error; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> heap(worse);

    AdaptiveIntegral out;
    const int n0 = std::max(options.initial_panels, 1);
    cplx total{0.0, 0.0};
    double total_error = 0.0;
    for (int i = 0; i < n0; ++i) {
        const double lo = a + (b - a) * i / n0;
        const double hi = i + 1 == n0 ? b : a + (b - a) * (i + 1) / n0;
        Panel p = evaluate_panel(f, lo, hi);
        total += p.kronrod;
        total_error += p.error;
        heap.push(p);
        out.nodes += kNodesPerPanel;
    }

    while (total_error > std::max(options.abs_tol, options.rel_tol * std::abs(total))) {
        if (out.nodes + 2 * kNodesPerPanel > options.max_nodes)
            throw Error(ErrorCode::NoConvergence, "quadrature node budget exhausted");
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Panel can no longer be split in double precision.
            throw Error(ErrorCode::NoConvergence, "quadrature panel underflow");
        }
        Panel left = evaluate_panel(f, worst.a, mid);
        Panel right = evaluate_panel(f, mid, worst.b);
        out.nodes += 2 * kNodesPerPanel;
        total += left.kronrod + right.kronrod - worst.kronrod;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    std::vector<Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const Panel& p, const Panel& q) { return p.a < q.a; });
    for (const auto& p : panels) {
        out.value += p.kronrod;
        out.error += p.error;
        out.abs_integral += p.abs_integral;
    }
    return out;
}

} // namespace rbm
