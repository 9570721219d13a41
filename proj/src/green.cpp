#include "rbm/green.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "rbm/boundary.hpp"
#include "rbm/errors.hpp"
#include "rbm/quadrature.hpp"

namespace rbm {

namespace {

constexpr double kPoleThreshold = 1e-14;

// (e^w - 1) / w without cancellation near w = 0.
cplx phi1(cplx w)
{
    if (std::abs(w) < 1e-5)
        return 1.0 + w * (0.5 + w / 6.0);
    return (std::exp(w) - 1.0) / w;
}

} // namespace

cplx f_transform(const NormalizedModel& model, const CVec2& theta)
{
    const auto b = theta2_branches(model, theta[0]);
    const cplx kernel_factor = theta[1] - b.plus;
    const cplx line_factor = model.r * theta[0] + b.minus;
    if (std::abs(kernel_factor) < kPoleThreshold)
        throw Error(ErrorCode::AtPole, "theta lies on the kernel circle Q = 0");
    if (std::abs(line_factor) < kPoleThreshold)
        throw Error(ErrorCode::AtPole, "theta1 is a pole of g");

    const double x1 = model.x[0];
    const double x2 = model.x[1];
    // Written as a combination that stays finite when theta2 approaches Theta2-.
    const cplx e = std::exp(b.minus * x2);
    const cplx bracket = e - line_factor * x2 * e * phi1((theta[1] - b.minus) * x2);
    return 2.0 * std::exp(theta[0] * x1) * bracket / (kernel_factor * line_factor);
}

ContourBand contour_band(const NormalizedModel& model)
{
    const auto g = geometry(model);
    ContourBand band{0.0, g.theta1_plus};
    if (g.pole_p && *g.pole_p > 0.0)
        band.upper = *g.pole_p;
    if (model.drift_sign != DriftSign::Mu2Negative)
        band.lower = (g.pole_p && *g.pole_p < 0.0) ? *g.pole_p : g.theta1_minus;
    return band;
}

double contour_abscissa(const NormalizedModel& model, std::optional<double> alpha)
{
    const auto band = contour_band(model);
    if (!alpha)
        return 0.5 * (band.lower + band.upper);
    const double margin = 1e-3 * (band.upper - band.lower);
    const double theta1_alpha = -model.mu[0] + norm(model.mu) * std::cos(*alpha);
    return std::clamp(theta1_alpha, band.lower + margin, band.upper - margin);
}

namespace {

struct Integrand {
    std::function<cplx(double)> f; // t -> F(eps + i t), already divided by pi
    double decay;                  // |F| ~ exp(-decay |t|)
};

Integrand make_integrand(const NormalizedModel& model, const Vec2& z, double eps,
                         DensityRoute route)
{
    const double x1 = model.x[0];
    const double x2 = model.x[1];
    const double z1 = z[0];
    const double z2 = z[1];
    const double r = model.r;
    const double inv_pi = 1.0 / std::numbers::pi;

    switch (route) {
    case DensityRoute::BoundaryTransform:
        return {[&model, z1, z2, eps, inv_pi](double t) {
                    const cplx th1{eps, t};
                    const auto b = theta2_branches(model, th1);
                    return inv_pi * std::exp(-z1 * th1 - z2 * b.plus) * g_eval(model, th1);
                },
                z2};
    case DensityRoute::StartingPoint:
        return {[=](double t) {
                    const cplx th1{eps, t};
                    const auto b = theta2_branches(model, th1);
                    const cplx ratio = (r * th1 + b.plus) / (r * th1 + b.minus);
                    const cplx direct = std::exp(th1 * (x1 - z1) + b.plus * (x2 - z2));
                    const cplx reflected =
                        ratio * std::exp(th1 * (x1 - z1) + b.minus * x2 - b.plus * z2);
                    return inv_pi * (direct - reflected) / (b.plus - b.minus);
                },
                z2 - x2};
    case DensityRoute::FreePlusReflected:
    case DensityRoute::Automatic:
        break;
    }
    return {[=](double t) {
                const cplx th1{eps, t};
                const auto b = theta2_branches(model, th1);
                const cplx ratio = (r * th1 + b.plus) / (r * th1 + b.minus);
                const cplx reflected =
                    ratio * std::exp(th1 * (x1 - z1) + b.minus * x2 - b.plus * z2);
                return -inv_pi * reflected / (b.plus - b.minus);
            },
            z2 + x2};
}

// Density of the free (unreflected) motion started at x, at z.
double free_green(const NormalizedModel& model, const Vec2& z)
{
    const Vec2 d{z[0] - model.x[0], z[1] - model.x[1]};
    const double dist = norm(d);
    return std::exp(dot(model.mu, d)) * std::cyl_bessel_k(0.0, norm(model.mu) * dist) /
           std::numbers::pi;
}

} // namespace

QuadratureResult density_normalized(const NormalizedModel& model, const Vec2& z, double tol,
                                    const DensityOptions& options)
{
    if (!(tol > 0.0) || !std::isfinite(z[0]) || !std::isfinite(z[1]))
        throw Error(ErrorCode::InvalidArgument, "density needs finite z and tol > 0");
    if (z[1] < kZ2Min)
        throw Error(ErrorCode::BoundaryTooClose, "z2 below the minimum distance to the boundary");

    DensityRoute route = options.route;
    if (route == DensityRoute::Automatic)
        route = model.starts_at_origin() ? DensityRoute::BoundaryTransform
                                         : DensityRoute::FreePlusReflected;
    if (route == DensityRoute::BoundaryTransform && !model.starts_at_origin())
        throw Error(ErrorCode::InvalidArgument, "boundary-transform route needs a start at 0");
    if (route == DensityRoute::StartingPoint && z[1] - model.x[1] < kZ2Min)
        throw Error(ErrorCode::InvalidArgument, "starting-point route needs z2 > x2");

    double free_part = 0.0;
    if (route == DensityRoute::FreePlusReflected) {
        const double scale = 1.0 + norm(model.x);
        if (norm({z[0] - model.x[0], z[1] - model.x[1]}) < 1e-12 * scale)
            throw Error(ErrorCode::SingularAtStart, "density is infinite at the starting point");
        free_part = free_green(model, z);
    }

    QuadratureResult out;
    out.contour_abscissa =
        options.abscissa ? *options.abscissa : contour_abscissa(model, std::atan2(z[1], z[0]));
    const auto integrand = make_integrand(model, z, out.contour_abscissa, route);

    AdaptiveOptions q;
    q.rel_tol = tol;
    q.max_nodes = options.max_nodes;

    auto tail_bound = [&](double height) {
        return (std::abs(integrand.f(height)) + std::abs(integrand.f(-height))) / integrand.decay;
    };

    double height = std::max(1.0, 10.0 / integrand.decay);
    auto piece = integrate_adaptive(integrand.f, -height, height, q);
    cplx total = piece.value;
    double error = piece.error;
    double abs_integral = piece.abs_integral;
    std::size_t nodes = piece.nodes;
    double tail = tail_bound(height);
    nodes += 2;

    for (int doubling = 0; doubling < 64; ++doubling) {
        const double target = 0.1 * tol * std::abs(free_part + total.real());
        if (tail <= std::max(target, q.abs_tol))
            break;
        if (nodes >= options.max_nodes)
            throw Error(ErrorCode::NoConvergence, "quadrature node budget exhausted");
        q.max_nodes = options.max_nodes - nodes;
        q.abs_tol = std::max(1e-300, 0.25 * tol * std::abs(free_part + total.real()));
        const auto upper = integrate_adaptive(integrand.f, height, 2.0 * height, q);
        nodes += upper.nodes;
        q.max_nodes = options.max_nodes > nodes ? options.max_nodes - nodes : 0;
        if (q.max_nodes == 0)
            throw Error(ErrorCode::NoConvergence, "quadrature node budget exhausted");
        const auto lower = integrate_adaptive(integrand.f, -2.0 * height, -height, q);
        nodes += lower.nodes;
        total += upper.value + lower.value;
        error += upper.error + lower.error;
        abs_integral += upper.abs_integral + lower.abs_integral;
        height *= 2.0;
        tail = tail_bound(height);
        nodes += 2;
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    out.value = free_part + total.real();
    out.abs_error_estimate = error + tail + std::abs(total.imag()) + 16.0 * eps * abs_integral;
    out.nodes_used = nodes;
    out.truncation_height = height;
    return out;
}

QuadratureResult density(const NormalizedModel& model, const Vec2& z, double tol,
                         const DensityOptions& options)
{
    auto result = density_normalized(model, mul(model.T, z), tol, options);
    const double jac = std::abs(model.detT);
    result.value *= jac;
    result.abs_error_estimate *= jac;
    return result;
}

double box_integral(const NormalizedModel& model, const Vec2& lo, const Vec2& hi, int cells,
                    double tol)
{
    using rule = boost::math::quadrature::gauss<double, 5>;
    const auto& x = rule::abscissa();
    const auto& w = rule::weights();
    // Expand the symmetric half-rule into full node/weight lists on [-1, 1].
    std::vector<double> nodes;
    std::vector<double> weights;
    for (std::size_t i = 0; i < x.size(); ++i) {
        nodes.push_back(x[i]);
        weights.push_back(w[i]);
        if (x[i] != 0.0) {
            nodes.push_back(-x[i]);
            weights.push_back(w[i]);
        }
    }

    const double h1 = (hi[0] - lo[0]) / cells;
    const double h2 = (hi[1] - lo[1]) / cells;
    if (!(h1 > 0.0) || !(h2 > 0.0))
        return 0.0;
    double sum = 0.0;
    for (int i = 0; i < cells; ++i) {
        const double c1 = lo[0] + (i + 0.5) * h1;
        for (int j = 0; j < cells; ++j) {
            const double c2 = lo[1] + (j + 0.5) * h2;
            for (std::size_t a = 0; a < nodes.size(); ++a)
                for (std::size_t b = 0; b < nodes.size(); ++b) {
                    const Vec2 z{c1 + 0.5 * h1 * nodes[a], c2 + 0.5 * h2 * nodes[b]};
                    sum += weights[a] * weights[b] * density(model, z, tol).value;
                }
        }
    }
    return sum * 0.25 * h1 * h2;
}

} // namespace rbm
