#include "rbm/martin.hpp"

#include <algorithm>
#include <cmath>

#include "rbm/asympt.hpp"
#include "rbm/errors.hpp"

namespace rbm {

namespace {

void require_negative_drift(const NormalizedModel& model)
{
    if (model.drift_sign != DriftSign::Mu2Negative)
        throw Error(ErrorCode::NotImplementedForPositiveDrift,
                    "Martin limits are available for mu2 < 0 only");
}

std::function<double(const Vec2&)> saddle_member(const NormalizedModel& model, double alpha)
{
    const auto sd = saddle(model, alpha);
    const Vec2 th = sd.theta_alpha;
    const Vec2 tt = sd.theta_alpha_tilde;
    const double r_th = model.r * th[0] + th[1];
    const double r_tt = model.r * tt[0] + tt[1];
    const double gap = th[1] - tt[1];
    return [=](const Vec2& x) {
        return (r_th * std::exp(dot(tt, x)) - r_tt * std::exp(dot(th, x))) / gap;
    };
}

std::function<double(const Vec2&)> pole_member(const NormalizedModel& model, double p)
{
    const Vec2 tp{p, theta2_branches(model, p).minus.real()};
    return [=](const Vec2& x) { return std::exp(dot(tp, x)); };
}

} // namespace

double martin_limit(const NormalizedModel& model, double alpha, const Vec2& x)
{
    require_negative_drift(model);
    const auto regime = classify(model, alpha);
    switch (regime.tag) {
    case RegimeTag::PoleP:
    case RegimeTag::CoincidenceP:
        return pole_member(model, *regime.theta1p)(x);
    case RegimeTag::PoleZero:
    case RegimeTag::CoincidenceZero:
        return 1.0;
    default:
        return saddle_member(model, alpha)(x);
    }
}

HarmonicFunction harmonic(const NormalizedModel& model, HarmonicFamily family, double alpha)
{
    require_negative_drift(model);
    HarmonicFunction out;
    out.family = family;
    out.mu = model.mu;
    out.r = model.r;
    const auto g = geometry(model);

    switch (family) {
    case HarmonicFamily::ConstantFamily:
        out.h = [](const Vec2&) { return 1.0; };
        break;
    case HarmonicFamily::PoleFamily:
        if (!g.pole_p || !(g.alpha1 > 0.0))
            throw Error(ErrorCode::FamilyUnavailable, "no pole family when alpha1 <= 0");
        out.h = pole_member(model, *g.pole_p);
        break;
    case HarmonicFamily::SaddleFamily:
        if (!(alpha > std::max(g.alpha1, 0.0) && alpha < g.alpha0))
            throw Error(ErrorCode::AlphaOutOfRange,
                        "saddle family needs alpha strictly between alpha1 and alpha0");
        out.alpha = alpha;
        out.h = saddle_member(model, alpha);
        break;
    }
    return out;
}

namespace {

struct Derivatives {
    double d1;
    double d2;
    double laplacian;
};

Derivatives central(const HarmonicFunction& h, const Vec2& x, double s)
{
    const double c = h({x[0], x[1]});
    const double e = h({x[0] + s, x[1]});
    const double w = h({x[0] - s, x[1]});
    const double n = h({x[0], x[1] + s});
    const double so = h({x[0], x[1] - s});
    return {(e - w) / (2.0 * s), (n - so) / (2.0 * s), (e + w + n + so - 4.0 * c) / (s * s)};
}

double richardson(double coarse, double fine, double order)
{
    const double k = std::pow(2.0, order);
    return (k * fine - coarse) / (k - 1.0);
}

} // namespace

HarmonicityReport check_harmonicity(const HarmonicFunction& h, const std::vector<Vec2>& interior,
                                    const std::vector<Vec2>& boundary, double fd_step)
{
    if (!(fd_step > 0.0))
        throw Error(ErrorCode::InvalidArgument, "fd_step must be positive");
    HarmonicityReport rep;
    for (const auto& x : interior) {
        const auto a = central(h, x, fd_step);
        const auto b = central(h, x, 0.5 * fd_step);
        const double lap = richardson(a.laplacian, b.laplacian, 2.0);
        const double d1 = richardson(a.d1, b.d1, 2.0);
        const double d2 = richardson(a.d2, b.d2, 2.0);
        rep.interior_residual =
            std::max(rep.interior_residual, std::abs(0.5 * lap + h.mu[0] * d1 + h.mu[1] * d2));
        rep.max_abs_h = std::max(rep.max_abs_h, std::abs(h(x)));
    }
    for (const auto& x : boundary) {
        auto one_sided = [&](double s) {
            const double f0 = h(x);
            const double f1 = h({x[0], x[1] + s});
            const double f2 = h({x[0], x[1] + 2.0 * s});
            return std::pair{(h({x[0] + s, x[1]}) - h({x[0] - s, x[1]})) / (2.0 * s),
                             (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * s)};
        };
        const auto [c1, c2] = one_sided(fd_step);
        const auto [f1, f2] = one_sided(0.5 * fd_step);
        const double d1 = richardson(c1, f1, 2.0);
        const double d2 = richardson(c2, f2, 2.0);
        rep.boundary_residual = std::max(rep.boundary_residual, std::abs(h.r * d1 + d2));
        rep.max_abs_h = std::max(rep.max_abs_h, std::abs(h(x)));
    }
    return rep;
}

std::vector<Vec2> standard_interior_grid()
{
    std::vector<Vec2> pts;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
            pts.push_back({3.0 * i / 9.0, 3.0 * j / 9.0});
    return pts;
}

std::vector<Vec2> standard_boundary_grid()
{
    std::vector<Vec2> pts;
    for (int i = 0; i < 10; ++i)
        pts.push_back({3.0 * i / 9.0, 0.0});
    return pts;
}

} // namespace rbm
