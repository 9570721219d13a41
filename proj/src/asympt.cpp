#include "rbm/asympt.hpp"

#include <cmath>
#include <numbers>

#include "rbm/boundary.hpp"
#include "rbm/errors.hpp"

namespace rbm {

std::string_view to_string(RegimeTag tag)
{
    switch (tag) {
    case RegimeTag::Saddle: return "Saddle";
    case RegimeTag::PoleP: return "PoleP";
    case RegimeTag::PoleZero: return "PoleZero";
    case RegimeTag::CoincidenceP: return "CoincidenceP";
    case RegimeTag::CoincidenceZero: return "CoincidenceZero";
    case RegimeTag::A3Saddle: return "A3Saddle";
    case RegimeTag::A3Pole: return "A3Pole";
    }
    return "Unknown";
}

SaddleData saddle(const NormalizedModel& model, double alpha)
{
    using std::numbers::pi;
    if (!(alpha >= kAlphaGuard && alpha <= pi - kAlphaGuard))
        throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in (0, pi)");
    const double m = norm(model.mu);
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);

    SaddleData d;
    d.alpha = alpha;
    const double t1 = -model.mu[0] + m * c;
    d.theta_alpha = {t1, -model.mu[1] + m * s};
    d.theta_alpha_tilde = {t1, -model.mu[1] - m * s};
    d.S_second = -1.0 / (m * s * s);
    d.exponent = -(model.mu[0] * c + model.mu[1] * s) + m;
    return d;
}

namespace {

bool within(double a, double b, double tol) { return std::abs(a - b) <= tol; }

} // namespace

Regime classify(const NormalizedModel& model, double alpha, double tol_coincide)
{
    const auto g = geometry(model);
    const auto sd = saddle(model, alpha);
    const double t1 = sd.theta_alpha[0];
    const double tol = tol_coincide * g.theta1_plus;

    Regime reg;
    reg.theta1_alpha = t1;
    reg.theta1p = g.pole_p;
    reg.r_dot_theta_plus = g.r_dot_theta_plus;
    reg.r_dot_theta_minus = g.r_dot_theta_minus;

    if (model.drift_sign == DriftSign::Mu2Negative) {
        if (within(t1, 0.0, tol))
            reg.tag = RegimeTag::CoincidenceZero;
        else if (t1 < 0.0)
            reg.tag = RegimeTag::PoleZero;
        else if (g.pole_p && within(t1, *g.pole_p, tol))
            reg.tag = RegimeTag::CoincidenceP;
        else if (g.pole_p && *g.pole_p < t1)
            reg.tag = RegimeTag::PoleP;
        else
            reg.tag = RegimeTag::Saddle;
        return reg;
    }

    // A pole dominates once the saddle abscissa lies beyond it, seen from
    // inside the convergence strip.
    reg.tag = RegimeTag::A3Saddle;
    if (g.pole_p) {
        const double p = *g.pole_p;
        if (within(t1, p, tol))
            reg.tag = RegimeTag::CoincidenceP;
        else if ((p > 0.0 && t1 > p) || (p < 0.0 && t1 < p))
            reg.tag = RegimeTag::A3Pole;
    }
    return reg;
}

std::pair<double, double> angle_thresholds(const NormalizedModel& model)
{
    if (model.drift_sign != DriftSign::Mu2Negative)
        throw Error(ErrorCode::NotApplicable, "angle thresholds are defined for mu2 < 0");
    const auto g = geometry(model);
    return {g.alpha1, g.alpha0};
}

RegimeTag classify_by_angle(const NormalizedModel& model, double alpha, double tol_angle)
{
    const auto [alpha1, alpha0] = angle_thresholds(model);
    if (within(alpha, alpha0, tol_angle))
        return RegimeTag::CoincidenceZero;
    if (alpha > alpha0)
        return RegimeTag::PoleZero;
    if (alpha1 > 0.0) {
        if (within(alpha, alpha1, tol_angle))
            return RegimeTag::CoincidenceP;
        if (alpha < alpha1)
            return RegimeTag::PoleP;
    }
    return RegimeTag::Saddle;
}

double AsymptoticLaw::evaluate(double rho) const
{
    return prefactor * std::pow(rho, power) * std::exp(-rate * rho);
}

namespace {

// Residue of g at a pole p, including the starting-point factor.
double pole_residue(const NormalizedModel& model, double p)
{
    for (const auto& e : residues(model))
        if (e.kind == SingularityKind::SimplePole && e.location == p)
            return e.leading_coefficient;
    throw Error(ErrorCode::NotApplicable, "no pole of g at the requested location");
}

} // namespace

AsymptoticLaw law(const NormalizedModel& model, double alpha, double tol_coincide)
{
    const auto sd = saddle(model, alpha);
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);

    AsymptoticLaw out;
    out.regime = classify(model, alpha, tol_coincide);
    const double x1 = model.x[0];
    const double x2 = model.x[1];

    auto pole_law = [&](double p, double weight) {
        const auto b = theta2_branches(model, p);
        // Shifting the contour across a pole on its right picks up -2 Res,
        // across a pole on its left +2 Res.
        const double sign = p > 0.0 ? -2.0 : 2.0;
        out.prefactor = weight * sign * pole_residue(model, p);
        out.power = 0.0;
        out.rate = p * c + b.plus.real() * s;
    };

    switch (out.regime.tag) {
    case RegimeTag::Saddle:
    case RegimeTag::A3Saddle: {
        const Vec2& th = sd.theta_alpha;
        const Vec2& tt = sd.theta_alpha_tilde;
        const double r_th = model.r * th[0] + th[1];
        const double r_tt = model.r * tt[0] + tt[1];
        const double amplitude =
            (std::exp(th[0] * x1 + th[1] * x2) - r_th / r_tt * std::exp(tt[0] * x1 + tt[1] * x2)) /
            (th[1] - tt[1]);
        out.prefactor = std::sqrt(-2.0 / (std::numbers::pi * sd.S_second)) * amplitude;
        out.power = -0.5;
        out.rate = sd.exponent;
        break;
    }
    case RegimeTag::PoleP:
    case RegimeTag::A3Pole:
        pole_law(*out.regime.theta1p, 1.0);
        break;
    case RegimeTag::CoincidenceP:
        pole_law(*out.regime.theta1p, 0.5);
        break;
    case RegimeTag::PoleZero:
    case RegimeTag::CoincidenceZero: {
        const double weight = out.regime.tag == RegimeTag::CoincidenceZero ? 0.5 : 1.0;
        out.prefactor = weight * 2.0 * model.mu[1] / (model.mu[0] - model.r * model.mu[1]);
        out.power = 0.0;
        out.rate = -2.0 * model.mu[1] * s;
        break;
    }
    }
    return out;
}

} // namespace rbm
