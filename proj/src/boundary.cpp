#include "rbm/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rbm/errors.hpp"

namespace rbm {

namespace {

constexpr double kPoleThreshold = 1e-14;

// Starting-point factor N(theta1) = exp((theta1, Theta2-(theta1)) . x) on the
// real segment [theta1-, theta1+], together with its derivative.
struct StartFactor {
    double value;
    double derivative;
};

StartFactor start_factor(const NormalizedModel& model, double theta1)
{
    const double s = branch_radical(model, theta1).real();
    const double theta2_minus = -model.mu[1] - s;
    const double value = std::exp(theta1 * model.x[0] + theta2_minus * model.x[1]);
    const double dtheta2 = s > 0.0 ? (theta1 + model.mu[0]) / s : 0.0;
    return {value, value * (model.x[0] + model.x[1] * dtheta2)};
}

// Expansion at a real zero p of h(theta1) = -r theta1 + mu2 + s(theta1),
// the denominator of g. The closed-form residue fixes h'(p); the Laurent
// constant needs h''(p) = -|mu|^2 / s(p)^3 as well.
SingularityExpansion pole_expansion(const NormalizedModel& model, double p, double closed_residue)
{
    const double m = norm(model.mu);
    const double s = branch_radical(model, p).real();
    const double h1 = 1.0 / closed_residue;
    const double h2 = -m * m / (s * s * s);
    const auto n = start_factor(model, p);

    SingularityExpansion e;
    e.location = p;
    e.kind = SingularityKind::SimplePole;
    e.power = -1.0;
    e.leading_coefficient = n.value * closed_residue;
    e.constant_term = n.derivative / h1 - n.value * h2 / (2.0 * h1 * h1);
    return e;
}

// Expansion at a branch point b with local variable u >= 0, where
//   s = sqrt(delta * u) + O(u^{3/2}),   h = h0 + sign_r * r * u + s.
// `sign_r` is +1 at theta1+ (u = theta1+ - theta1) and -1 at theta1-.
SingularityExpansion branch_expansion(const NormalizedModel& model, double b, double h0,
                                      int sign_r, bool degenerate)
{
    const auto g = geometry(model);
    const double delta = g.theta1_plus - g.theta1_minus;
    const double n0 = std::exp(b * model.x[0] - model.mu[1] * model.x[1]);
    const double x2 = model.x[1];

    SingularityExpansion e;
    e.location = b;
    e.kind = SingularityKind::SquareRootBranch;
    if (degenerate) {
        e.power = -0.5;
        e.leading_coefficient = n0 / std::sqrt(delta);
        e.constant_term = n0 * (-sign_r * model.r / delta - x2);
    } else {
        e.power = 0.5;
        e.leading_coefficient = -n0 * std::sqrt(delta) * (1.0 / (h0 * h0) + x2 / h0);
        e.constant_term = n0 / h0;
    }
    return e;
}

double residue_at_zero(const NormalizedModel& model)
{
    return model.mu[1] / (model.mu[0] - model.r * model.mu[1]);
}

double residue_at_p(const NormalizedModel& model)
{
    const double mu1 = model.mu[0];
    const double mu2 = model.mu[1];
    const double r = model.r;
    return ((r * r - 1.0) * mu2 - 2.0 * r * mu1) / ((1.0 + r * r) * (mu1 - r * mu2));
}

SingularityExpansion plus_branch(const NormalizedModel& model, const KernelGeometry& g)
{
    const double tol = degenerate_tolerance(model);
    const bool degenerate = tolerant_sign(g.r_dot_theta_plus, tol) == 0;
    return branch_expansion(model, g.theta1_plus, -g.r_dot_theta_plus, +1, degenerate);
}

SingularityExpansion minus_branch(const NormalizedModel& model, const KernelGeometry& g)
{
    const double tol = degenerate_tolerance(model);
    const bool degenerate = tolerant_sign(g.r_dot_theta_minus, tol) == 0;
    return branch_expansion(model, g.theta1_minus, -g.r_dot_theta_minus, -1, degenerate);
}

// Singularity of g that bounds the convergence strip on the given side.
SingularityExpansion dominant_singularity(const NormalizedModel& model, TailDirection direction)
{
    const auto g = geometry(model);
    if (direction == TailDirection::PlusInfinity) {
        if (g.pole_p && *g.pole_p > 0.0)
            return pole_expansion(model, *g.pole_p, residue_at_p(model));
        return plus_branch(model, g);
    }
    if (g.pole_zero)
        return pole_expansion(model, 0.0, residue_at_zero(model));
    if (g.pole_p && *g.pole_p < 0.0)
        return pole_expansion(model, *g.pole_p, residue_at_p(model));
    return minus_branch(model, g);
}

} // namespace

cplx g_eval(const NormalizedModel& model, cplx theta1)
{
    const auto branches = theta2_branches(model, theta1);
    const cplx denom = model.r * theta1 + branches.minus;
    if (std::abs(denom) < kPoleThreshold)
        throw Error(ErrorCode::AtPole, "theta1 is a pole of g");
    const cplx exponent = theta1 * model.x[0] + branches.minus * model.x[1];
    return -std::exp(exponent) / denom;
}

std::vector<SingularityExpansion> residues(const NormalizedModel& model)
{
    const auto g = geometry(model);
    std::vector<SingularityExpansion> out;
    if (model.drift_sign != DriftSign::Mu2Negative)
        out.push_back(minus_branch(model, g));
    if (g.pole_zero)
        out.push_back(pole_expansion(model, 0.0, residue_at_zero(model)));
    if (g.pole_p)
        out.push_back(pole_expansion(model, *g.pole_p, residue_at_p(model)));
    out.push_back(plus_branch(model, g));
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.location < b.location; });
    return out;
}

double TailLaw::evaluate(double z1) const
{
    const double d = std::abs(z1);
    return prefactor * std::pow(d, power) * std::exp(-rate * d);
}

TailLaw nu_tail(const NormalizedModel& model, TailDirection direction, TailObject object)
{
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    const auto s = dominant_singularity(model, direction);
    const bool right = direction == TailDirection::PlusInfinity;

    TailLaw law;
    law.direction = direction;
    law.object = object;
    law.source = s;
    law.rate = right ? s.location : -s.location;
    law.derived_by_symmetry = !right && model.drift_sign != DriftSign::Mu2Negative;

    // Transfer from g ~ c0 (local variable)^{-k} to nu_1 ~ c0 / Gamma(k) |z1|^{k-1} e^{-rate |z1|}.
    if (s.kind == SingularityKind::SimplePole) {
        // The local variable at a right pole is b - theta1, the negative of theta1 - b.
        law.prefactor = right ? -s.leading_coefficient : s.leading_coefficient;
        law.power = 0.0;
    } else if (s.power > 0.0) {
        law.prefactor = s.leading_coefficient / (-2.0 * sqrt_pi);
        law.power = -1.5;
    } else {
        law.prefactor = s.leading_coefficient / sqrt_pi;
        law.power = -0.5;
    }

    if (object == TailObject::Tail) {
        if (law.rate > 0.0) {
            law.prefactor /= law.rate;
        } else {
            // Infinite mass on the left: report the growth of nu((z1, 0)).
            law.power += 1.0;
            law.prefactor /= law.power;
        }
    }
    return law;
}

bool in_convergence_domain(const NormalizedModel& model, const Vec2& theta)
{
    const double theta1 = theta[0];
    const double theta2 = theta[1];
    const double mu2_minus = std::max(-model.mu[1], 0.0);
    const double f_upper =
        2.0 * (-model.mu[0] - model.r * mu2_minus) / (1.0 + model.r * model.r);
    if (theta1 > 0.0 && theta1 < f_upper && theta2 <= 0.0)
        return true;

    const auto g = geometry(model);
    if (!(theta1 > g.theta1_minus && theta1 < g.theta1_plus))
        return false;
    const auto branches = theta2_branches(model, theta1);
    const double upper = std::min(branches.plus.real(), -model.r * theta1);
    return theta2 < upper && branches.minus.real() < upper;
}

} // namespace rbm
