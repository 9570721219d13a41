#include "rbm/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rbm/errors.hpp"

namespace rbm {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotTransient: return "NotTransient";
    case ErrorCode::BadCovariance: return "BadCovariance";
    case ErrorCode::BadStart: return "BadStart";
    case ErrorCode::OnBranchCut: return "OnBranchCut";
    case ErrorCode::AtPole: return "AtPole";
    case ErrorCode::BoundaryTooClose: return "BoundaryTooClose";
    case ErrorCode::SingularAtStart: return "SingularAtStart";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::NotImplementedForPositiveDrift: return "NotImplementedForPositiveDrift";
    case ErrorCode::FamilyUnavailable: return "FamilyUnavailable";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ThetaOutsideConvergence: return "ThetaOutsideConvergence";
    }
    return "Unknown";
}

int tolerant_sign(double value, double tol)
{
    if (value > tol)
        return 1;
    if (value < -tol)
        return -1;
    return 0;
}

NormalizedModel validate_and_normalize(const ModelParams& p)
{
    const double inputs[] = {p.mu[0], p.mu[1], p.r, p.sigma[0][0], p.sigma[0][1],
                             p.sigma[1][0], p.sigma[1][1], p.x[0], p.x[1]};
    for (double v : inputs)
        if (!std::isfinite(v))
            throw Error(ErrorCode::InvalidArgument, "non-finite model parameter");

    if (p.x[1] < 0.0)
        throw Error(ErrorCode::BadStart, "starting point must satisfy x2 >= 0");

    const double s11 = p.sigma[0][0];
    const double s22 = p.sigma[1][1];
    const double scale = std::abs(s11) + std::abs(s22);
    if (std::abs(p.sigma[0][1] - p.sigma[1][0]) > 1e-12 * scale)
        throw Error(ErrorCode::BadCovariance, "covariance matrix is not symmetric");
    const double s12 = 0.5 * (p.sigma[0][1] + p.sigma[1][0]);
    const double det_sigma = s11 * s22 - s12 * s12;
    if (!(s11 > 0.0) || !(s22 > 0.0) || !(det_sigma > 0.0))
        throw Error(ErrorCode::BadCovariance, "covariance matrix is not positive definite");

    // Upper-triangular in column convention: the second normalized coordinate
    // only depends on the second original one, so the half-plane is preserved.
    NormalizedModel m;
    const double a = std::sqrt(s22 / det_sigma);
    const double b = -s12 / std::sqrt(s22 * det_sigma);
    const double c = 1.0 / std::sqrt(s22);
    m.T = {{{a, b}, {0.0, c}}};
    m.detT = a * c;

    m.mu = mul(m.T, p.mu);
    // R = sqrt(sigma22) * T (r~, 1), whose second component is exactly 1.
    m.r = std::sqrt(s22) * (a * p.r + b);
    m.x = mul(m.T, p.x);
    m.x_original = p.x;

    const double mu2_minus = std::max(-m.mu[1], 0.0);
    const double transience = m.mu[0] + m.r * mu2_minus;
    if (!(transience < 0.0)) {
        std::ostringstream os;
        os << "transience condition mu1 + r*mu2^- < 0 violated (normalized value " << transience
           << ")";
        throw Error(ErrorCode::NotTransient, os.str());
    }

    if (m.mu[1] < 0.0)
        m.drift_sign = DriftSign::Mu2Negative;
    else if (m.mu[1] == 0.0)
        m.drift_sign = DriftSign::Mu2Zero;
    else
        m.drift_sign = DriftSign::Mu2Positive;
    return m;
}

cplx kernel_Q(const NormalizedModel& model, const CVec2& theta)
{
    return 0.5 * (theta[0] * theta[0] + theta[1] * theta[1]) + model.mu[0] * theta[0] +
           model.mu[1] * theta[1];
}

namespace {

struct BranchPoints {
    double minus;
    double plus;
};

BranchPoints branch_points(const NormalizedModel& model)
{
    const double m = norm(model.mu);
    return {-model.mu[0] - m, -model.mu[0] + m};
}

} // namespace

cplx branch_radical(const NormalizedModel& model, cplx theta1)
{
    const auto bp = branch_points(model);
    return std::sqrt((bp.plus - theta1) * (theta1 - bp.minus));
}

bool on_branch_cut(const NormalizedModel& model, cplx theta1)
{
    if (theta1.imag() != 0.0)
        return false;
    const auto bp = branch_points(model);
    return theta1.real() < bp.minus || theta1.real() > bp.plus;
}

BranchPair theta2_branches(const NormalizedModel& model, cplx theta1)
{
    if (on_branch_cut(model, theta1))
        throw Error(ErrorCode::OnBranchCut, "theta1 lies on a branch cut of Theta2");
    const cplx root = branch_radical(model, theta1);
    return {-model.mu[1] + root, -model.mu[1] - root};
}

double degenerate_tolerance(const NormalizedModel& model)
{
    const auto bp = branch_points(model);
    const double scale =
        std::abs(model.r) * std::max(std::abs(bp.plus), std::abs(bp.minus)) + std::abs(model.mu[1]);
    return 1e-12 * std::max(scale, 1e-300);
}

KernelGeometry geometry(const NormalizedModel& model)
{
    using std::numbers::pi;
    const double mu1 = model.mu[0];
    const double mu2 = model.mu[1];
    const double r = model.r;

    KernelGeometry g;
    g.m = norm(model.mu);
    const auto bp = branch_points(model);
    g.theta1_minus = bp.minus;
    g.theta1_plus = bp.plus;
    g.theta_plus = {bp.plus, -mu2};
    g.theta_minus = {bp.minus, -mu2};
    g.r_dot_theta_plus = r * bp.plus - mu2;
    g.r_dot_theta_minus = r * bp.minus - mu2;
    g.theta1p_candidate = 2.0 * (r * mu2 - mu1) / (r * r + 1.0);

    const double tol = degenerate_tolerance(model);
    const int sign_plus = tolerant_sign(g.r_dot_theta_plus, tol);
    const int sign_minus = tolerant_sign(g.r_dot_theta_minus, tol);
    if (mu2 < 0.0) {
        if (sign_plus > 0)
            g.pole_p = g.theta1p_candidate;
        g.pole_zero = 0.0;
    } else if (sign_plus > 0 || sign_minus > 0) {
        g.pole_p = g.theta1p_candidate;
    }

    // alpha_mu is the polar angle of -mu and alpha_R the polar angle of R.
    g.alpha_mu = std::atan2(-mu2, -mu1);
    g.alpha_R = std::atan2(1.0, r);
    g.alpha0 = pi - g.alpha_mu;
    g.alpha1 = pi + g.alpha_mu - 2.0 * g.alpha_R;
    return g;
}

} // namespace rbm
