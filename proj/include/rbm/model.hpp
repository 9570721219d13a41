#pragma once

#include <optional>

#include "rbm/types.hpp"

namespace rbm {

/// Problem instance: drift, reflection vector R = (r, 1), covariance and
/// starting point of the reflected Brownian motion in the upper half-plane.
struct ModelParams {
    Vec2 mu{0.0, 0.0};
    double r = 0.0;
    Mat2 sigma = kIdentity2;
    Vec2 x{0.0, 0.0};
};

enum class DriftSign { Mu2Negative, Mu2Zero, Mu2Positive };

/// Identity-covariance form of a validated ModelParams.
///
/// `T` maps original coordinates to normalized ones as column vectors,
/// z = T z_orig, so that T * Sigma * T^t = I. Drift and start point are
/// stored in normalized coordinates; `x_original` keeps the caller's start.
struct NormalizedModel {
    Vec2 mu{0.0, 0.0};
    double r = 0.0;
    DriftSign drift_sign = DriftSign::Mu2Negative;
    Vec2 x{0.0, 0.0};
    Mat2 T = kIdentity2;
    double detT = 1.0;
    Vec2 x_original{0.0, 0.0};

    bool starts_at_origin() const { return x[0] == 0.0 && x[1] == 0.0; }
};

/// Everything read off the circle Q = 0 and the line R.theta = 0.
struct KernelGeometry {
    double theta1_minus = 0.0;
    double theta1_plus = 0.0;
    Vec2 theta_plus{};  // (theta1+, -mu2)
    Vec2 theta_minus{}; // (theta1-, -mu2)
    double r_dot_theta_plus = 0.0;
    double r_dot_theta_minus = 0.0;
    // Second root 2(r mu2 - mu1)/(r^2 + 1) of the pole equation, whether or
    // not it is a pole of g.
    double theta1p_candidate = 0.0;
    std::optional<double> pole_p;
    std::optional<double> pole_zero;
    double m = 0.0; // |mu|
    double alpha_mu = 0.0;
    double alpha_R = 0.0;
    double alpha0 = 0.0;
    double alpha1 = 0.0;
};

/// Sign of a geometric quantity with a small absolute tolerance: values
/// within `tol` of zero are reported as exactly zero.
int tolerant_sign(double value, double tol);

/// Validates the parameters and maps them to identity covariance.
/// Throws Error{BadCovariance | BadStart | NotTransient | InvalidArgument}.
NormalizedModel validate_and_normalize(const ModelParams& params);

/// Lévy exponent Q(theta) = |theta|^2 / 2 + mu . theta.
cplx kernel_Q(const NormalizedModel& model, const CVec2& theta);

struct BranchPair {
    cplx plus;
    cplx minus;
};

/// sqrt((theta1+ - theta1)(theta1 - theta1-)) with the principal root. Equal to
/// sqrt(|mu|^2 - (theta1 + mu1)^2) but exact at the branch points. No cut check.
cplx branch_radical(const NormalizedModel& model, cplx theta1);

/// True when theta1 lies on (-inf, theta1-) or (theta1+, inf).
bool on_branch_cut(const NormalizedModel& model, cplx theta1);

/// The two roots theta2 = Theta2^{+/-}(theta1) of Q(theta1, theta2) = 0.
/// Throws Error{OnBranchCut}.
BranchPair theta2_branches(const NormalizedModel& model, cplx theta1);

KernelGeometry geometry(const NormalizedModel& model);

/// Tolerance used to decide R.theta+ = 0 and R.theta- = 0.
double degenerate_tolerance(const NormalizedModel& model);

} // namespace rbm
