#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include "rbm/model.hpp"

namespace rbm {

inline constexpr double kAlphaGuard = 1e-6;
inline constexpr double kDefaultCoincideTol = 1e-9;

struct SaddleData {
    double alpha = 0.0;
    Vec2 theta_alpha{};       // (theta1^alpha, Theta2+(theta1^alpha))
    Vec2 theta_alpha_tilde{}; // (theta1^alpha, Theta2-(theta1^alpha))
    double S_second = 0.0;    // S''(theta1^alpha) for S(t) = t cos a + Theta2+(t) sin a
    double exponent = 0.0;    // theta^alpha . e_alpha
};

/// Throws Error{AlphaOutOfRange} unless alpha lies in [1e-6, pi - 1e-6].
SaddleData saddle(const NormalizedModel& model, double alpha);

enum class RegimeTag { Saddle, PoleP, PoleZero, CoincidenceP, CoincidenceZero, A3Saddle, A3Pole };

std::string_view to_string(RegimeTag tag);

struct Regime {
    RegimeTag tag = RegimeTag::Saddle;
    double theta1_alpha = 0.0;
    std::optional<double> theta1p;
    double r_dot_theta_plus = 0.0;
    double r_dot_theta_minus = 0.0;
};

/// Regime from the position of theta1^alpha relative to the poles of g.
/// `tol_coincide` is relative to theta1+.
Regime classify(const NormalizedModel& model, double alpha,
                double tol_coincide = kDefaultCoincideTol);

/// Regime read off the angle thresholds alpha1 < alpha0 (mu2 < 0 only).
/// `tol_angle` is an absolute tolerance in radians for exact coincidence.
RegimeTag classify_by_angle(const NormalizedModel& model, double alpha,
                            double tol_angle = kDefaultCoincideTol);

/// (alpha1, alpha0). Throws Error{NotApplicable} unless mu2 < 0.
std::pair<double, double> angle_thresholds(const NormalizedModel& model);

/// pi(rho e_alpha) ~ prefactor * rho^power * exp(-rate * rho).
struct AsymptoticLaw {
    double prefactor = 0.0;
    double power = 0.0;
    double rate = 0.0;
    Regime regime;

    double evaluate(double rho) const;
};

AsymptoticLaw law(const NormalizedModel& model, double alpha,
                  double tol_coincide = kDefaultCoincideTol);

} // namespace rbm
