#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "rbm/model.hpp"

namespace rbm::test {

inline constexpr double pi = std::numbers::pi;
inline const double sqrt2 = std::sqrt(2.0);

inline ModelParams params(double mu1, double mu2, double r, Vec2 x = {0.0, 0.0})
{
    ModelParams p;
    p.mu = {mu1, mu2};
    p.r = r;
    p.x = x;
    return p;
}

// mu = (-1, -1), r = 0, identity covariance, start at the origin.
inline NormalizedModel p0(Vec2 x = {0.0, 0.0})
{
    return validate_and_normalize(params(-1.0, -1.0, 0.0, x));
}

inline bool close_rel(double a, double b, double rel)
{
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

// Transient model with mu2 < 0 drawn from a bounded box.
inline NormalizedModel random_negative_drift(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u1(-2.0, 2.0), u2(-2.0, -0.1), ur(-2.0, 2.0);
    for (;;) {
        const double mu1 = u1(rng), mu2 = u2(rng), r = ur(rng);
        if (mu1 + r * (-mu2) < -0.05)
            return validate_and_normalize(params(mu1, mu2, r));
    }
}

// Transient model with mu2 > 0 (needs mu1 < 0).
inline NormalizedModel random_positive_drift(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u1(-2.0, -0.1), u2(0.1, 2.0), ur(-2.0, 2.0);
    return validate_and_normalize(params(u1(rng), u2(rng), ur(rng)));
}

} // namespace rbm::test
