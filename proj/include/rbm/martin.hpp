#pragma once

#include <functional>
#include <vector>

#include "rbm/model.hpp"

namespace rbm {

/// Directional limit of the Martin kernel k^x_y as y = rho e_alpha, rho -> inf,
/// normalized at the reference state (0, 0). x is in normalized coordinates.
/// Throws Error{AlphaOutOfRange | NotImplementedForPositiveDrift}.
double martin_limit(const NormalizedModel& model, double alpha, const Vec2& x);

enum class HarmonicFamily { SaddleFamily, PoleFamily, ConstantFamily };

struct HarmonicFunction {
    HarmonicFamily family = HarmonicFamily::ConstantFamily;
    double alpha = 0.0; // meaningful for SaddleFamily only
    Vec2 mu{};
    double r = 0.0;
    std::function<double(const Vec2&)> h;

    double operator()(const Vec2& x) const { return h(x); }
};

/// Closed-form harmonic function of the requested family. `alpha` selects the
/// member of the saddle family and must lie strictly between alpha1 and alpha0.
/// Throws Error{FamilyUnavailable | AlphaOutOfRange | NotImplementedForPositiveDrift}.
HarmonicFunction harmonic(const NormalizedModel& model, HarmonicFamily family, double alpha = 0.0);

struct HarmonicityReport {
    double interior_residual = 0.0; // max |Delta h / 2 + mu . grad h|
    double boundary_residual = 0.0; // max |r d1 h + d2 h| on x2 = 0
    double max_abs_h = 0.0;         // over all supplied points
};

/// Finite-difference check of the generator equation at `interior` points
/// and of the oblique Neumann condition at `boundary` points (x2 = 0).
/// Differences with steps fd_step and fd_step / 2 are combined by Richardson
/// extrapolation; the boundary derivative in x2 is one-sided.
HarmonicityReport check_harmonicity(const HarmonicFunction& h, const std::vector<Vec2>& interior,
                                    const std::vector<Vec2>& boundary, double fd_step);

/// The standard test grid: a 10 x 10 lattice on [0, 3]^2 and its x2 = 0 row.
std::vector<Vec2> standard_interior_grid();
std::vector<Vec2> standard_boundary_grid();

} // namespace rbm
