#pragma once

#include <cstddef>
#include <optional>

#include "rbm/model.hpp"

namespace rbm {

/// f(theta) = E int_0^inf exp(theta . Z(s)) ds, continued through its closed
/// form. Throws Error{AtPole | OnBranchCut}.
cplx f_transform(const NormalizedModel& model, const CVec2& theta);

/// Admissible band (lower, upper) for the real part of the Bromwich contour:
/// the convergence strip of the boundary transform, between the poles or
/// branch points of g.
struct ContourBand {
    double lower;
    double upper;
};

ContourBand contour_band(const NormalizedModel& model);

/// Real part of the Bromwich line. Without a hint it is the middle of the band;
/// with a direction hint it follows the saddle abscissa theta1^alpha, clamped
/// 1e-3 of the band width away from either end.
double contour_abscissa(const NormalizedModel& model, std::optional<double> alpha = std::nullopt);

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t nodes_used = 0;
    double contour_abscissa = 0.0;
    double truncation_height = 0.0;
};

/// Which integral representation to evaluate. `Automatic` uses the boundary
/// transform for a start at the origin and the free/reflected split otherwise.
enum class DensityRoute {
    Automatic,
    BoundaryTransform, // exp(-z . (theta1, Theta2+)) g(theta1); start at the origin only
    StartingPoint,     // two-term integrand; needs z2 > x2
    FreePlusReflected, // closed-form free Green's function plus reflected-term integral
};

struct DensityOptions {
    DensityRoute route = DensityRoute::Automatic;
    std::optional<double> abscissa; // overrides contour_abscissa
    std::size_t max_nodes = 200000;
};

inline constexpr double kZ2Min = 1e-3;

/// Occupancy density at z, in the coordinates of the normalized model.
/// `tol` is relative to the computed value. Throws Error{BoundaryTooClose |
/// SingularAtStart | NoConvergence | InvalidArgument}.
QuadratureResult density_normalized(const NormalizedModel& model, const Vec2& z, double tol,
                                    const DensityOptions& options = {});

/// Occupancy density at z given in the caller's original coordinates:
/// |det T| times the normalized density at T z.
QuadratureResult density(const NormalizedModel& model, const Vec2& z, double tol,
                         const DensityOptions& options = {});

/// Integral of the density over [z1_lo, z1_hi] x [z2_lo, z2_hi] (original
/// coordinates) by a tensor Gauss-Legendre rule on an n x n grid of cells.
double box_integral(const NormalizedModel& model, const Vec2& lo, const Vec2& hi, int cells,
                    double tol);

} // namespace rbm
