#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "rbm/model.hpp"

namespace rbm {

struct SimConfig {
    double step = 1e-3;       // time step h
    double stop_left = 30.0;  // a path ends once Z1 < -stop_left
    double t_max = 1e4;       // hard time cap per path
    std::uint64_t paths = 200000;
    std::uint64_t seed = 42;
    bool antithetic = true;
    // Sample the minimum of the Brownian bridge inside each step, so local
    // time is not missed between grid points.
    bool bridge_correction = true;
    unsigned threads = 1;
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t paths = 0;
    std::uint64_t seed = 0;
    double truncation_fraction = 0.0;
    bool truncation_flagged = false; // more than 1% of paths hit t_max
};

struct Box {
    Vec2 lo;
    Vec2 hi;
};

/// Open interval (a, b) of the abscissa; b may be +infinity.
struct Interval {
    double a = 0.0;
    double b = std::numeric_limits<double>::infinity();
};

/// All functionals collected in a single pass over the paths. Boxes, intervals
/// and theta are in the caller's original coordinates.
struct FunctionalSet {
    std::vector<Box> boxes;          // occupancy time of each box
    std::vector<Interval> intervals; // local time deposited over each interval
    std::vector<Vec2> f_thetas;      // E int exp(theta . Z) dt
    std::vector<double> g_thetas;    // E int exp(theta1 Z1) dl
};

struct FunctionalEstimates {
    std::vector<McEstimate> boxes;
    std::vector<McEstimate> intervals;
    std::vector<McEstimate> f_values;
    std::vector<McEstimate> g_values;
};

/// Simulates the reflected motion with drift mu, covariance sigma and reflection
/// (r, 1) from x, all as given in `params`, and estimates every functional.
///
/// Paths come in antithetic pairs that share the second-coordinate noise and
/// negate the independent part of the first. Pair k (or path k without
/// antithetics) draws from std::mt19937_64 seeded by seed_seq{seed_lo, seed_hi,
/// k_lo, k_hi}, so results do not depend on the thread count.
/// Throws Error{InvalidArgument | BudgetExceeded | ThetaOutsideConvergence}
/// and the validation errors of the model.
FunctionalEstimates simulate(const ModelParams& params, const SimConfig& config,
                             const FunctionalSet& functionals);

McEstimate estimate_occupancy(const ModelParams& params, const SimConfig& config, const Box& box);
McEstimate estimate_boundary(const ModelParams& params, const SimConfig& config,
                             const Interval& interval);

enum class MgfKind { TimeIntegral, LocalTimeIntegral };

McEstimate estimate_mgf(const ModelParams& params, const SimConfig& config, const Vec2& theta,
                        MgfKind which);

/// Raw path record for diagnostics and tests: grid values of Z and l for one
/// path (the first member of pair `index`).
struct PathTrace {
    std::vector<Vec2> z;
    std::vector<double> local_time;
};

PathTrace trace_path(const ModelParams& params, const SimConfig& config, std::uint64_t index,
                     std::size_t max_steps);

} // namespace rbm
