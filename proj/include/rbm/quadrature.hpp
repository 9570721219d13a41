#pragma once

#include <cstddef>
#include <functional>

#include "rbm/types.hpp"

namespace rbm {

struct AdaptiveIntegral {
    cplx value{0.0, 0.0};
    double error = 0.0;        // sum over panels of |Kronrod - Gauss|
    double abs_integral = 0.0; // integral of |f|, for cancellation diagnostics
    std::size_t nodes = 0;
};

struct AdaptiveOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-300;
    std::size_t max_nodes = 200000;
    int initial_panels = 16;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration of a complex-valued
/// function over [a, b]. The panel with the largest error estimate is bisected
/// until the total estimate drops below max(abs_tol, rel_tol * |value|).
/// Panels are summed in left-to-right order, so the result does not depend on
/// the refinement history. Throws Error{NoConvergence} past max_nodes.
AdaptiveIntegral integrate_adaptive(const std::function<cplx(double)>& f, double a, double b,
                                    const AdaptiveOptions& options);

} // namespace rbm
