#pragma once

#include <vector>

#include "rbm/model.hpp"

namespace rbm {

enum class SingularityKind { SimplePole, SquareRootBranch };

/// Local expansion of g at one of its singularities on the real axis.
///
/// The local variable is u = theta1 - location, except at theta1+ where it is
/// u = theta1+ - theta1. Near the singularity
///     g ~ leading_coefficient * u^power + constant_term,
/// with power -1 for a pole (leading_coefficient is the residue), +1/2 for a
/// square-root branch and -1/2 for an inverse square-root branch.
struct SingularityExpansion {
    double location = 0.0;
    SingularityKind kind = SingularityKind::SimplePole;
    double constant_term = 0.0;
    double leading_coefficient = 0.0;
    double power = -1.0;
};

/// Moment generating function of the boundary occupancy measure, continued
/// to the cut plane. Includes the starting-point factor exp((theta1, Theta2-) . x).
/// Throws Error{AtPole | OnBranchCut}.
cplx g_eval(const NormalizedModel& model, cplx theta1);

/// Expansions at 0 (mu2 < 0), at theta1p (when it is a pole), at theta1+ and,
/// for mu2 >= 0, at theta1-. Ordered by location.
std::vector<SingularityExpansion> residues(const NormalizedModel& model);

enum class TailDirection { PlusInfinity, MinusInfinity };

/// Density: nu_1(z1). Tail: nu((z1, inf)) towards +inf; towards -inf the mass
/// nu((-inf, z1)) when it is finite (rate > 0), otherwise the growth of
/// nu((z1, 0)) as z1 -> -inf.
enum class TailObject { Density, Tail };

struct TailLaw {
    TailDirection direction = TailDirection::PlusInfinity;
    TailObject object = TailObject::Density;
    double prefactor = 0.0;
    double power = 0.0; // exponent of |z1|
    double rate = 0.0;  // decay rate, >= 0
    SingularityExpansion source; // singularity the law was transferred from
    // Left tails for mu2 >= 0 have no closed constants to compare with; they
    // come from the same expansion and transfer rules as the right tail.
    bool derived_by_symmetry = false;

    /// prefactor * |z1|^power * exp(-rate * |z1|)
    double evaluate(double z1) const;
};

TailLaw nu_tail(const NormalizedModel& model, TailDirection direction, TailObject object);

/// Membership of a real theta in E u F, the set where f and g converge.
bool in_convergence_domain(const NormalizedModel& model, const Vec2& theta);

} // namespace rbm
