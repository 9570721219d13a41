#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rbm {

enum class ErrorCode {
    InvalidArgument,
    NotTransient,
    BadCovariance,
    BadStart,
    OnBranchCut,
    AtPole,
    BoundaryTooClose,
    SingularAtStart,
    NoConvergence,
    AlphaOutOfRange,
    NotApplicable,
    NotImplementedForPositiveDrift,
    FamilyUnavailable,
    BudgetExceeded,
    ThetaOutsideConvergence,
};

std::string_view to_string(ErrorCode code);

// True for failures of a numerical procedure, as opposed to rejected input.
constexpr bool is_numerical_failure(ErrorCode code)
{
    return code == ErrorCode::NoConvergence || code == ErrorCode::BudgetExceeded;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace rbm
