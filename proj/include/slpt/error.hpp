#pragma once

#include <stdexcept>
#include <string>

namespace slpt {

enum class ErrorCode {
    NonPositiveCoefficient,
    UnorderedBreakpoints,
    SingularFamilyPole,
    DegenerateInterval,
    UnsupportedBoundary,
    OutOfDomain,
    NonSmoothCoefficient,
    UnsupportedCoefficient,
    NotRobinEnd,
    RootBracketingFailure,
    MissedRootSuspected,
    TailEstimateExceeded,
    QuadratureFailure,
    ZeroModePresent,
    NonPositiveDenominator,
    NegativeRadicand,
    InvalidArgument,
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
    case ErrorCode::NonPositiveCoefficient: return "NonPositiveCoefficient";
    case ErrorCode::UnorderedBreakpoints: return "UnorderedBreakpoints";
    case ErrorCode::SingularFamilyPole: return "SingularFamilyPole";
    case ErrorCode::DegenerateInterval: return "DegenerateInterval";
    case ErrorCode::UnsupportedBoundary: return "UnsupportedBoundary";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NonSmoothCoefficient: return "NonSmoothCoefficient";
    case ErrorCode::UnsupportedCoefficient: return "UnsupportedCoefficient";
    case ErrorCode::NotRobinEnd: return "NotRobinEnd";
    case ErrorCode::RootBracketingFailure: return "RootBracketingFailure";
    case ErrorCode::MissedRootSuspected: return "MissedRootSuspected";
    case ErrorCode::TailEstimateExceeded: return "TailEstimateExceeded";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::ZeroModePresent: return "ZeroModePresent";
    case ErrorCode::NonPositiveDenominator: return "NonPositiveDenominator";
    case ErrorCode::NegativeRadicand: return "NegativeRadicand";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure in the library is reported through this type.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace slpt
