#pragma once
// Error types. Each carries the CLI exit code it maps to.

#include <stdexcept>
#include <string>

namespace gi {

class Error : public std::runtime_error {
public:
    Error(const std::string& what, int exit_code)
        : std::runtime_error(what), code_(exit_code) {}
    int exit_code() const noexcept { return code_; }

private:
    int code_;
};

#define GI_DEFINE_ERROR(Name, Code)                                   \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& what) : Error(what, Code) {} \
    };

// Exit code 1: bad input.
GI_DEFINE_ERROR(ConfigError, 1)
// Exit codes 2/3: violated standing assumptions of the asymptotic theory.
GI_DEFINE_ERROR(SolitonAssumptionViolated, 2)
GI_DEFINE_ERROR(SignAssumptionViolated, 3)
// Exit code 4: iterative solvers.
GI_DEFINE_ERROR(NonConvergence, 4)
GI_DEFINE_ERROR(ResidualNotConverged, 4)
// Exit code 5: inside the boundary collar of a region.
GI_DEFINE_ERROR(CollarError, 5)
// Internal numerical failures (>= 10).
GI_DEFINE_ERROR(NonFiniteSample, 10)
GI_DEFINE_ERROR(ExponentOutOfRange, 11)
GI_DEFINE_ERROR(PointOnContour, 12)
GI_DEFINE_ERROR(BranchPointEvaluation, 13)
GI_DEFINE_ERROR(RealnessViolation, 14)
GI_DEFINE_ERROR(DegenerateBand, 15)
GI_DEFINE_ERROR(PathCrossesCut, 16)
GI_DEFINE_ERROR(TruncationInsufficient, 17)
GI_DEFINE_ERROR(TailNotReached, 18)
GI_DEFINE_ERROR(StiffIntegration, 19)
GI_DEFINE_ERROR(BlowupDetected, 20)
GI_DEFINE_ERROR(TailMismatch, 21)
GI_DEFINE_ERROR(NoRealStationaryPoints, 22)
GI_DEFINE_ERROR(NegativeDiscriminant, 23)
GI_DEFINE_ERROR(WrongRegion, 24)
GI_DEFINE_ERROR(LogBranchFailure, 25)
GI_DEFINE_ERROR(ConsistencyViolation, 26)
GI_DEFINE_ERROR(InvalidArgument, 27)

#undef GI_DEFINE_ERROR

}  // namespace gi
