#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ahs {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

inline constexpr const char* toolkit_version = "1.0.0";

enum class ErrorKind {
    BudgetExceeded,
    NonFiniteIntegrand,
    NoConvergence,
    DerivativeVanished,
    SeedNotOnCurve,
    StagnationAtCriticalPoint,
    OutsideDomain,
    AtLogPoint,
    RegionOutsideDomain,
    ParameterOutOfRange,
    OnCut,
    PathCrossesCut,
    AtMuPlus,
    TailNotConverged,
    ContourThroughSingularity,
    PathNotOnSigma,
    SingularityUnresolved,
    NoCut,
    AtCutEndpoint,
    VerticalSegmentLeavesDomain,
    TraceStalled,
    ContourHitsCut,
    JacobianSingular,
    StepUnderflow,
    ClassificationAmbiguous,
    StiffnessFailure,
    TruncationNotConverged,
    ReflectionUnderflow,
    ConfigInvalid,
    ComputeFailed,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace ahs
