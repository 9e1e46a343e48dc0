#pragma once

#include <stdexcept>
#include <string>

namespace spectral {

// Every failure raised by the library carries a stable kind string so that the
// CLI can map it to an exit code and the certificate can name it.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define SPECTRAL_ERROR(Name)                                                   \
    struct Name : Error {                                                      \
        explicit Name(const std::string& what) : Error(#Name, what) {}         \
    }

SPECTRAL_ERROR(InvalidInterval);
SPECTRAL_ERROR(UnboundedOperand);
SPECTRAL_ERROR(DivisionByZeroInterval);
SPECTRAL_ERROR(DomainError);
SPECTRAL_ERROR(DimensionMismatch);
SPECTRAL_ERROR(SingularityUnverified);
SPECTRAL_ERROR(GridMismatch);
SPECTRAL_ERROR(SectorMismatch);
SPECTRAL_ERROR(FormatError);
SPECTRAL_ERROR(InvalidParameter);
SPECTRAL_ERROR(NonRadialUnsupported);
SPECTRAL_ERROR(TailNotIntegrable);
SPECTRAL_ERROR(NoConvergence);
SPECTRAL_ERROR(DegenerateEigenbasis);
SPECTRAL_ERROR(ReductionUnavailable);
SPECTRAL_ERROR(DecayDomainMismatch);
SPECTRAL_ERROR(ConditionViolated);
SPECTRAL_ERROR(ClusterTouchesTail);
SPECTRAL_ERROR(ClusterExitsDomain);
SPECTRAL_ERROR(KernelMismatch);
SPECTRAL_ERROR(UnsupportedModel);
SPECTRAL_ERROR(ConvergenceFailure);
SPECTRAL_ERROR(ToleranceNotMet);

#undef SPECTRAL_ERROR

}  // namespace spectral
