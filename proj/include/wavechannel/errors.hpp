#pragma once

#include <stdexcept>
#include <string>

namespace wavechannel {

// Every failure carries a short machine-readable code; the CLI prints it verbatim.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define WAVECHANNEL_ERROR(Name, Code)                                        \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(Code, what) {}        \
    };

WAVECHANNEL_ERROR(InvalidInput, "invalid_input")
WAVECHANNEL_ERROR(OutOfDomain, "out_of_domain")
WAVECHANNEL_ERROR(InsufficientDecay, "insufficient_decay")
WAVECHANNEL_ERROR(WindowTooSmall, "window_too_small")
WAVECHANNEL_ERROR(OrderTooLarge, "order_too_large")
WAVECHANNEL_ERROR(TruncationError, "truncation")
WAVECHANNEL_ERROR(NoConvergence, "no_convergence")
WAVECHANNEL_ERROR(ParityError, "parity")
WAVECHANNEL_ERROR(NyquistViolation, "nyquist")
WAVECHANNEL_ERROR(GridTooSmall, "grid_too_small")
WAVECHANNEL_ERROR(UnstableExtrapolation, "unstable_extrapolation")
WAVECHANNEL_ERROR(AccuracyError, "accuracy")
WAVECHANNEL_ERROR(Inadmissible, "inadmissible")
WAVECHANNEL_ERROR(SupportViolation, "support_violation")
WAVECHANNEL_ERROR(NotNonradiative, "not_nonradiative")
WAVECHANNEL_ERROR(SingularGram, "singular_gram")
WAVECHANNEL_ERROR(InfiniteNorm, "infinite_norm")
WAVECHANNEL_ERROR(ParseError, "parse")

#undef WAVECHANNEL_ERROR

}  // namespace wavechannel
