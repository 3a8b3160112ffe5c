#pragma once

#include <stdexcept>
#include <string>

namespace cvxhole {

enum class Errc {
    InvalidBody,
    ConvergenceFailure,
    InvalidTarget,
    TooFewCells,
    NotAPartition,
    EpsilonTooLarge,
    PreconditionViolation,
    NetTooLarge,
    WitnessNotFound,
    TooManyPoints,
    ShapeTooEccentric,
    CoverageViolation,
    Degenerate,
    InsufficientData,
    ParseError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace cvxhole
