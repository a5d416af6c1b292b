#pragma once

#include <stdexcept>
#include <string>

namespace vncrit {

// Every failure mode surfaced by the toolkit. CLI maps Errc to a
// machine-readable code string and exit status 2 (validation) or 1 (internal).
enum class Errc {
    NonSquare,
    NotHermitian,
    NonFinite,
    ConvergenceFailure,
    DimensionMismatch,
    DimensionTooLarge,
    ImaginaryResidue,
    ZeroVector,
    NormTooFarFromUnit,
    InvalidTriple,
    UnknownTag,
    NotCommuting,
    WrongDimension,
    ZeroAmplitudes,
    BadResolution,
    SolverFailure,
    UnknownCommand,
    BadFlag,
    FileNotFound,
    SchemaViolation,
    InternalError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

  private:
    Errc code_;
};

}  // namespace vncrit
