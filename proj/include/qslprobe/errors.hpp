#pragma once

#include <stdexcept>
#include <string>

namespace qslprobe {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// dynamics / qsl
struct InvalidMatrix : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };
struct BranchAmbiguity : Error { using Error::Error; };
struct InvalidEnergy : Error { using Error::Error; };
struct InvalidDuration : Error { using Error::Error; };
struct InvalidFidelity : Error { using Error::Error; };

// circuit parsing; line numbers are 1-based
struct CircuitSyntaxError : Error {
    CircuitSyntaxError(int line_, const std::string& what_)
        : Error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
    int line;
};
struct UnknownGate : Error { using Error::Error; };
struct BadIndex : Error { using Error::Error; };

// device / jobs
struct ConfigError : Error { using Error::Error; };
struct GateRealizationMismatch : Error {
    GateRealizationMismatch(const std::string& what_, double fidelity)
        : Error(what_ + " (achieved fidelity " + std::to_string(fidelity) + ")"),
          achieved_fidelity(fidelity) {}
    double achieved_fidelity;
};
struct EmptyJob : Error { using Error::Error; };
struct BackendError : Error { using Error::Error; };

// estimator
struct InsufficientData : Error { using Error::Error; };
struct NegativeSlope : Error { using Error::Error; };
struct NoPhysicalGate : Error { using Error::Error; };

struct IoError : Error { using Error::Error; };

}  // namespace qslprobe
