#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ionqaoa {

// Numerical failures (non-convergence, resonances, unstable spectra).
// Validation problems use std::invalid_argument directly; the CLI maps
// invalid_argument -> exit 2 and NumericalError -> exit 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : NumericalError {
    ConvergenceError(const std::string& msg, double grad_norm)
        : NumericalError(msg), last_gradient_norm(grad_norm) {}
    double last_gradient_norm;
};

struct ResonanceError : NumericalError {
    ResonanceError(const std::string& msg, std::size_t mode)
        : NumericalError(msg), mode_index(mode) {}
    std::size_t mode_index;
};

struct UnstableModeError : NumericalError {
    UnstableModeError(const std::string& msg, std::size_t mode, double eigenvalue)
        : NumericalError(msg), mode_index(mode), eigenvalue(eigenvalue) {}
    std::size_t mode_index;
    double eigenvalue;
};

}  // namespace ionqaoa
