#pragma once

#include <stdexcept>
#include <string>

namespace haarint {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Shape or size outside a routine's contract (odd Pfaffian dimension, N > 64, ...).
struct DimensionError : Error {
    using Error::Error;
};

// Inputs outside the mathematical domain (|z| >= 1 for a nonterminating 2F1,
// spectra outside a sum's convergence disc, negative binomial lower index, ...).
struct DomainError : Error {
    using Error::Error;
};

// Evaluation request at a pole of the underlying function.
struct PoleError : Error {
    PoleError(const std::string& what, double pole_location)
        : Error(what), pole(pole_location) {}
    double pole;
};

// A series or iteration failed to converge within its budget.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double tail)
        : Error(what), tail_estimate(tail) {}
    double tail_estimate;
};

// An algorithm ran but its result failed a residual or sanity bound.
struct NumericalError : Error {
    NumericalError(const std::string& what, double res)
        : Error(what), residual(res) {}
    double residual;
};

}  // namespace haarint
