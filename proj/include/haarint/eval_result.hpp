#pragma once

#include <string>
#include <vector>

#include "haarint/log_complex.hpp"

namespace haarint {

enum class Normalization { unit_mean, two_pi_n };

inline const char* to_string(Normalization n) {
    return n == Normalization::unit_mean ? "unit_mean" : "two_pi_n";
}

struct Diagnostics {
    std::string normalization;      // set by the operations that carry the flag
    int truncation_cutoff = -1;     // largest first part summed (character sums)
    long terms_used = -1;
    double tail_estimate = -1.0;    // last shell magnitude relative to the sum
    bool clustered = false;         // confluent spectrum handling engaged
    double condition_log10 = 0.0;   // Vandermonde conditioning proxy
    int quadrature_order = 0;
    double quadrature_check = -1.0; // relative shift under order doubling
    bool flagged_regime = false;
    std::vector<std::string> notes;
};

struct EvalResult {
    Complex value;
    Diagnostics diag;
};

}  // namespace haarint
