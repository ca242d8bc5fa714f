#pragma once

#include <stdexcept>
#include <string>

namespace egse {

// Value outside an open domain (link domains, inverse ranges, probabilities).
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed argument unrelated to a continuous domain (bad sizes, bad flags).
struct argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Dispersion matrix not symmetric positive definite, or dimension mismatch
// detected at the linear-algebra layer.
struct matrix_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numeric routine (quadrature, root finder) failed to reach its tolerance.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An iterative procedure made no progress (rejection sampler starved).
struct progress_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation is well-formed but intentionally not supported for these inputs.
struct unsupported_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace egse
