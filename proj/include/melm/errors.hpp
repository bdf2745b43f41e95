#pragma once

#include <stdexcept>

namespace melm {

/// Invalid run configuration: bad population counts, decay factors, bounds, fold sizes.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable or malformed dataset input, or data that cannot support a requested metric.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numeric kernel could not produce a result (SVD non-convergence, NaN fitness).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace melm
