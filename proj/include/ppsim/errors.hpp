#pragma once

#include <stdexcept>
#include <string>

namespace ppsim {

/// An intensity scheduler encodes a level below the admissible tolerance.
struct CorruptedIntensityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thinning exceeded its rejection cap or saw lambda above the dominating rate.
struct DominationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Spectral radius of the interaction-integral matrix is >= 1 (explosive network).
struct StationarityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iterative numeric routine failed to converge.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A point was applied at a time older than a scheduler's current anchor.
struct CausalityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The brute-force reference simulator observed an intensity above its own bound.
struct OracleInconsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A statistical test was handed fewer observations than it needs.
struct InsufficientSampleError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A statistical test was handed a sample with no variation.
struct DegenerateSampleError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace ppsim
