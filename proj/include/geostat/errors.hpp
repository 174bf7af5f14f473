#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace geostat {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter / geometry errors --------------------------------------------

struct InvalidScenario : Error {
    using Error::Error;
};

/// L is an exact integer multiple of r0: every lens has width 0 and the
/// geodesic count is 0 almost surely.
struct DegenerateScenario : Error {
    using Error::Error;
};

/// k = 1: source and destination are in direct range, no relays needed.
struct DirectConnection : Error {
    using Error::Error;
};

struct InvalidInterval : Error {
    using Error::Error;
};

struct WrongHopCount : Error {
    using Error::Error;
};

struct UnsupportedK : Error {
    using Error::Error;
};

// Counting / symbolic-engine errors --------------------------------------

/// Raised by the checked 64-bit counting kernels. The public counting
/// functions catch it and recount with arbitrary-precision integers, so it
/// escapes only when a checked kernel is used directly.
struct CountOverflow : Error {
    using Error::Error;
};

struct CyclicOrder : Error {
    using Error::Error;
};

struct SizeExceeded : Error {
    using Error::Error;
};

struct TermBudgetExceeded : Error {
    using Error::Error;
};

// Monte Carlo -------------------------------------------------------------

/// The two counting algorithms disagreed on a realisation. Carries enough
/// context to reproduce the offending trial.
struct AlgorithmMismatch : Error {
    AlgorithmMismatch(std::uint64_t root_seed, std::uint64_t trial,
                      std::string diagnostic)
        : Error("algorithm mismatch at trial " + std::to_string(trial) +
                " (root_seed " + std::to_string(root_seed) + ")\n" + diagnostic),
          root_seed(root_seed),
          trial(trial),
          diagnostic(std::move(diagnostic)) {}

    std::uint64_t root_seed;
    std::uint64_t trial;
    std::string diagnostic;
};

}  // namespace geostat
