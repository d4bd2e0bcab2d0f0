#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace moran {

/// Base class for every error raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad intervals, invalid parameter sequences, unparseable JSON values.
struct InvalidInput : Error {
    using Error::Error;
};

/// A configured resource guard was hit (level-set size, rectangle-pair count).
struct CapExceeded : Error {
    using Error::Error;
};

/// Exact arithmetic left the representable range. Results are never silently wrong.
struct NumericOverflow : Error {
    using Error::Error;
};

/// Geometric/domain violation: rectangle outside U, division range meeting y = 0, ...
struct DomainError : Error {
    using Error::Error;
};

/// Resource guards for the exponential constructions.
struct Caps {
    std::int64_t max_level_intervals = 10'000'000;
    std::int64_t max_pair_evals = 100'000'000;

    /// MORAN_CAP, when set to a positive integer, overrides both guards.
    static Caps from_env() {
        Caps caps;
        if (const char* raw = std::getenv("MORAN_CAP")) {
            char* end = nullptr;
            long long v = std::strtoll(raw, &end, 10);
            if (end && *end == '\0' && v > 0) {
                caps.max_level_intervals = v;
                caps.max_pair_evals = v;
            }
        }
        return caps;
    }
};

} // namespace moran
