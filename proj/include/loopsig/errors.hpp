#pragma once

#include <stdexcept>

namespace loopsig {

// Arithmetic on series of different truncation orders is refused rather
// than silently truncated to the shorter one.
struct OrderMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotInvertibleError : std::domain_error {
    using std::domain_error::domain_error;
};

struct PoleAtOriginError : std::domain_error {
    using std::domain_error::domain_error;
};

struct FanError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A final signature series came out with a non-integer coefficient.
struct IntegralityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The elliptic-parameter fit failed one of its internal consistency checks.
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace loopsig
