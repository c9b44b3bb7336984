#pragma once

#include <stdexcept>
#include <string>

namespace floqbog {

/// Integration blow-up, defective eigenproblems and similar numerical breakdowns.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A quantity was requested where it has no definition (e.g. W^S of an unstable system).
class InvariantUndefined : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Band tracking could not decide a unique continuation between neighbouring k.
class TrackingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace floqbog
