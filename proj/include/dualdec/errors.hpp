#pragma once

#include <stdexcept>
#include <string>

namespace dualdec {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A graph generator was asked for a size it cannot produce.
struct InvalidSize : Error {
    using Error::Error;
};

/// Rejection sampling exhausted its retry budget without a connected graph.
struct ConnectivityFailure : Error {
    using Error::Error;
};

/// Vector or list sizes do not match the problem dimensions.
struct DimensionMismatch : Error {
    using Error::Error;
};

/// A slack vector had a negative component.
struct NegativeSlack : Error {
    using Error::Error;
};

/// An iterative solver hit its iteration cap above tolerance.
struct NonConvergence : Error {
    using Error::Error;
};

/// Grid search dimensionality bound exceeded.
struct TooLarge : Error {
    using Error::Error;
};

/// Config file could not be parsed or validated; message carries line/field info.
struct ConfigError : Error {
    using Error::Error;
};

/// File system failure while reading or writing outputs.
struct IoError : Error {
    using Error::Error;
};

}  // namespace dualdec
