#pragma once

#include <stdexcept>
#include <string>

namespace reiqc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (bad value, bad shape, bad file).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A lookup (ion, scheme, level pair, ion id) has no match.
class NotFoundError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// The inputs are well formed but the requested physics cannot be carried out,
/// e.g. a gate refused because the blockade condition fails.
class PhysicsError : public Error {
public:
    using Error::Error;
};

}  // namespace reiqc
