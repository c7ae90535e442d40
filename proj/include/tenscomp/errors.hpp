#pragma once

#include <stdexcept>
#include <string>

namespace tenscomp {

/// Bad caller input: out-of-range modes, shape mismatches, malformed specs.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed (non-convergent SVD, non-finite iterate).
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A user-supplied callback broke its contract.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// File could not be opened, read, parsed or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tenscomp
