#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nmwit {

// Matrix dimensions incompatible with the requested operation.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input violates a documented precondition (e.g. a non-Hermitian matrix
// handed to the Hermitian eigensolver).
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Scalar argument outside its admissible range (eps <= 0, n_ops > d^2, ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Failure while evaluating a rate expression or rate table.
struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed rate expression. `offset` is the byte offset into the source text.
struct ParseError : std::runtime_error {
    ParseError(std::size_t offset, const std::string& what)
        : std::runtime_error("offset " + std::to_string(offset) + ": " + what), offset(offset) {}
    std::size_t offset;
};

// Channel-spec or witness file that is well-formed JSON but does not describe a
// valid object. The message starts with the JSON pointer of the offending field.
struct SpecError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace nmwit
