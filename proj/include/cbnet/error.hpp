#pragma once

#include <stdexcept>
#include <string>

namespace cbnet {

// Malformed input file (CSV, DOT, network JSON).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Case file disagrees with a declared schema.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller violated an operation precondition.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Internal state that should be impossible, e.g. a cycle in a structure
// that is acyclic by construction.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace cbnet
