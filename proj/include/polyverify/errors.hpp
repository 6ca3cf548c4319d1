#pragma once

#include <stdexcept>
#include <string>

namespace polyverify {

// Operand dimensions do not agree (vector lengths, matrix shapes, layer widths).
class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Geometric input that the algorithms cannot work with: zero functionals,
// empty or lower-dimensional polytopes, unbounded input sets, no generic base point.
class DegenerateInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The network does not have an architecture the requested operation supports.
class ArchitectureError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The simplex routine exceeded its pivot budget.
class LpIterationLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Something that must hold by construction did not (e.g. a cyclic order on a region).
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Malformed input files.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace polyverify
