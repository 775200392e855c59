#pragma once

#include <stdexcept>
#include <string>

namespace scottlab {

// Base of every error thrown by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input object: cyclic tree, unlabeled leaf, non-total map...
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed JSON or out-of-range values in a serialized object.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A node, position or search budget would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace scottlab
