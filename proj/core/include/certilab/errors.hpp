#pragma once

#include <stdexcept>
#include <string>

namespace certilab {

/// Base class of every exception thrown by certilab.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural violation of a graph, tree or model contract.
class GraphError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input (graph files, formulas, automata, assignments).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An exact oracle was asked to handle an instance above its configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Raised when an assignment accepted everywhere cannot be decoded into the
/// structure it is supposed to certify. Seeing one means a verifier is unsound.
class SoundnessViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace certilab
