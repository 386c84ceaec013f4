#pragma once

#include <stdexcept>
#include <string>

namespace rmpc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problem data that violates a documented precondition.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidSpec {
 public:
  using InvalidSpec::InvalidSpec;
};

/// Fixed-point iteration did not settle within its iteration cap.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

class SingularGainSystem : public Error {
 public:
  using Error::Error;
};

class NotFinitelyDetermined : public Error {
 public:
  using Error::Error;
};

class InvalidPolytope : public Error {
 public:
  using Error::Error;
};

/// Active constraint gradients are linearly dependent.
class DegenerateActiveSet : public Error {
 public:
  using Error::Error;
};

class SingularClosedLoop : public Error {
 public:
  using Error::Error;
};

class ProjectionTooLarge : public Error {
 public:
  using Error::Error;
};

/// The QP is infeasible at a state reached by the closed loop.
class InfeasibleState : public Error {
 public:
  using Error::Error;
};

class MalformedPacket : public Error {
 public:
  using Error::Error;
};

class SamplingExhausted : public Error {
 public:
  using Error::Error;
};

class MissingBaseline : public Error {
 public:
  using Error::Error;
};

/// File exists but its content cannot be interpreted.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace rmpc
