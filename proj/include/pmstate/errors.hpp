#pragma once

#include <stdexcept>
#include <string>

namespace pmstate {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: construction, parsing, or argument contract violations.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class LoopEdgeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class VertexOutOfRangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ColorOutOfPaletteError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Cycle constructors require an even vertex count (>= 4).
class OddCycleError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotAMatchingError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class BadColoringError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class LengthMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// File/document syntax or schema problem; the message names the offending field.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Guard rails against combinatorial blowup.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class TooLargeForOracleError : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

class MatchingExplosionError : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

class BudgetExceededError : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

/// The post-selected state is empty: no perfect matchings, or every term cancels.
class UndefinedFidelityError : public Error {
 public:
  using Error::Error;
};

/// Gradient requested at a point where the objective is undefined.
class UndefinedAtPointError : public Error {
 public:
  using Error::Error;
};

}  // namespace pmstate
