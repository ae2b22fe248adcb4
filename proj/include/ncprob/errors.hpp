#pragma once

#include <stdexcept>
#include <string>

namespace ncprob {

// Every error raised by the library derives from ncprob::Error so callers
// (the scenario runner in particular) can separate library failures from
// unrelated exceptions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value lies outside the domain of the map being applied (random variable
// not defined on an outcome, function undefined at an eigenvalue, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed argument: bad tolerance, length mismatch, zero trial count.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Probability weights or operator data violate a type invariant.
class InvariantError : public Error {
 public:
  using Error::Error;
};

class NullConditioningError : public Error {
 public:
  using Error::Error;
};

// Raised when an operation that requires commuting operators receives a pair
// whose commutator norm exceeds the tolerance.
class NonCommutingError : public Error {
 public:
  using Error::Error;
};

// Basis handed to the GNS construction is not a unital *-closed algebra.
class AlgebraError : public Error {
 public:
  using Error::Error;
};

// CHSH preconditions (norm bounds, mutual commutation) are violated.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

}  // namespace ncprob
