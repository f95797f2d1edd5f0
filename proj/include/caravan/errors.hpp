#pragma once

#include <stdexcept>
#include <string>

namespace caravan {

// Malformed arguments or domain objects (bad index pairs, non-square matrices,
// inconsistent fields at construction time).
class InvalidInputError : public std::invalid_argument {
 public:
  explicit InvalidInputError(const std::string& what) : std::invalid_argument(what) {}
};

// Structurally valid input outside an operation's domain (wrong stratum,
// mismatched scalar fields, non-discrete lattice, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Two formally distinct values received equal rational embeddings, so an order
// cannot be decided. The declared Q-independence of the basis symbols is
// violated by the chosen embeddings; callers should pick better embeddings.
class EmbeddingCollisionError : public std::runtime_error {
 public:
  explicit EmbeddingCollisionError(const std::string& what) : std::runtime_error(what) {}
};

// Two distinct cut collisions at the same translation parameter.
class AmbiguousCollisionError : public std::runtime_error {
 public:
  explicit AmbiguousCollisionError(const std::string& what) : std::runtime_error(what) {}
};

// A slide or translation that would produce a non-positive arc length, land an
// endpoint on another one, or otherwise leave the diagram invalid.
class InvalidMoveError : public std::runtime_error {
 public:
  explicit InvalidMoveError(const std::string& what) : std::runtime_error(what) {}
};

// retarget_lengths would change the endpoint order.
class InvalidRetargetError : public std::runtime_error {
 public:
  explicit InvalidRetargetError(const std::string& what) : std::runtime_error(what) {}
};

// Projection of a cut diagram to the horizontal line is not injective.
class DegenerateProjectionError : public std::runtime_error {
 public:
  explicit DegenerateProjectionError(const std::string& what) : std::runtime_error(what) {}
};

// A stated invariant failed on otherwise well-formed data (non-positive
// period, inconsistent Euler characteristic).
class InvariantViolationError : public std::runtime_error {
 public:
  explicit InvariantViolationError(const std::string& what) : std::runtime_error(what) {}
};

// The normalization measure failed to decrease, or the event loop exceeded its
// budget.
class TerminationViolationError : public std::runtime_error {
 public:
  explicit TerminationViolationError(const std::string& what) : std::runtime_error(what) {}
};

// A genus-1 configuration that matches none of the recognized patterns.
class UnclassifiableError : public std::runtime_error {
 public:
  explicit UnclassifiableError(const std::string& what) : std::runtime_error(what) {}
};

// Broken internal assumption; always a bug.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

// Malformed JSON or text input.
class ParseError : public InvalidInputError {
 public:
  explicit ParseError(const std::string& what) : InvalidInputError(what) {}
};

}  // namespace caravan
