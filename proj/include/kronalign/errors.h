#ifndef KRONALIGN_ERRORS_H_
#define KRONALIGN_ERRORS_H_

#include <stdexcept>
#include <string>

namespace kronalign {

// Shapes, lengths or orders that do not agree.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A contraction count p that no algorithm here needs.
class UnsupportedContraction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input file or record.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The iteration produced a zero vector/matrix or the problem has no motifs.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// NaN or Inf appeared in an iterate.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A dense oracle or column expansion would exceed its configured size.
class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

// An internal invariant (e.g. the rank-growth bound) did not hold.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace kronalign

#endif  // KRONALIGN_ERRORS_H_
