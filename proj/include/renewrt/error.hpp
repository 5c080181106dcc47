#pragma once

#include <stdexcept>
#include <string>

namespace renewrt {

/// Bad input: violated precondition or malformed configuration.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to reach its stated accuracy (root polish,
/// singular linear system, optimizer that never left its bracket, ...).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested quantity is undefined for this medium, e.g. the Beer-law
/// upper bound outside the near-field regime mu > 2 beta.
class ValidityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {
inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}
}  // namespace detail

}  // namespace renewrt
