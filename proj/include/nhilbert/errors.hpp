// SPDX-License-Identifier: Apache-2.0

#ifndef NHILBERT_ERRORS_HPP_
#define NHILBERT_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace nhilbert {

enum class ErrorKind {
  DimensionMismatch,
  NotSquare,
  NonFinite,
  DegenerateAnchor,
  NumericalBreakdown,
  UnboundedFunctional,
  UnboundedForm,
  UnboundedOperator,
  FieldModeMismatch,
  NotPositive,
  InvalidSpec,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nhilbert

#endif  // NHILBERT_ERRORS_HPP_
