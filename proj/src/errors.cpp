// SPDX-License-Identifier: Apache-2.0

#include "nhilbert/errors.hpp"

namespace nhilbert {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DegenerateAnchor: return "DegenerateAnchor";
    case ErrorKind::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorKind::UnboundedFunctional: return "UnboundedFunctional";
    case ErrorKind::UnboundedForm: return "UnboundedForm";
    case ErrorKind::UnboundedOperator: return "UnboundedOperator";
    case ErrorKind::FieldModeMismatch: return "FieldModeMismatch";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
  }
  return "Unknown";
}

}  // namespace nhilbert
