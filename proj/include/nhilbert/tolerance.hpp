// SPDX-License-Identifier: Apache-2.0

#ifndef NHILBERT_TOLERANCE_HPP_
#define NHILBERT_TOLERANCE_HPP_

#include <algorithm>
#include <cmath>
#include <complex>

namespace nhilbert {

// One comparison rule for the whole library:
//   |a - b| <= abs_tol + rel_tol * max(|a|, |b|).
// within() is the same rule with the magnitude supplied by the caller, for
// identities whose natural scale is larger than either side (cancellation).
struct TolerancePolicy {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;

  bool within(double error, double magnitude) const {
    return error <= abs_tol + rel_tol * magnitude;
  }

  // Allowed error at a given magnitude; used to turn errors into ratios.
  double allowance(double magnitude) const { return abs_tol + rel_tol * magnitude; }

  bool approx_eq(double a, double b) const {
    return within(std::abs(a - b), std::max(std::abs(a), std::abs(b)));
  }

  bool approx_eq(std::complex<double> a, std::complex<double> b) const {
    return within(std::abs(a - b), std::max(std::abs(a), std::abs(b)));
  }
};

}  // namespace nhilbert

#endif  // NHILBERT_TOLERANCE_HPP_
