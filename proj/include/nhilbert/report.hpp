// SPDX-License-Identifier: Apache-2.0

#ifndef NHILBERT_REPORT_HPP_
#define NHILBERT_REPORT_HPP_

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace nhilbert {

enum class Status { Pass, Fail, Fixture };

std::string_view to_string(Status status);

// Outcome of one seeded verification run. Each check contributes the ratio
// error / allowance; a ratio above 1 is a failure. worst_violation is the
// largest ratio seen and witness holds the inputs that produced it.
struct PropertyReport {
  std::string suite;
  std::uint64_t seed = 0;
  int trials = 0;
  int failures = 0;
  // Failures that are documented expected outcomes (e.g. the real-field
  // counterexample to ||T|| <= 2||T'||). They never make a report "fail".
  int fixture_failures = 0;
  double worst_violation = 0.0;
  nlohmann::json witness;
  std::vector<std::string> flags;

  Status status() const;
  bool passed() const { return status() == Status::Pass; }

  // `make_witness` is only invoked when this check becomes the worst case;
  // ties keep the earliest witness.
  template <typename WitnessFn>
  bool record(double error, double allowance, WitnessFn&& make_witness, bool fixture = false) {
    double ratio;
    if (allowance > 0.0) {
      ratio = error / allowance;
    } else {
      ratio = error > 0.0 ? kPredicateFailure : 0.0;
    }
    if (!(ratio <= kPredicateFailure)) ratio = kPredicateFailure;  // NaN or overflow
    const bool ok = ratio <= 1.0;
    if (!ok) {
      ++failures;
      if (fixture) ++fixture_failures;
    }
    if (ratio > worst_violation || witness.is_null()) {
      worst_violation = std::max(worst_violation, ratio);
      witness = make_witness();
    }
    return ok;
  }

  // Boolean checks score 0 on success and kPredicateFailure on failure.
  template <typename WitnessFn>
  bool record_predicate(bool ok, WitnessFn&& make_witness, bool fixture = false) {
    return record(ok ? 0.0 : 1.0, ok ? 1.0 : 0.0, std::forward<WitnessFn>(make_witness), fixture);
  }

  void flag(std::string name);
  void merge(const PropertyReport& other);

  static constexpr double kPredicateFailure = 2.0;
};

}  // namespace nhilbert

#endif  // NHILBERT_REPORT_HPP_
