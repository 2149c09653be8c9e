// SPDX-License-Identifier: Apache-2.0

#include "nhilbert/report.hpp"

#include <algorithm>

namespace nhilbert {

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Fixture: return "fixture";
  }
  return "fail";
}

Status PropertyReport::status() const {
  if (failures == 0) return Status::Pass;
  if (failures == fixture_failures) return Status::Fixture;
  return Status::Fail;
}

void PropertyReport::flag(std::string name) {
  if (std::find(flags.begin(), flags.end(), name) == flags.end()) flags.push_back(std::move(name));
}

void PropertyReport::merge(const PropertyReport& other) {
  failures += other.failures;
  fixture_failures += other.fixture_failures;
  if (other.worst_violation > worst_violation || (witness.is_null() && !other.witness.is_null())) {
    worst_violation = std::max(worst_violation, other.worst_violation);
    witness = other.witness;
  }
  for (const auto& f : other.flags) flag(f);
}

}  // namespace nhilbert
