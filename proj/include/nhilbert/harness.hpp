// SPDX-License-Identifier: Apache-2.0

#ifndef NHILBERT_HARNESS_HPP_
#define NHILBERT_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nhilbert/functionals.hpp"
#include "nhilbert/kernel.hpp"
#include "nhilbert/nspace.hpp"
#include "nhilbert/report.hpp"
#include "nhilbert/sesquilinear.hpp"
#include "nhilbert/tolerance.hpp"

namespace nhilbert {

// Everything left unset is drawn from `seed`: d uniform in [2, 6], n uniform
// in [2, min(4, d)], every random entry uniform in [-1, 1] (real and imaginary
// parts independently; imaginary part 0 in real mode).
struct InstanceSpec {
  std::optional<Index> dim;
  std::optional<int> order;
  std::optional<FieldMode> field;  // unset: complex, plus real variants where a suite has them
  std::optional<std::vector<Vector>> anchor;
  std::optional<std::uint64_t> anchor_seed;  // pins random anchors across trials
  std::optional<Vector> functional;
  std::optional<Matrix> form;
  std::uint64_t seed = 0;
  std::optional<int> trials;
  TolerancePolicy tol;
  // Random functionals and forms get a component that does not vanish on the
  // anchor, so boundedness fails by construction.
  bool unbounded = false;

  FieldMode field_mode() const { return field.value_or(FieldMode::Complex); }
  bool pins_instance() const { return anchor.has_value() || functional || form; }
};

struct Instance {
  NSpace space;
  BLinearFunctional functional;
  BSesquilinearForm form;
};

// Deterministic in the instance spec. Random anchors are resampled up to 16 times
// until independent. Random functionals and forms are projected onto the
// bounded class (c <- conj(P) c, B <- conj(P) B conj(P)) unless `unbounded`
// is set; explicit ones are used as given. Throws InvalidSpec,
// DegenerateAnchor.
Instance generate_instance(const InstanceSpec& spec);

// Trial `trial` of a suite: same instance spec with the seed replaced by
// derive_seed(spec.seed, trial), so trials are independent of execution order.
InstanceSpec trial_spec(const InstanceSpec& spec, int trial);

// Throws InvalidSpec on malformed input or unknown keys.
InstanceSpec parse_instance(const nlohmann::json& j);

inline constexpr std::string_view kSuiteNames[] = {"axioms", "riesz",  "sesq",     "polarize",
                                                   "schwarz", "norms", "operator", "all"};

bool is_suite_name(std::string_view name);

// Trials used when the instance spec leaves them unset.
int default_trials(std::string_view suite);

// One or more reports per suite. Library errors raised inside a trial are
// recorded as failures with the error in the witness; invalid specs throw.
std::vector<PropertyReport> run_suite(std::string_view name, const InstanceSpec& spec);

// Report as an ordered JSON object (schema keys first, then flags and the
// sampling distribution).
nlohmann::ordered_json report_to_json(const PropertyReport& report);

// 0 if no report has a non-fixture failure, else 1.
int exit_code(const std::vector<PropertyReport>& reports);

// Description of the random instance distribution, carried in every report.
std::string_view distribution_description();

}  // namespace nhilbert

#endif  // NHILBERT_HARNESS_HPP_
