// SPDX-License-Identifier: Apache-2.0
//
// nhilbert <suite> [--dim D] [--order N] [--field real|complex] [--seed S]
//          [--trials T] [--tol X] [--input instance.json] [--out report.json]
//          [--json]
//
// Exit status: 0 every report passes (fixtures included), 1 a non-fixture
// failure, 2 invalid input.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "nhilbert/codec.hpp"
#include "nhilbert/errors.hpp"
#include "nhilbert/harness.hpp"

namespace {

constexpr int kExitInvalid = 2;

double parse_tol(const std::string& text, const char* source) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(value > 0.0) || !std::isfinite(value)) {
    throw nhilbert::Error(nhilbert::ErrorKind::InvalidSpec,
                          std::string(source) + " must be a positive number, got \"" + text + "\"");
  }
  return value;
}

void print_summary(const std::vector<nhilbert::PropertyReport>& reports) {
  for (const auto& r : reports) {
    std::printf("%-18s %-8s trials=%-5d failures=%-4d worst=%.3g", r.suite.c_str(),
                std::string(nhilbert::to_string(r.status())).c_str(), r.trials, r.failures,
                r.worst_violation);
    for (const auto& f : r.flags) std::printf(" [%s]", f.c_str());
    std::printf("\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seeded property suites for anchored n-inner-product spaces"};
  std::string suite;
  std::optional<long long> dim;
  std::optional<int> order;
  std::optional<std::string> field;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> tol;
  std::string input;
  std::string out;
  bool json_output = false;

  std::string suite_help = "Suite to run:";
  for (const auto name : nhilbert::kSuiteNames) suite_help += " " + std::string(name);
  app.add_option("suite", suite, suite_help)->required();
  app.add_option("--dim", dim, "Ambient dimension d");
  app.add_option("--order", order, "Order n of the n-inner product");
  app.add_option("--field", field, "Scalar field")->check(CLI::IsMember({"real", "complex"}));
  app.add_option("--seed", seed, "Base seed");
  app.add_option("--trials", trials, "Trials per suite");
  app.add_option("--tol", tol, "Absolute and relative tolerance (overrides NHILBERT_TOL)");
  app.add_option("--input", input, "Instance JSON file");
  app.add_option("--out", out, "Write newline-delimited JSON reports to this file");
  app.add_flag("--json", json_output, "Print newline-delimited JSON reports to stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  std::vector<nhilbert::PropertyReport> reports;
  try {
    if (!nhilbert::is_suite_name(suite)) {
      throw nhilbert::Error(nhilbert::ErrorKind::InvalidSpec, "unknown suite \"" + suite + "\"");
    }
    nhilbert::InstanceSpec spec;
    if (!input.empty()) {
      std::ifstream in(input);
      if (!in) {
        throw nhilbert::Error(nhilbert::ErrorKind::InvalidSpec, "cannot open " + input);
      }
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw nhilbert::Error(nhilbert::ErrorKind::InvalidSpec, input + ": " + e.what());
      }
      spec = nhilbert::parse_instance(j);
    }
    if (const char* env = std::getenv("NHILBERT_TOL"); env != nullptr && *env != '\0') {
      spec.tol.abs_tol = spec.tol.rel_tol = parse_tol(env, "NHILBERT_TOL");
    }
    if (tol) spec.tol.abs_tol = spec.tol.rel_tol = parse_tol(*tol, "--tol");
    if (dim) {
      if (*dim < 1) throw nhilbert::Error(nhilbert::ErrorKind::InvalidSpec, "--dim must be positive");
      spec.dim = static_cast<nhilbert::Index>(*dim);
    }
    if (order) spec.order = *order;
    if (field) spec.field = *field == "real" ? nhilbert::FieldMode::Real : nhilbert::FieldMode::Complex;
    if (seed) spec.seed = *seed;
    if (trials) {
      if (*trials < 1) throw nhilbert::Error(nhilbert::ErrorKind::InvalidSpec, "--trials must be positive");
      spec.trials = *trials;
    }
    reports = nhilbert::run_suite(suite, spec);
  } catch (const nhilbert::Error& e) {
    std::cerr << "nhilbert: " << e.what() << "\n";
    return kExitInvalid;
  }

  std::string lines;
  for (const auto& r : reports) lines += nhilbert::dump_json(nhilbert::report_to_json(r)) + "\n";
  if (!out.empty()) {
    std::ofstream file(out);
    if (!file) {
      std::cerr << "nhilbert: cannot write " << out << "\n";
      return kExitInvalid;
    }
    file << lines;
  }
  if (json_output) {
    std::cout << lines;
  } else {
    print_summary(reports);
  }
  return nhilbert::exit_code(reports);
}
