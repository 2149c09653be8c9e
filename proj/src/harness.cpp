// SPDX-License-Identifier: Apache-2.0

#include "nhilbert/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "nhilbert/codec.hpp"
#include "nhilbert/errors.hpp"
#include "nhilbert/random.hpp"

namespace nhilbert {

namespace {

using nlohmann::json;

// Independent random streams per instance component.
enum Stream : std::uint64_t {
  kShapeStream = 0,
  kAnchorStream = 1,
  kFunctionalStream = 2,
  kFormStream = 3,
  kSampleStream = 4,
  kRealVariantStream = 5,
  kCheckStream = 6,  // seeds handed to library checks and samplers
};

constexpr int kAnchorAttempts = 16;
constexpr Index kMaxDim = 64;
constexpr int kMaxRandomDim = 6;
constexpr int kMaxRandomOrder = 4;

// Pinned per-check tolerances of the property suites.
constexpr double kRieszAgreement = 1e-8;
constexpr double kRieszResidual = 1e-8;
constexpr double kSamplingSlack = 1e-8;
constexpr double kSamplingAdequacy = 0.02;
constexpr int kSamplingBudget = 1000;
constexpr double kOperatorResidual = 1e-8;
constexpr double kRoundTrip = 1e-8;
constexpr int kPairsPerForm = 20;
constexpr int kSchwarzPairs = 50;
constexpr int kOperatorSamples = 200;
// Round-off floor for identities evaluated through determinants, relative to
// the raw (uncancelled) magnitude of the operands.
constexpr double kRoundoffFloor = 64 * std::numeric_limits<double>::epsilon();

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidSpec, what); }

json instance_witness(const Instance& inst, int trial) {
  return json{{"trial", trial},
              {"dim", inst.space.dim()},
              {"order", inst.space.order()},
              {"anchor", to_json(std::span<const Vector>(inst.space.anchor().vectors()))}};
}

json error_witness(const Error& e, int trial) {
  return json{{"trial", trial}, {"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
}

PropertyReport make_report(std::string suite, const InstanceSpec& spec, int trials) {
  PropertyReport r;
  r.suite = std::move(suite);
  r.seed = spec.seed;
  r.trials = trials;
  return r;
}

// Runs `body` for each trial; library errors become recorded failures.
template <typename Body>
void for_each_trial(const InstanceSpec& spec, int trials, PropertyReport& report, Body&& body) {
  for (int t = 0; t < trials; ++t) {
    try {
      body(t, trial_spec(spec, t));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidSpec) throw;
      report.record_predicate(false, [&] { return error_witness(e, t); });
    }
  }
}

Rng sample_rng(const InstanceSpec& trial, std::uint64_t stream = kSampleStream) {
  return Rng(trial.seed, stream);
}

std::uint64_t check_seed(const InstanceSpec& trial, std::uint64_t offset = 0) {
  return derive_seed(trial.seed, kCheckStream + (offset << 8));
}

bool is_real_vectors(std::span<const Vector> vs) {
  return std::all_of(vs.begin(), vs.end(), [](const Vector& v) { return is_real(v); });
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

// A copy of `form` that no longer vanishes on the first anchor vector.
Matrix with_anchor_leak(const NSpace& space, const Matrix& form) {
  const Vector& b = space.anchor().vectors().front();
  const Vector u = b.conjugate() / b.norm();
  return form + std::max(1.0, spectral_norm(form)) * u * u.adjoint();
}

// Shared handling of unbounded inputs: they are the expected outcome only
// when the instance spec asks for unbounded fixtures. Returns true when the caller
// should go on with the bounded checks.
template <typename WitnessFn>
bool admit(PropertyReport& report, const InstanceSpec& spec, bool bounded, WitnessFn&& witness) {
  if (bounded) {
    if (spec.unbounded && !spec.pins_instance()) {
      report.record_predicate(false, [&] {
        json w = witness();
        w["check"] = "requested_unbounded";
        return w;
      });
      return false;
    }
    return true;
  }
  report.record_predicate(spec.unbounded, [&] {
    json w = witness();
    w["check"] = "unbounded_input";
    return w;
  });
  return false;
}

// ---------------------------------------------------------------- axioms ---

std::vector<PropertyReport> suite_axioms(const InstanceSpec& spec, int trials) {
  std::vector<int> dims;
  std::vector<int> orders;
  if (spec.dim) {
    dims.push_back(static_cast<int>(*spec.dim));
  } else {
    for (int d = 2; d <= kMaxRandomDim; ++d) dims.push_back(d);
  }
  if (spec.order) {
    orders.push_back(*spec.order);
  } else {
    for (int n = 2; n <= kMaxRandomOrder; ++n) orders.push_back(n);
  }
  PropertyReport axioms = check_axioms(spec.seed, trials, dims, orders, spec.tol);
  axioms.suite = "axioms";

  PropertyReport oracle = make_report("axioms.oracle", spec, trials);
  for_each_trial(spec, trials, oracle, [&](int t, const InstanceSpec& ts) {
    const Instance inst = generate_instance(ts);
    Rng rng = sample_rng(ts);
    const Vector x = rng.box_vector(inst.space.dim(), ts.field_mode());
    const Vector y = rng.box_vector(inst.space.dim(), ts.field_mode());
    const Scalar by_det = n_inner(inst.space, x, y);
    const Matrix& p = inst.space.projector();
    const Scalar by_projection = inst.space.gram_det() * inner(p * x, p * y);
    const double scale = n_norm(inst.space, x) * n_norm(inst.space, y);
    const double raw = inst.space.gram_det() * x.norm() * y.norm();
    oracle.record(std::abs(by_det - by_projection), ts.tol.rel_tol * scale + kRoundoffFloor * raw,
                  [&] {
                    json w = instance_witness(inst, t);
                    w["x"] = to_json(x);
                    w["y"] = to_json(y);
                    w["determinant"] = to_json(by_det);
                    w["projection"] = to_json(by_projection);
                    return w;
                  });
  });
  return {axioms, oracle};
}

// ----------------------------------------------------------------- riesz ---

std::vector<PropertyReport> suite_riesz(const InstanceSpec& spec, int trials) {
  PropertyReport report = make_report("riesz", spec, trials);
  PropertyReport sampling = make_report("riesz.sampling", spec, trials);
  for_each_trial(spec, trials, report, [&](int t, const InstanceSpec& ts) {
    const Instance inst = generate_instance(ts);
    const NSpace& space = inst.space;
    const BLinearFunctional& f = inst.functional;
    const TolerancePolicy& tol = ts.tol;
    const auto base = [&] {
      json w = instance_witness(inst, t);
      w["functional"] = to_json(f.coeffs);
      return w;
    };
    if (!admit(report, ts, is_bounded(space, f), base)) {
      if (!is_bounded(space, f)) {
        // Unbounded: the ratio blows up along b + eps u.
        const auto& anchors = space.anchor().vectors();
        const Vector& b = *std::max_element(anchors.begin(), anchors.end(),
                                            [&](const Vector& l, const Vector& r) {
                                              return std::abs(evaluate(f, l)) < std::abs(evaluate(f, r));
                                            });
        const double tb = std::abs(evaluate(f, b));
        Vector u = space.projector() * sample_rng(ts).box_vector(space.dim(), FieldMode::Complex);
        u *= 0.5 * tb / n_norm(space, u);
        for (const double eps : {1e-2, 1e-4, 1e-6}) {
          const Vector x = b + eps * u;
          const double ratio = std::abs(evaluate(f, x)) / n_norm(space, x);
          report.record_predicate(ratio >= 1.0 / eps, [&] {
            json w = base();
            w["check"] = "unbounded_ratio_blowup";
            w["epsilon"] = eps;
            w["ratio"] = ratio;
            return w;
          });
        }
      }
      return;
    }

    const RieszSolution direct = riesz_direct(space, f);
    const RieszSolution constructive = riesz_constructive(space, f);
    const double norm = functional_norm(space, f);
    const double zd = n_norm(space, direct.representer);
    const auto witness = [&](const char* check) {
      json w = base();
      w["check"] = check;
      w["representer"] = to_json(direct.representer);
      w["representer_constructive"] = to_json(constructive.representer);
      w["norm"] = norm;
      return w;
    };

    const double gap = n_norm(space, direct.representer - constructive.representer);
    report.record(gap, kRieszAgreement * (1.0 + zd), [&] { return witness("direct_vs_constructive"); });
    report.record(direct.residual, kRieszResidual, [&] { return witness("residual_direct"); });
    report.record(constructive.residual, kRieszResidual,
                  [&] { return witness("residual_constructive"); });
    report.record(std::abs(norm - zd), tol.allowance(std::max(norm, zd)),
                  [&] { return witness("norm_equals_representer_norm"); });
    report.record(std::abs(norm - n_norm(space, constructive.representer)),
                  tol.allowance(norm), [&] { return witness("norm_equals_constructive_norm"); });
    if (zd > 0.0) {
      const double attained = std::abs(evaluate(f, direct.representer)) / zd;
      report.record(std::abs(attained - norm), tol.allowance(norm),
                    [&] { return witness("attained_along_representer"); });
    }
    report.merge(verify_representation(space, f, direct.representer, check_seed(ts), kPairsPerForm));

    Rng rng = sample_rng(ts);
    for (int s = 0; s < kPairsPerForm; ++s) {
      const Vector x = rng.box_vector(space.dim(), FieldMode::Complex);
      const double bound = norm * n_norm(space, x);
      report.record(std::max(0.0, std::abs(evaluate(f, x)) - bound), tol.allowance(bound), [&] {
        json w = witness("bounded_by_norm");
        w["x"] = to_json(x);
        return w;
      });
    }

    const SampledSup sup = sampled_functional_norm(space, f, check_seed(ts, 1), kSamplingBudget);
    const auto sample_witness = [&](const char* check) {
      json w = base();
      w["check"] = check;
      w["sampled"] = sup.value;
      w["norm"] = norm;
      return w;
    };
    sampling.record(std::max(0.0, sup.value - norm), kSamplingSlack,
                    [&] { return sample_witness("sampled_not_above_norm"); });
    sampling.record(std::max(0.0, norm - sup.value), kSamplingAdequacy * norm,
                    [&] { return sample_witness("sampled_within_adequacy"); });
  });
  return {report, sampling};
}

// ------------------------------------------------------------------ sesq ---

Matrix form_through_quadratic(const BSesquilinearForm& form, const TolerancePolicy& tol) {
  const Index d = form.matrix.rows();
  const auto quad = [&](const Vector& v) { return quadratic_form(form, v); };
  Matrix recovered(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      recovered(i, j) =
          polarize(quad, Vector::Unit(d, i), Vector::Unit(d, j), FieldMode::Complex, tol);
    }
  }
  return recovered;
}

std::vector<PropertyReport> suite_sesq(const InstanceSpec& spec, int trials) {
  PropertyReport report = make_report("sesq", spec, trials);
  for_each_trial(spec, trials, report, [&](int t, const InstanceSpec& ts) {
    const Instance inst = generate_instance(ts);
    const NSpace& space = inst.space;
    const TolerancePolicy& tol = ts.tol;
    const auto witness = [&](const char* check, const Matrix& m) {
      json w = instance_witness(inst, t);
      w["check"] = check;
      w["form"] = to_json(m);
      return w;
    };

    const BSesquilinearForm& form = inst.form;
    const BSesquilinearForm symmetric{hermitian_part(form.matrix)};
    report.merge(check_symmetry_iff_real(space, form, check_seed(ts), kPairsPerForm));
    report.merge(check_symmetry_iff_real(space, symmetric, check_seed(ts, 1), kPairsPerForm));
    report.record_predicate(is_symmetric(symmetric, tol),
                            [&] { return witness("hermitian_part_symmetric", symmetric.matrix); });

    const BSesquilinearForm flipped = flip_conjugate(form);
    report.record_predicate(flip_conjugate(flipped).matrix == form.matrix,
                            [&] { return witness("flip_involution", form.matrix); });
    Rng rng = sample_rng(ts);
    const double bnorm = spectral_norm(form.matrix);
    for (int s = 0; s < kPairsPerForm; ++s) {
      const Vector x = rng.box_vector(space.dim(), FieldMode::Complex);
      const Vector y = rng.box_vector(space.dim(), FieldMode::Complex);
      const double error =
          std::abs(evaluate_form(flipped, x, y) - std::conj(evaluate_form(form, y, x)));
      report.record(error, tol.allowance(bnorm * x.norm() * y.norm()),
                    [&] { return witness("flip_conjugate_identity", form.matrix); });
    }

    // Boundedness judged on B and on the matrix recovered from T' alone.
    const auto compare_verdicts = [&](const Matrix& m, const char* check) {
      const BSesquilinearForm candidate{m};
      const bool direct = is_bounded_form(space, candidate);
      const bool through_quadratic =
          is_bounded_form(space, BSesquilinearForm{form_through_quadratic(candidate, tol)});
      report.record_predicate(direct == through_quadratic, [&] { return witness(check, m); });
      return direct;
    };
    const bool bounded = compare_verdicts(form.matrix, "boundedness_via_quadratic");
    const bool leaked = compare_verdicts(with_anchor_leak(space, form.matrix),
                                         "unboundedness_via_quadratic");
    report.record_predicate(!leaked, [&] { return witness("anchor_leak_unbounded", form.matrix); });
    if (!ts.pins_instance()) {
      report.record_predicate(bounded != ts.unbounded,
                              [&] { return witness("generated_boundedness", form.matrix); });
    }

    const BSesquilinearForm inner_form = form_from_inner(space);
    report.record_predicate(is_symmetric(inner_form, tol) && is_positive(space, inner_form),
                            [&] { return witness("inner_form_positive", inner_form.matrix); });
  });
  return {report};
}

// -------------------------------------------------------------- polarize ---

void polarize_trials(PropertyReport& report, const Instance& inst, const InstanceSpec& ts, int t,
                     FieldMode field) {
  const NSpace& space = inst.space;
  const BSesquilinearForm& form = inst.form;
  const auto quad = [&](const Vector& v) { return quadratic_form(form, v); };
  const double bnorm = spectral_norm(form.matrix);
  Rng rng = sample_rng(ts);
  for (int s = 0; s < kPairsPerForm; ++s) {
    const Vector x = rng.box_vector(space.dim(), field);
    const Vector y = rng.box_vector(space.dim(), field);
    const Scalar expected = evaluate_form(form, x, y);
    const Scalar recovered = polarize(quad, x, y, field, ts.tol);
    report.record(std::abs(recovered - expected), ts.tol.rel_tol * bnorm * x.norm() * y.norm(),
                  [&] {
                    json w = instance_witness(inst, t);
                    w["form"] = to_json(form.matrix);
                    w["x"] = to_json(x);
                    w["y"] = to_json(y);
                    w["expected"] = to_json(expected);
                    w["polarized"] = to_json(recovered);
                    return w;
                  });
  }
}

// Symmetric form on the trial instance; real mode takes the real symmetric part.
Instance symmetrized(Instance inst, FieldMode field, bool pinned_form) {
  if (pinned_form) return inst;
  if (field == FieldMode::Real) {
    const Eigen::MatrixXd real = inst.form.matrix.real();
    inst.form.matrix = (0.5 * (real + real.transpose())).cast<Scalar>();
  } else {
    inst.form.matrix = hermitian_part(inst.form.matrix);
  }
  return inst;
}

std::vector<PropertyReport> suite_polarize(const InstanceSpec& spec, int trials) {
  std::vector<PropertyReport> out;
  const bool pinned_complex =
      (spec.anchor && !is_real_vectors(*spec.anchor)) || (spec.form && !is_real(*spec.form));
  const bool run_complex = spec.field_mode() == FieldMode::Complex;
  const bool run_real = spec.field ? *spec.field == FieldMode::Real : !pinned_complex;

  if (run_complex) {
    PropertyReport report = make_report("polarize.complex", spec, trials);
    for_each_trial(spec, trials, report, [&](int t, const InstanceSpec& ts) {
      const Instance inst = symmetrized(generate_instance(ts), FieldMode::Complex, ts.form.has_value());
      polarize_trials(report, inst, ts, t, FieldMode::Complex);
    });
    out.push_back(report);
  }
  if (run_real) {
    PropertyReport report = make_report("polarize.real", spec, trials);
    for_each_trial(spec, trials, report, [&](int t, const InstanceSpec& ts) {
      InstanceSpec real_spec = ts;
      real_spec.field = FieldMode::Real;
      if (!spec.field) real_spec.seed = derive_seed(ts.seed, kRealVariantStream);
      const Instance inst = symmetrized(generate_instance(real_spec), FieldMode::Real,
                                        ts.form.has_value());
      if (!is_symmetric(inst.form, ts.tol)) {
        report.flag("real_identity_needs_symmetric_form");
        report.record_predicate(false, [&] {
          json w = instance_witness(inst, t);
          w["check"] = "real_identity_needs_symmetric_form";
          w["form"] = to_json(inst.form.matrix);
          return w;
        });
        return;
      }
      polarize_trials(report, inst, real_spec, t, FieldMode::Real);
    });
    out.push_back(report);
  }
  if (!run_real && !spec.field) {
    out.front().flag("real_identity_not_applicable");
  }
  return out;
}

// --------------------------------------------------------------- schwarz ---

std::vector<PropertyReport> suite_schwarz(const InstanceSpec& spec, int trials) {
  PropertyReport report = make_report("schwarz", spec, trials);
  for_each_trial(spec, trials, report, [&](int t, const InstanceSpec& ts) {
    Instance inst = generate_instance(ts);
    if (!ts.form) {
      // K = P A^H A P is positive on range(P); the form matrix is K^T.
      const Matrix& p = inst.space.projector();
      const Matrix a = Rng(ts.seed, kFormStream)
                           .box_matrix(inst.space.dim(), inst.space.dim(), ts.field_mode());
      inst.form.matrix = (p * a.adjoint() * a * p).transpose();
      if (ts.unbounded) inst.form.matrix = with_anchor_leak(inst.space, inst.form.matrix);
    }
    if (!admit(report, ts, is_bounded_form(inst.space, inst.form), [&] {
          json w = instance_witness(inst, t);
          w["form"] = to_json(inst.form.matrix);
          return w;
        })) {
      return;
    }
    report.merge(check_generalized_schwarz(inst.space, inst.form, check_seed(ts), kSchwarzPairs));
  });
  return {report};
}

// ----------------------------------------------------------------- norms ---

std::vector<PropertyReport> suite_norms(const InstanceSpec& spec, int trials) {
  PropertyReport report = make_report("norms", spec, trials);
  PropertyReport sampling = make_report("norms.sampling", spec, trials);
  const FieldMode field = spec.field_mode();
  for_each_trial(spec, trials, report, [&](int t, const InstanceSpec& ts) {
    const Instance inst = generate_instance(ts);
    const NSpace& space = inst.space;
    const auto witness = [&](const Matrix& m) {
      json w = instance_witness(inst, t);
      w["form"] = to_json(m);
      return w;
    };
    if (!admit(report, ts, is_bounded_form(space, inst.form), [&] { return witness(inst.form.matrix); })) {
      return;
    }
    report.merge(check_norm_relations(space, inst.form, field));
    if (!ts.form) {
      report.merge(check_norm_relations(space, symmetrized(inst, field, false).form, field));
    }

    const double norm = sesq_norm(space, inst.form);
    const QuadNorm quad = quad_norm(space, inst.form, field);
    const SampledSup form_sup = sampled_form_norm(space, inst.form, check_seed(ts), kSamplingBudget);
    const SampledSup quad_sup =
        sampled_quad_norm(space, inst.form, field, check_seed(ts, 1), kSamplingBudget);
    const auto sample_witness = [&](const char* check) {
      json w = witness(inst.form.matrix);
      w["check"] = check;
      w["form_norm"] = norm;
      w["sampled_form_norm"] = form_sup.value;
      w["quad_norm"] = quad.value;
      w["quad_norm_upper"] = quad.upper;
      w["sampled_quad_norm"] = quad_sup.value;
      return w;
    };
    sampling.record(std::max(0.0, form_sup.value - norm), kSamplingSlack,
                    [&] { return sample_witness("form_sampled_not_above_norm"); });
    sampling.record(std::max(0.0, norm - form_sup.value), kSamplingAdequacy * norm,
                    [&] { return sample_witness("form_sampled_within_adequacy"); });
    sampling.record(std::max(0.0, quad_sup.value - quad.upper), kSamplingSlack,
                    [&] { return sample_witness("quad_sampled_not_above_norm"); });
    sampling.record(std::max(0.0, quad.value - quad_sup.value), kSamplingAdequacy * quad.value,
                    [&] { return sample_witness("quad_sampled_within_adequacy"); });
  });
  return {report, sampling};
}

// -------------------------------------------------------------- operator ---

std::vector<PropertyReport> suite_operator(const InstanceSpec& spec, int trials) {
  PropertyReport report = make_report("operator", spec, trials);
  for_each_trial(spec, trials, report, [&](int t, const InstanceSpec& ts) {
    const Instance inst = generate_instance(ts);
    const NSpace& space = inst.space;
    const auto witness = [&](const char* check) {
      json w = instance_witness(inst, t);
      w["check"] = check;
      w["form"] = to_json(inst.form.matrix);
      return w;
    };
    if (!admit(report, ts, is_bounded_form(space, inst.form), [&] { return witness("bounded"); })) {
      return;
    }
    const BOperator op = extract_operator(space, inst.form);
    const double bnorm = spectral_norm(inst.form.matrix);
    Rng rng = sample_rng(ts);
    for (int s = 0; s < kOperatorSamples; ++s) {
      const Vector x = rng.box_vector(space.dim(), FieldMode::Complex);
      const Vector y = rng.box_vector(space.dim(), FieldMode::Complex);
      const double error =
          std::abs(evaluate_form(inst.form, x, y) - n_inner(space, op.matrix * x, y));
      report.record(error, kOperatorResidual * bnorm * x.norm() * y.norm(), [&] {
        json w = witness("representation_residual");
        w["x"] = to_json(x);
        w["y"] = to_json(y);
        return w;
      });
    }
    const double norm = sesq_norm(space, inst.form);
    report.record(std::abs(op.bnorm - norm), ts.tol.allowance(norm), [&] {
      json w = witness("operator_norm_equals_form_norm");
      w["operator_norm"] = op.bnorm;
      w["form_norm"] = norm;
      return w;
    });
    const Matrix pc = space.projector().conjugate();
    const Matrix back = form_from_operator(space, op.matrix).matrix;
    report.record(spectral_norm(pc * (back - inst.form.matrix) * pc), kRoundTrip * bnorm,
                  [&] { return witness("round_trip"); });
  });
  return {report};
}

using SuiteFn = std::vector<PropertyReport> (*)(const InstanceSpec&, int);

SuiteFn suite_function(std::string_view name) {
  if (name == "axioms") return suite_axioms;
  if (name == "riesz") return suite_riesz;
  if (name == "sesq") return suite_sesq;
  if (name == "polarize") return suite_polarize;
  if (name == "schwarz") return suite_schwarz;
  if (name == "norms") return suite_norms;
  if (name == "operator") return suite_operator;
  return nullptr;
}

// ------------------------------------------------------------- parsing ---

std::uint64_t parse_seed(const json& j, const char* key) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::uint64_t>();
  invalid(std::string(key) + " must be a non-negative integer");
}

int parse_positive(const json& j, const char* key) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 1 ||
      j.get<std::int64_t>() > std::numeric_limits<int>::max()) {
    invalid(std::string(key) + " must be a positive integer");
  }
  return j.get<int>();
}

}  // namespace

// ------------------------------------------------------------ instances ---

InstanceSpec trial_spec(const InstanceSpec& spec, int trial) {
  InstanceSpec out = spec;
  out.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(trial));
  return out;
}

Instance generate_instance(const InstanceSpec& spec) {
  const FieldMode field = spec.field_mode();
  std::optional<Index> dim = spec.dim;
  std::optional<int> order = spec.order;
  const auto pin_dim = [&](Index d, const char* source) {
    if (dim && *dim != d) {
      invalid(std::string(source) + " has length " + std::to_string(d) + ", dim is " +
              std::to_string(*dim));
    }
    dim = d;
  };

  if (spec.anchor) {
    if (spec.anchor->empty()) invalid("anchor must contain at least one vector");
    const int n = static_cast<int>(spec.anchor->size()) + 1;
    if (order && *order != n) {
      invalid("order " + std::to_string(*order) + " needs " + std::to_string(*order - 1) +
              " anchor vectors, got " + std::to_string(spec.anchor->size()));
    }
    order = n;
    for (const auto& v : *spec.anchor) pin_dim(v.size(), "anchor vector");
    if (field == FieldMode::Real && !is_real_vectors(*spec.anchor)) {
      invalid("real field requires real anchor vectors");
    }
  }
  if (spec.functional) {
    pin_dim(spec.functional->size(), "functional");
    if (field == FieldMode::Real && !is_real(*spec.functional)) {
      invalid("real field requires a real functional");
    }
  }
  if (spec.form) {
    if (spec.form->rows() != spec.form->cols()) invalid("form must be square");
    pin_dim(spec.form->rows(), "form");
    if (field == FieldMode::Real && !is_real(*spec.form)) invalid("real field requires a real form");
  }

  Rng shape(spec.seed, kShapeStream);
  if (!dim) {
    const int lo = std::max(2, order.value_or(2));
    dim = shape.uniform_int(lo, std::max(lo, kMaxRandomDim));
  }
  if (!order) order = shape.uniform_int(2, static_cast<int>(std::min<Index>(kMaxRandomOrder, *dim)));
  if (*order < 2) invalid("order must be at least 2");
  if (*dim < *order) {
    invalid("dim " + std::to_string(*dim) + " must be at least order " + std::to_string(*order));
  }
  if (*dim > kMaxDim) invalid("dim must be at most " + std::to_string(kMaxDim));

  const auto build = [&]() -> NSpace {
    if (spec.anchor) return NSpace(*dim, *order, *spec.anchor, spec.tol);
    Rng rng = spec.anchor_seed ? Rng(*spec.anchor_seed, kAnchorStream) : Rng(spec.seed, kAnchorStream);
    for (int attempt = 1;; ++attempt) {
      std::vector<Vector> vs;
      for (int i = 0; i + 1 < *order; ++i) vs.push_back(rng.box_vector(*dim, field));
      try {
        return NSpace(*dim, *order, std::move(vs), spec.tol);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateAnchor || attempt == kAnchorAttempts) throw;
      }
    }
  };
  NSpace space = build();
  const Matrix pc = space.projector().conjugate();

  Vector coeffs;
  if (spec.functional) {
    coeffs = *spec.functional;
  } else {
    coeffs = pc * Rng(spec.seed, kFunctionalStream).box_vector(*dim, field);
    if (spec.unbounded) {
      const Vector& b = space.anchor().vectors().front();
      coeffs += b.conjugate() / b.norm();
    }
  }
  Matrix form;
  if (spec.form) {
    form = *spec.form;
  } else {
    form = pc * Rng(spec.seed, kFormStream).box_matrix(*dim, *dim, field) * pc;
    if (spec.unbounded) form = with_anchor_leak(space, form);
  }
  return Instance{std::move(space), BLinearFunctional{std::move(coeffs)},
                  BSesquilinearForm{std::move(form)}};
}

InstanceSpec parse_instance(const json& j) {
  if (!j.is_object()) invalid("instance must be a JSON object");
  static const char* const kKeys[] = {"dim",  "order", "field",  "anchor",   "functional",
                                      "form", "trials", "seed", "tol", "unbounded"};
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(std::begin(kKeys), std::end(kKeys), [&](const char* k) { return key == k; }) ==
        std::end(kKeys)) {
      invalid("unknown instance key \"" + key + "\"");
    }
  }
  InstanceSpec spec;
  try {
    if (j.contains("dim") && !j["dim"].is_null()) spec.dim = parse_positive(j["dim"], "dim");
    if (j.contains("order") && !j["order"].is_null()) spec.order = parse_positive(j["order"], "order");
    if (j.contains("field") && !j["field"].is_null()) {
      const auto& f = j["field"];
      if (f == "real") spec.field = FieldMode::Real;
      else if (f == "complex") spec.field = FieldMode::Complex;
      else invalid("field must be \"real\" or \"complex\"");
    }
    if (j.contains("anchor") && !j["anchor"].is_null()) {
      const auto& a = j["anchor"];
      if (a.is_object()) {
        if (a.size() != 1 || !a.contains("seed")) invalid("anchor object must be {\"seed\": int}");
        spec.anchor_seed = parse_seed(a["seed"], "anchor.seed");
      } else {
        spec.anchor = vectors_from_json(a);
      }
    }
    if (j.contains("functional") && !j["functional"].is_null()) {
      spec.functional = vector_from_json(j["functional"]);
    }
    if (j.contains("form") && !j["form"].is_null()) spec.form = matrix_from_json(j["form"]);
    if (j.contains("trials") && !j["trials"].is_null()) spec.trials = parse_positive(j["trials"], "trials");
    if (j.contains("seed") && !j["seed"].is_null()) spec.seed = parse_seed(j["seed"], "seed");
    if (j.contains("tol") && !j["tol"].is_null()) {
      if (!j["tol"].is_number() || !(j["tol"].get<double>() > 0.0)) invalid("tol must be positive");
      spec.tol.abs_tol = spec.tol.rel_tol = j["tol"].get<double>();
    }
    if (j.contains("unbounded") && !j["unbounded"].is_null()) {
      if (!j["unbounded"].is_boolean()) invalid("unbounded must be a boolean");
      spec.unbounded = j["unbounded"].get<bool>();
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidSpec) throw;
    invalid(e.what());
  } catch (const nlohmann::json::exception& e) {
    invalid(e.what());
  }
  return spec;
}

// --------------------------------------------------------------- suites ---

bool is_suite_name(std::string_view name) {
  return std::find(std::begin(kSuiteNames), std::end(kSuiteNames), name) != std::end(kSuiteNames);
}

int default_trials(std::string_view suite) {
  if (suite == "axioms") return 1000;
  if (suite == "schwarz" || suite == "operator") return 200;
  return 500;
}

std::vector<PropertyReport> run_suite(std::string_view name, const InstanceSpec& spec) {
  if (!is_suite_name(name)) invalid("unknown suite \"" + std::string(name) + "\"");
  if (spec.trials && *spec.trials < 1) invalid("trials must be positive");
  // Surfaces invalid or degenerate pinned instances before any trial runs.
  try {
    generate_instance(trial_spec(spec, 0));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidSpec || spec.pins_instance()) throw;
  }

  std::vector<PropertyReport> out;
  const auto run_one = [&](std::string_view suite) {
    const int trials = spec.trials.value_or(default_trials(suite));
    for (auto& r : suite_function(suite)(spec, trials)) out.push_back(std::move(r));
  };
  if (name == "all") {
    for (const auto suite : kSuiteNames) {
      if (suite != "all") run_one(suite);
    }
  } else {
    run_one(name);
  }
  return out;
}

nlohmann::ordered_json report_to_json(const PropertyReport& report) {
  nlohmann::ordered_json j;
  j["suite"] = report.suite;
  j["seed"] = report.seed;
  j["trials"] = report.trials;
  j["failures"] = report.failures;
  j["worst_violation"] = report.worst_violation;
  j["witness"] = nlohmann::ordered_json(report.witness);
  j["status"] = std::string(to_string(report.status()));
  j["flags"] = report.flags;
  j["distribution"] = std::string(distribution_description());
  return j;
}

int exit_code(const std::vector<PropertyReport>& reports) {
  const bool failed = std::any_of(reports.begin(), reports.end(), [](const PropertyReport& r) {
    return r.status() == Status::Fail;
  });
  return failed ? 1 : 0;
}

std::string_view distribution_description() {
  return "entries uniform in [-1,1] (real and imaginary parts); dim uniform in [2,6], order "
         "uniform in [2,min(4,dim)] unless fixed; trial seeds splitmix64(seed, trial)";
}

}  // namespace nhilbert
