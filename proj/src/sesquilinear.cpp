// SPDX-License-Identifier: Apache-2.0

#include "nhilbert/sesquilinear.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nhilbert/codec.hpp"
#include "nhilbert/errors.hpp"
#include "nhilbert/functionals.hpp"

namespace nhilbert {

namespace {

constexpr int kSymmetrySamples = 50;
constexpr int kPositivitySamples = 200;
constexpr int kExtractionSamples = 200;
constexpr double kExtractionTolerance = 1e-8;
// |x^H K x| has one local maximum per peak of the field-of-values support
// function, so its sampled sup needs starts spread over the phase circle.
constexpr int kQuadraticStarts = 16;
constexpr int kFormStarts = 4;
constexpr double kAscentStall = 1e-14;
constexpr double kRoundoff = 64 * std::numeric_limits<double>::epsilon();

void require_square(const NSpace& space, const Matrix& m, const char* what) {
  if (m.rows() != space.dim() || m.cols() != space.dim()) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": expected " +
                                                  std::to_string(space.dim()) + "x" +
                                                  std::to_string(space.dim()));
  }
  require_finite(m, what);
}

// P K P with K = B^T, the form's operator restricted to range(P).
Matrix compressed_operator(const NSpace& space, const BSesquilinearForm& form) {
  const Matrix& p = space.projector();
  return p * form.matrix.transpose() * p;
}

void require_bounded(const NSpace& space, const BSesquilinearForm& form) {
  if (!is_bounded_form(space, form)) {
    throw Error(ErrorKind::UnboundedForm, "form is not supported on range(P)");
  }
}

bool space_is_real(const NSpace& space) {
  for (const auto& b : space.anchor().vectors()) {
    if (!is_real(b, space.tol())) return false;
  }
  return true;
}

double max_entry(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

Scalar evaluate_form(const BSesquilinearForm& form, const Vector& x, const Vector& y) {
  const Index d = form.matrix.rows();
  if (form.matrix.cols() != d || x.size() != d || y.size() != d) {
    throw Error(ErrorKind::DimensionMismatch, "evaluate_form: form is " + std::to_string(d) +
                                                  "x" + std::to_string(form.matrix.cols()) +
                                                  ", inputs " + std::to_string(x.size()) +
                                                  " and " + std::to_string(y.size()));
  }
  return x.transpose() * form.matrix * y.conjugate();
}

Scalar quadratic_form(const BSesquilinearForm& form, const Vector& x) {
  return evaluate_form(form, x, x);
}

BSesquilinearForm form_from_inner(const NSpace& space) {
  // y^H (g P) x = x^T (g P^T) conj(y).
  BSesquilinearForm form{space.metric().transpose()};
  Rng rng(0);
  for (int s = 0; s < 100; ++s) {
    const Vector x = rng.box_vector(space.dim(), FieldMode::Complex);
    const Vector y = rng.box_vector(space.dim(), FieldMode::Complex);
    const Scalar expected = n_inner(space, x, y);
    const double scale = space.gram_det() * x.norm() * y.norm();
    if (!space.tol().within(std::abs(evaluate_form(form, x, y) - expected), scale)) {
      throw Error(ErrorKind::NumericalBreakdown, "form_from_inner disagrees with n_inner");
    }
  }
  return form;
}

BSesquilinearForm flip_conjugate(const BSesquilinearForm& form) {
  return BSesquilinearForm{form.matrix.adjoint()};
}

BSesquilinearForm form_from_operator(const NSpace& space, const Matrix& op) {
  require_square(space, op, "form_from_operator");
  // <A x, y | b> = y^H G A x, so B = (G A)^T.
  return BSesquilinearForm{(space.metric() * op).transpose()};
}

bool is_symmetric(const BSesquilinearForm& form, const TolerancePolicy& tol) {
  const Matrix& b = form.matrix;
  if (b.rows() != b.cols()) return false;
  const double scale = max_entry(b);
  for (Index i = 0; i < b.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) {
      if (!tol.within(std::abs(b(i, j) - std::conj(b(j, i))), scale)) return false;
    }
  }
  // Sampled cross-check of T(x, y) = conj(T(y, x)).
  Rng rng(0);
  const double norm = spectral_norm(b);
  for (int s = 0; s < kSymmetrySamples; ++s) {
    const Vector x = rng.box_vector(b.rows(), FieldMode::Complex);
    const Vector y = rng.box_vector(b.rows(), FieldMode::Complex);
    const double error = std::abs(evaluate_form(form, x, y) - std::conj(evaluate_form(form, y, x)));
    if (!tol.within(error, norm * x.norm() * y.norm())) return false;
  }
  return true;
}

bool is_positive(const NSpace& space, const BSesquilinearForm& form) {
  require_square(space, form.matrix, "is_positive");
  const TolerancePolicy& tol = space.tol();
  if (!is_symmetric(form, tol)) return false;
  const double norm = spectral_norm(form.matrix);
  // Spectrum of K = B^T equals that of B.
  const Eigen::VectorXd ev = hermitian_eigenvalues(form.matrix);
  if (ev.size() > 0 && ev(0) < -tol.allowance(norm)) return false;
  Rng rng(0);
  for (int s = 0; s < kPositivitySamples; ++s) {
    const Vector x = rng.box_vector(space.dim(), FieldMode::Complex);
    const Scalar q = quadratic_form(form, x);
    const double scale = norm * x.squaredNorm();
    if (std::abs(q.imag()) > tol.allowance(scale) || q.real() < -tol.allowance(scale)) return false;
  }
  return true;
}

Scalar polarize(const std::function<Scalar(const Vector&)>& quad, const Vector& x,
                const Vector& y, FieldMode field, const TolerancePolicy& tol) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "polarize");
  const auto checked = [&](const Vector& v) {
    const Scalar q = quad(v);
    if (field == FieldMode::Real && !tol.within(std::abs(q.imag()), std::abs(q.real()))) {
      throw Error(ErrorKind::FieldModeMismatch, "quadratic form is not real-valued");
    }
    return q;
  };
  Scalar result = 0.25 * (checked(x + y) - checked(x - y));
  if (field == FieldMode::Complex) {
    const Scalar i(0.0, 1.0);
    result += 0.25 * (i * checked(x + i * y) - i * checked(x - i * y));
  }
  return result;
}

bool is_bounded_form(const NSpace& space, const BSesquilinearForm& form) {
  require_square(space, form.matrix, "is_bounded_form");
  const Matrix pc = space.projector().conjugate();
  const double norm = spectral_norm(form.matrix);
  const double leak = spectral_norm(form.matrix - pc * form.matrix * pc);
  return leak <= (space.tol().abs_tol + space.tol().rel_tol) * norm;
}

double sesq_norm(const NSpace& space, const BSesquilinearForm& form) {
  require_bounded(space, form);
  return spectral_norm(compressed_operator(space, form)) / space.gram_det();
}

QuadNorm quad_norm(const NSpace& space, const BSesquilinearForm& form, FieldMode field) {
  require_bounded(space, form);
  const double g = space.gram_det();
  const Matrix k = compressed_operator(space, form);
  QuadNorm out;
  if (field == FieldMode::Real) {
    if (!is_real(form.matrix, space.tol()) || !space_is_real(space)) {
      throw Error(ErrorKind::FieldModeMismatch, "real-mode norm needs a real form and anchor");
    }
    // x^T K x only sees the symmetric part of a real K.
    const Matrix symmetric = 0.5 * (k.real() + k.real().transpose()).cast<Scalar>();
    const Eigen::VectorXd ev = hermitian_eigenvalues(symmetric);
    out.value = out.lower = out.upper = (ev.size() > 0 ? ev.cwiseAbs().maxCoeff() : 0.0) / g;
    out.exact = true;
    return out;
  }
  const NumericalRadius w = numerical_radius(k, space.tol());
  out.lower = out.value = w.lower / g;
  out.upper = std::max(out.lower, std::min(w.upper, spectral_norm(k)) / g);
  out.exact = is_symmetric(form, space.tol());
  return out;
}

PropertyReport check_norm_relations(const NSpace& space, const BSesquilinearForm& form,
                                    FieldMode field) {
  PropertyReport report;
  report.suite = "norm_relations";
  report.trials = 1;
  const double norm = sesq_norm(space, form);
  const QuadNorm quad = quad_norm(space, form, field);
  const auto witness = [&](const char* check) {
    return nlohmann::json{{"check", check},
                          {"field", field == FieldMode::Real ? "real" : "complex"},
                          {"form_norm", norm},
                          {"quad_norm", quad.value},
                          {"form", to_json(form.matrix)}};
  };
  report.record(std::max(0.0, quad.value - norm), kNormSlack * norm,
                [&] { return witness("quad_le_form"); });
  const bool fixture = field == FieldMode::Real;
  const bool upper_ok = report.record(std::max(0.0, norm - 2.0 * quad.value),
                                      kNormSlack * 2.0 * quad.value,
                                      [&] { return witness("form_le_twice_quad"); }, fixture);
  if (!upper_ok && fixture) report.flag("real_field_counterexample");
  if (is_symmetric(form, space.tol())) {
    report.record(std::abs(norm - quad.value), kNormSlack * (1.0 + norm),
                  [&] { return witness("symmetric_equality"); });
  }
  return report;
}

PropertyReport check_generalized_schwarz(const NSpace& space, const BSesquilinearForm& form,
                                         std::uint64_t seed, int trials) {
  if (!is_positive(space, form)) throw Error(ErrorKind::NotPositive, "form is not positive");
  PropertyReport report;
  report.suite = "generalized_schwarz";
  report.seed = seed;
  report.trials = trials;
  const double norm = spectral_norm(form.matrix);
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(seed, static_cast<std::uint64_t>(trial));
    const Vector x = rng.box_vector(space.dim(), FieldMode::Complex);
    const Vector y = rng.box_vector(space.dim(), FieldMode::Complex);
    const double txy = std::abs(evaluate_form(form, x, y));
    const double qx = quadratic_form(form, x).real();
    const double qy = quadratic_form(form, y).real();
    // First-order round-off of the products; T'(x) near 0 is legitimate for
    // x close to span(anchor).
    const double ex = kRoundoff * norm * x.squaredNorm();
    const double ey = kRoundoff * norm * y.squaredNorm();
    const auto witness = [&](const char* check) {
      return nlohmann::json{{"check", check}, {"x", to_json(x)}, {"y", to_json(y)},
                            {"|T(x,y)|^2", txy * txy}, {"T'(x)T'(y)", qx * qy}};
    };
    report.record(std::max(0.0, txy * txy - qx * qy),
                  kNormSlack * std::abs(qx * qy) + ex * std::abs(qy) + ey * std::abs(qx) + ex * ey,
                  [&] { return witness("inequality"); });
    // x = y is the equality case.
    const double txx = std::abs(evaluate_form(form, x, x));
    report.record(std::abs(txx * txx - qx * qx), kNormSlack * qx * qx + 2.0 * ex * std::abs(qx) + ex * ex,
                  [&] { return witness("equality_at_x_eq_y"); });
  }
  return report;
}

BOperator extract_operator(const NSpace& space, const BSesquilinearForm& form) {
  require_bounded(space, form);
  const Index d = space.dim();
  Matrix columns(d, d);
  for (Index j = 0; j < d; ++j) {
    // y -> conj(T(e_j, y)) = sum_k conj(B_jk) y_k is b-linear in y; its
    // representer is S e_j.
    const BLinearFunctional row{form.matrix.row(j).conjugate().transpose()};
    columns.col(j) = riesz_direct(space, row).representer;
  }
  BOperator out;
  out.matrix = columns * space.projector();

  Rng rng(0);
  const double norm = spectral_norm(form.matrix);
  for (int s = 0; s < kExtractionSamples; ++s) {
    const Vector x = rng.box_vector(d, FieldMode::Complex);
    const Vector y = rng.box_vector(d, FieldMode::Complex);
    const double error = std::abs(evaluate_form(form, x, y) - metric_pairing(space, out.matrix * x, y));
    if (error > kExtractionTolerance * norm * x.norm() * y.norm()) {
      throw Error(ErrorKind::NumericalBreakdown, "extracted operator does not reproduce the form");
    }
  }
  out.bnorm = operator_bnorm(space, out.matrix);
  return out;
}

double operator_bnorm(const NSpace& space, const Matrix& op) {
  require_square(space, op, "operator_bnorm");
  const Matrix& p = space.projector();
  const Matrix complement = Matrix::Identity(space.dim(), space.dim()) - p;
  const double leak = spectral_norm(p * op * complement);
  if (leak > (space.tol().abs_tol + space.tol().rel_tol) * spectral_norm(op)) {
    throw Error(ErrorKind::UnboundedOperator, "operator maps the anchor span outside the kernel");
  }
  return spectral_norm(p * op * p);
}

PropertyReport check_symmetry_iff_real(const NSpace& space, const BSesquilinearForm& form,
                                       std::uint64_t seed, int trials) {
  require_square(space, form.matrix, "check_symmetry_iff_real");
  PropertyReport report;
  report.suite = "symmetry_iff_real";
  report.seed = seed;
  report.trials = trials;
  const TolerancePolicy& tol = space.tol();
  const bool symmetric = is_symmetric(form, tol);
  const double norm = spectral_norm(form.matrix);
  double worst_imag = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(seed, static_cast<std::uint64_t>(trial));
    const Vector x = rng.box_vector(space.dim(), FieldMode::Complex);
    const Scalar q = quadratic_form(form, x);
    const double scale = norm * x.squaredNorm();
    if (scale > 0.0) worst_imag = std::max(worst_imag, std::abs(q.imag()) / scale);
    if (symmetric) {
      report.record(std::abs(q.imag()), tol.allowance(scale), [&] {
        return nlohmann::json{{"check", "symmetric_implies_real"}, {"x", to_json(x)},
                              {"T'(x)", to_json(q)}};
      });
    }
  }
  // T' real on every sample (relative to the form's scale) forces B = B^H.
  if (worst_imag <= tol.abs_tol + tol.rel_tol) {
    const double asym = max_entry(form.matrix - form.matrix.adjoint());
    report.record(asym, tol.allowance(max_entry(form.matrix)), [&] {
      return nlohmann::json{{"check", "real_implies_symmetric"}, {"form", to_json(form.matrix)}};
    });
  }
  return report;
}

SampledSup sampled_form_norm(const NSpace& space, const BSesquilinearForm& form,
                             std::uint64_t seed, int samples) {
  require_square(space, form.matrix, "sampled_form_norm");
  SampledSup best;
  const Matrix basis = quotient_basis(space);
  const Index rank = basis.cols();
  if (rank == 0 || samples <= 0) return best;
  // Coordinates on range(P): T(basis u, basis v) = v^H C u.
  const Matrix c = basis.adjoint() * form.matrix.transpose() * basis;

  const auto sample = [&](const Vector& u, const Vector& v) {
    const Vector x = basis * u;
    const Vector y = basis * v;
    const double denom = n_norm(space, x) * n_norm(space, y);
    ++best.evaluations;
    if (!(denom > 0.0)) return -1.0;
    const double value = std::abs(evaluate_form(form, x, y)) / denom;
    if (std::isfinite(value) && value > best.value) {
      best.value = value;
      best.argmax = {x, y};
    }
    return value;
  };

  // Alternating maximization over one slot at a time (power iteration on
  // C^H C): never decreases |v^H C u|, and a singular-value problem has no
  // spurious local maxima, so a few random starts suffice.
  Rng rng(seed);
  for (int start = 0; start < kFormStarts && best.evaluations < samples; ++start) {
    const int stop = best.evaluations + (samples - best.evaluations) / (kFormStarts - start);
    Vector u = rng.gaussian_vector(rank, FieldMode::Complex);
    double previous = -1.0;
    while (best.evaluations < stop && u.norm() > 0.0) {
      u.normalize();
      Vector v = c * u;
      if (v.norm() == 0.0) v = rng.gaussian_vector(rank, FieldMode::Complex);
      v.normalize();
      const double value = sample(u, v);
      if (value <= previous * (1.0 + kAscentStall)) break;
      previous = value;
      u = c.adjoint() * v;
    }
  }
  return best;
}

SampledSup sampled_quad_norm(const NSpace& space, const BSesquilinearForm& form, FieldMode field,
                             std::uint64_t seed, int samples) {
  require_square(space, form.matrix, "sampled_quad_norm");
  SampledSup best;
  const Matrix basis = quotient_basis(space, field);
  const Index rank = basis.cols();
  if (rank == 0 || samples <= 0) return best;
  // Coordinates w on range(P): T'(basis w) = w^H C w.
  const Matrix c = basis.adjoint() * form.matrix.transpose() * basis;

  // Each sample is scored through the definition, |T'(x)| / ||x, b||^2.
  const auto sample = [&](const Vector& w) {
    const Vector x = basis * w;
    const double denom = std::pow(n_norm(space, x), 2);
    ++best.evaluations;
    if (!(denom > 0.0)) return -1.0;
    const double value = std::abs(quadratic_form(form, x)) / denom;
    if (std::isfinite(value) && value > best.value) {
      best.value = value;
      best.argmax = {x};
    }
    return value;
  };

  // Top eigenvector of the Hermitian part of phase * C; in real mode of its
  // real part, which carries the whole quadratic form on real vectors.
  const auto top_vector = [&](Scalar phase) -> Vector {
    const Matrix h = 0.5 * (phase * c + std::conj(phase) * c.adjoint());
    if (field == FieldMode::Real) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.real());
      return solver.eigenvectors().col(rank - 1).cast<Scalar>();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    return solver.eigenvectors().col(rank - 1);
  };

  // Starts are spread over the phase circle (grid rotated by a seeded
  // offset) so every peak of the support function gets one. Each then alternates: freeze the phase of w^H C w and
  // jump to the top eigenvector for that phase, which cannot decrease
  // |w^H C w|. Unused budget rolls over to later starts.
  const double offset = Rng(seed).uniform01();
  for (int start = 0; start < kQuadraticStarts && best.evaluations < samples; ++start) {
    const int stop = best.evaluations + (samples - best.evaluations) / (kQuadraticStarts - start);
    Vector w = top_vector(std::polar(1.0, 2.0 * M_PI * (start + offset) / kQuadraticStarts));
    double previous = -1.0;
    while (best.evaluations < stop) {
      const double value = sample(w);
      if (value <= previous * (1.0 + kAscentStall)) break;
      previous = value;
      const Scalar z = w.dot(c * w);
      w = top_vector(std::abs(z) > 0.0 ? std::conj(z) / std::abs(z) : Scalar(1.0));
    }
  }
  return best;
}

}  // namespace nhilbert
