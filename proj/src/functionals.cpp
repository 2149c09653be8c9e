// SPDX-License-Identifier: Apache-2.0

#include "nhilbert/functionals.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nhilbert/codec.hpp"
#include "nhilbert/errors.hpp"

namespace nhilbert {

namespace {

constexpr int kResidualSamples = 100;

void require_bounded(const NSpace& space, const BLinearFunctional& functional) {
  if (!is_bounded(space, functional)) {
    throw Error(ErrorKind::UnboundedFunctional, "functional does not vanish on the anchor");
  }
}

double sampled_residual(const NSpace& space, const BLinearFunctional& functional, const Vector& z,
                        std::uint64_t seed, int samples) {
  Rng rng(seed);
  const double cnorm = functional.coeffs.norm();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vector x = rng.box_vector(space.dim(), FieldMode::Complex);
    const double error = std::abs(evaluate(functional, x) - n_inner(space, x, z));
    const double scale = cnorm * x.norm();
    if (scale > 0.0) worst = std::max(worst, error / scale);
    else worst = std::max(worst, error);
  }
  return worst;
}

// First coordinate above the tolerance made real positive.
void fix_phase(Vector& v, const TolerancePolicy& tol) {
  const double cut = tol.abs_tol * v.norm();
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > cut) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      return;
    }
  }
}

}  // namespace

Scalar evaluate(const BLinearFunctional& functional, const Vector& x) {
  if (functional.coeffs.size() != x.size()) {
    throw Error(ErrorKind::DimensionMismatch, "evaluate: coefficient length " +
                                                  std::to_string(functional.coeffs.size()) +
                                                  " vs input " + std::to_string(x.size()));
  }
  // No conjugation: sum_i c_i x_i.
  return (functional.coeffs.array() * x.array()).sum();
}

bool is_bounded(const NSpace& space, const BLinearFunctional& functional) {
  require_length(functional.coeffs, space.dim(), "functional");
  const double cnorm = functional.coeffs.norm();
  for (const auto& b : space.anchor().vectors()) {
    // Scale-invariant: a uniformly tiny functional is judged like a unit one.
    const double allowance = (space.tol().abs_tol + space.tol().rel_tol) * cnorm * b.norm();
    if (std::abs(evaluate(functional, b)) > allowance) return false;
  }
  return true;
}

double functional_norm(const NSpace& space, const BLinearFunctional& functional) {
  require_bounded(space, functional);
  // sup |c^T x| / (sqrt(g) ||Px||) over range(P) = ||P conj(c)|| / sqrt(g).
  return (space.projector() * functional.coeffs.conjugate()).norm() / std::sqrt(space.gram_det());
}

RieszSolution riesz_direct(const NSpace& space, const BLinearFunctional& functional) {
  require_bounded(space, functional);
  RieszSolution out;
  // T(x) = c^T x must equal y^H G x at y = z, i.e. g * (Pz)^H = c^T.
  out.representer = space.projector() * functional.coeffs.conjugate() / space.gram_det();
  out.functional_norm = n_norm(space, out.representer);
  out.residual = sampled_residual(space, functional, out.representer, 0, kResidualSamples);
  return out;
}

RieszSolution riesz_constructive(const NSpace& space, const BLinearFunctional& functional) {
  require_bounded(space, functional);
  const TolerancePolicy& tol = space.tol();
  const Index dim = space.dim();
  RieszSolution out;
  out.representer = Vector::Zero(dim);

  const Matrix& p = space.projector();
  // Orthonormal coordinates u_1..u_m of range(P); the anchored pairing there
  // is g times the base inner product.
  const Matrix range = range_basis(p, tol);
  const Eigen::RowVectorXcd restricted = functional.coeffs.transpose() * range;
  const double scale = functional.coeffs.norm();
  if (restricted.norm() <= tol.allowance(scale) || restricted.norm() == 0.0) {
    out.functional_norm = 0.0;
    out.residual = sampled_residual(space, functional, out.representer, 0, kResidualSamples);
    return out;
  }

  // N(T) inside range(P), then its complement there (one-dimensional).
  const Matrix kernel = null_space(Matrix(restricted), tol, scale);
  const Matrix complement = orthogonal_projector(
      std::vector<Vector>(kernel.colwise().begin(), kernel.colwise().end()), range.cols(), tol);
  Index best = 0;
  complement.colwise().norm().maxCoeff(&best);
  Vector z0 = range * complement.col(best);
  z0.normalize();
  fix_phase(z0, tol);

  const double z0_norm = n_norm(space, z0);
  out.representer = std::conj(evaluate(functional, z0)) * z0 / (z0_norm * z0_norm);
  out.witness = z0;
  out.functional_norm = n_norm(space, out.representer);
  out.residual = sampled_residual(space, functional, out.representer, 0, kResidualSamples);
  return out;
}

PropertyReport verify_representation(const NSpace& space, const BLinearFunctional& functional,
                                     const Vector& representer, std::uint64_t seed, int trials) {
  require_length(functional.coeffs, space.dim(), "functional");
  require_length(representer, space.dim(), "representer");
  PropertyReport report;
  report.suite = "verify_representation";
  report.seed = seed;
  report.trials = trials;
  const TolerancePolicy& tol = space.tol();
  const double cnorm = functional.coeffs.norm();
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(seed, static_cast<std::uint64_t>(trial));
    const Vector x = rng.box_vector(space.dim(), FieldMode::Complex);
    const Scalar lhs = evaluate(functional, x);
    const Scalar rhs = n_inner(space, x, representer);
    const double magnitude =
        std::max(cnorm * x.norm(), space.gram_det() * x.norm() * representer.norm());
    report.record(std::abs(lhs - rhs), tol.allowance(magnitude), [&] {
      return nlohmann::json{{"check", "representation"}, {"x", to_json(x)},
                            {"T(x)", to_json(lhs)},       {"<x,z|b>", to_json(rhs)}};
    });
  }
  const Vector off_range = representer - space.projector() * representer;
  if (!tol.within(off_range.norm(), representer.norm())) report.flag("non_canonical");
  return report;
}

SampledSup sampled_functional_norm(const NSpace& space, const BLinearFunctional& functional,
                                   std::uint64_t seed, int samples) {
  require_length(functional.coeffs, space.dim(), "functional");
  const auto ratio = [&](std::span<const Vector> xs) {
    const double denom = n_norm(space, xs[0]);
    if (denom <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::abs(evaluate(functional, xs[0])) / denom;
  };
  return sampled_sup(ratio, 1, quotient_basis(space), FieldMode::Complex, seed, samples);
}

}  // namespace nhilbert
