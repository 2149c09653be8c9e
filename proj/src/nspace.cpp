// SPDX-License-Identifier: Apache-2.0

#include "nhilbert/nspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "nhilbert/codec.hpp"
#include "nhilbert/errors.hpp"
#include "nhilbert/random.hpp"

namespace nhilbert {

NSpace::NSpace(Index dim, int order, std::vector<Vector> anchor_vectors, TolerancePolicy tol)
    : dim_(dim), tol_(tol) {
  if (order < 2 || dim < order) {
    throw Error(ErrorKind::DimensionMismatch, "need dim >= order >= 2, got dim=" +
                                                  std::to_string(dim) +
                                                  " order=" + std::to_string(order));
  }
  if (anchor_vectors.size() != static_cast<std::size_t>(order - 1)) {
    throw Error(ErrorKind::DimensionMismatch, "order " + std::to_string(order) + " needs " +
                                                  std::to_string(order - 1) +
                                                  " anchor vectors, got " +
                                                  std::to_string(anchor_vectors.size()));
  }
  require_length(anchor_vectors, dim, "anchor");

  const Matrix stacked = stack_columns(anchor_vectors, dim);
  if (numerical_rank(stacked, tol_) < order - 1) {
    throw Error(ErrorKind::DegenerateAnchor, "anchor vectors are linearly dependent");
  }

  anchor_.order_ = order;
  anchor_.gram_det_ = det(gram_matrix(anchor_vectors)).real();
  anchor_.projector_ = orthogonal_projector(anchor_vectors, dim, tol_);
  anchor_.vectors_ = std::move(anchor_vectors);
  if (!(anchor_.gram_det_ > 0.0)) {
    throw Error(ErrorKind::DegenerateAnchor, "anchor Gram determinant is not positive");
  }
  if (numerical_rank(anchor_.projector_, tol_) != dim - (order - 1)) {
    throw Error(ErrorKind::DegenerateAnchor, "projector rank does not match dim - (order - 1)");
  }
  metric_ = anchor_.gram_det_ * anchor_.projector_;
}

Scalar n_inner_general(const Vector& x, const Vector& y, std::span<const Vector> trailing) {
  const Index dim = x.size();
  require_length(x, dim, "n_inner x");
  require_length(y, dim, "n_inner y");
  require_length(trailing, dim, "n_inner trailing");
  const Index n = static_cast<Index>(trailing.size()) + 1;
  Matrix m(n, n);
  m(0, 0) = inner(x, y);
  for (Index j = 1; j < n; ++j) m(0, j) = inner(x, trailing[static_cast<std::size_t>(j - 1)]);
  for (Index i = 1; i < n; ++i) {
    const Vector& ti = trailing[static_cast<std::size_t>(i - 1)];
    m(i, 0) = inner(ti, y);
    for (Index j = 1; j < n; ++j) m(i, j) = inner(ti, trailing[static_cast<std::size_t>(j - 1)]);
  }
  return det(m);
}

double n_norm_general(std::span<const Vector> tuple) {
  if (tuple.empty()) return 0.0;
  const double value = det(gram_matrix(tuple)).real();
  return std::sqrt(std::max(value, 0.0));
}

Scalar n_inner(const NSpace& space, const Vector& x, const Vector& y) {
  require_length(x, space.dim(), "n_inner x");
  require_length(y, space.dim(), "n_inner y");
  return n_inner_general(x, y, space.anchor().vectors());
}

Scalar metric_pairing(const NSpace& space, const Vector& x, const Vector& y) {
  require_length(x, space.dim(), "metric_pairing x");
  require_length(y, space.dim(), "metric_pairing y");
  return y.dot(space.metric() * x);
}

double n_norm(const NSpace& space, const Vector& x) {
  const double self = n_inner(space, x, x).real();
  if (self >= 0.0) return std::sqrt(self);
  const double scale = space.gram_det() * x.squaredNorm();
  if (space.tol().within(-self, scale)) return 0.0;
  throw Error(ErrorKind::NumericalBreakdown,
              "negative self-pairing " + std::to_string(self) + " at scale " +
                  std::to_string(scale));
}

Matrix quotient_basis(const NSpace& space, FieldMode field) {
  if (field == FieldMode::Complex) return range_basis(space.projector(), space.tol());
  for (const auto& b : space.anchor().vectors()) {
    if (!is_real(b, space.tol())) {
      throw Error(ErrorKind::FieldModeMismatch, "real-mode basis needs real anchor vectors");
    }
  }
  const Matrix real_projector = space.projector().real().cast<Scalar>();
  return range_basis(real_projector, space.tol()).real().cast<Scalar>();
}

bool is_b_orthogonal(const NSpace& space, const Vector& x, const Vector& y) {
  const double pairing = std::abs(n_inner(space, x, y));
  const double scale = n_norm(space, x) * n_norm(space, y);
  if (scale == 0.0) return true;
  const double raw = space.gram_det() * x.norm() * y.norm();
  return pairing <= space.tol().rel_tol * scale + space.tol().abs_tol * raw;
}

std::vector<Vector> b_orthogonal_complement(const NSpace& space, std::span<const Vector> subset) {
  const Index dim = space.dim();
  require_length(subset, dim, "b_orthogonal_complement");
  Matrix constraints(static_cast<Index>(subset.size()), dim);
  double reference = 0.0;
  for (std::size_t k = 0; k < subset.size(); ++k) {
    // Row k maps x to <x, s_k | b> = s_k^H G x.
    constraints.row(static_cast<Index>(k)) = subset[k].adjoint() * space.metric();
    reference = std::max(reference, subset[k].norm());
  }
  reference *= space.gram_det();
  const Matrix basis = null_space(constraints, space.tol(), reference);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(basis.cols()));
  for (Index j = 0; j < basis.cols(); ++j) out.emplace_back(basis.col(j));
  return out;
}

BDecomposition b_decompose(const NSpace& space, const Vector& x, std::span<const Vector> subspace) {
  const Index dim = space.dim();
  require_length(x, dim, "b_decompose x");
  require_length(subspace, dim, "b_decompose W");
  const Matrix& p = space.projector();
  // Inside range(P) the anchored pairing is g times the base inner product,
  // so the b-orthogonal split is the ordinary one against span(P W).
  double reference = 0.0;
  for (const auto& w : subspace) reference = std::max(reference, w.norm());
  const Matrix projected_w = p * stack_columns(subspace, dim);
  const Matrix q = range_basis(projected_w, space.tol(), reference);
  const Vector px = p * x;
  BDecomposition out;
  out.resid = px - q * (q.adjoint() * px);
  out.resid -= q * (q.adjoint() * out.resid);  // second pass keeps it orthogonal relative to its own size
  // Below the rank cutoff the residual is round-off with no direction.
  if (out.resid.norm() <= space.tol().abs_tol * px.norm()) out.resid.setZero();
  out.proj = x - out.resid;
  return out;
}

namespace {

struct AxiomTrial {
  Rng& rng;
  const TolerancePolicy& tol;
  PropertyReport& report;
  Index dim;
  int order;
  std::vector<Vector> trailing;
  Vector x, y, z;
  Scalar alpha;

  nlohmann::json witness(const char* check) const {
    return {{"check", check},       {"dim", dim},          {"order", order},
            {"x", to_json(x)},      {"y", to_json(y)},     {"z", to_json(z)},
            {"alpha", to_json(alpha)}, {"trailing", to_json(std::span<const Vector>(trailing))}};
  }

  void check(const char* name, double error, double allowance) {
    report.record(error, allowance, [&] { return witness(name); });
  }

  Scalar ip(const Vector& a, const Vector& b) const { return n_inner_general(a, b, trailing); }

  double nnorm(const Vector& a) const {
    std::vector<Vector> tuple{a};
    tuple.insert(tuple.end(), trailing.begin(), trailing.end());
    return n_norm_general(tuple);
  }

  void run() {
    double trailing_scale = 1.0;  // prod ||t_i||^2 bounds det Gram(t) (Hadamard)
    for (const auto& t : trailing) trailing_scale *= t.squaredNorm();
    const double root_scale = std::sqrt(trailing_scale);
    const double nx = x.norm(), ny = y.norm(), nz = z.norm(), na = std::abs(alpha);

    // n-inner product axioms.
    const Scalar xz = ip(x, z), yz = ip(y, z), xy = ip(x, y), yx = ip(y, x);
    check("additivity", std::abs(ip(x + y, z) - xz - yz), tol.allowance((nx + ny) * nz * trailing_scale));
    check("homogeneity", std::abs(ip(alpha * x, y) - alpha * xy), tol.allowance(na * nx * ny * trailing_scale));
    check("conjugate_symmetry", std::abs(xy - std::conj(yx)), tol.allowance(nx * ny * trailing_scale));

    std::vector<Vector> permuted = trailing;
    for (std::size_t i = permuted.size(); i > 1; --i) {
      std::swap(permuted[i - 1], permuted[rng.next() % i]);
    }
    check("trailing_permutation", std::abs(n_inner_general(x, y, permuted) - xy),
          tol.allowance(nx * ny * trailing_scale));

    const Scalar xx = ip(x, x);
    check("self_pairing_nonnegative", std::max(0.0, -xx.real()), tol.allowance(nx * nx * trailing_scale));
    check("self_pairing_real", std::abs(xx.imag()), tol.allowance(nx * nx * trailing_scale));

    // n-norm axioms.
    const double norm_x = nnorm(x), norm_y = nnorm(y);
    check("norm_homogeneity", std::abs(nnorm(alpha * x) - na * norm_x), tol.allowance(na * nx * root_scale));
    check("norm_sign_flip", std::abs(nnorm(-x) - norm_x), tol.allowance(nx * root_scale));
    check("triangle", std::max(0.0, nnorm(x + y) - norm_x - norm_y), tol.allowance((nx + ny) * root_scale));

    std::vector<Vector> tuple{x};
    tuple.insert(tuple.end(), trailing.begin(), trailing.end());
    std::vector<Vector> shuffled = tuple;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
      std::swap(shuffled[i - 1], shuffled[rng.next() % i]);
    }
    check("norm_permutation", std::abs(n_norm_general(shuffled) - norm_x), tol.allowance(nx * root_scale));

    // Zero on dependent tuples: an exact repeat must give exactly 0, a random
    // combination must vanish within tolerance.
    const std::size_t pick = rng.next() % trailing.size();
    check("dependent_repeat_exact_zero", nnorm(trailing[pick]), 0.0);
    Vector combo = Vector::Zero(dim);
    for (const auto& t : trailing) combo += rng.box_scalar(FieldMode::Complex) * t;
    // Compared squared: the square root is not Lipschitz at 0, so the Gram
    // determinant is the quantity with linear round-off.
    const double combo_norm = nnorm(combo);
    check("dependent_combination_zero", combo_norm * combo_norm,
          tol.allowance(combo.squaredNorm() * trailing_scale));

    // Converse through the rank surrogate: a numerically vanishing n-norm
    // must come with a numerically rank-deficient tuple.
    for (const Vector* head : {&x, &combo}) {
      std::vector<Vector> t{*head};
      t.insert(t.end(), trailing.begin(), trailing.end());
      const double scale = head->squaredNorm() * trailing_scale;
      if (scale == 0.0) continue;
      const double normalized = std::pow(nnorm(*head), 2) / scale;
      if (normalized <= tol.rel_tol) {
        const Eigen::VectorXd sigma = singular_values(stack_columns(t, dim));
        const double ratio = sigma(sigma.size() - 1) / sigma(0);
        const double cut = std::pow(tol.rel_tol, 1.0 / (2.0 * order));
        report.record(ratio, cut, [&] { return witness("zero_implies_rank_deficient"); });
      }
    }

    // Schwarz and parallelogram for the anchored norm.
    const double schwarz_rhs = norm_x * norm_y;
    check("schwarz", std::max(0.0, std::abs(xy) - schwarz_rhs),
          1e-10 * schwarz_rhs + 1e-14 * nx * ny * trailing_scale);

    const NSpace space(dim, order, trailing, tol);
    const auto sq = [&](const Vector& v) { return std::pow(n_norm(space, v), 2); };
    const double lhs = sq(x + y) + sq(x - y);
    const double rhs = 2.0 * (sq(x) + sq(y));
    check("parallelogram", std::abs(lhs - rhs), tol.allowance(std::max(lhs, rhs)));
  }
};

}  // namespace

PropertyReport check_axioms(std::uint64_t seed, int trials, std::span<const int> dims,
                            std::span<const int> orders, const TolerancePolicy& tol) {
  PropertyReport report;
  report.suite = "axioms";
  report.seed = seed;
  report.trials = trials;

  std::vector<std::pair<int, int>> shapes;
  for (int d : dims) {
    for (int n : orders) {
      if (n >= 2 && d >= n) shapes.emplace_back(d, n);
    }
  }
  if (shapes.empty()) {
    report.flag("empty_parameter_space");
    return report;
  }

  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(seed, static_cast<std::uint64_t>(trial));
    const auto [d, n] = shapes[rng.next() % shapes.size()];
    std::vector<Vector> trailing;
    for (int attempt = 0; attempt < 16; ++attempt) {
      trailing.clear();
      for (int i = 0; i < n - 1; ++i) trailing.push_back(rng.box_vector(d, FieldMode::Complex));
      if (numerical_rank(stack_columns(trailing, d), tol) == n - 1) break;
    }
    AxiomTrial t{rng,
                 tol,
                 report,
                 d,
                 n,
                 std::move(trailing),
                 rng.box_vector(d, FieldMode::Complex),
                 rng.box_vector(d, FieldMode::Complex),
                 rng.box_vector(d, FieldMode::Complex),
                 rng.box_scalar(FieldMode::Complex)};
    t.run();
  }
  return report;
}

}  // namespace nhilbert
