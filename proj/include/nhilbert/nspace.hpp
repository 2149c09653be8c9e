// SPDX-License-Identifier: Apache-2.0

#ifndef NHILBERT_NSPACE_HPP_
#define NHILBERT_NSPACE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "nhilbert/kernel.hpp"
#include "nhilbert/report.hpp"
#include "nhilbert/tolerance.hpp"

namespace nhilbert {

// The fixed tuple (b_2, ..., b_n) together with its Gram determinant g and
// the projector P onto the orthogonal complement of its span.
class Anchor {
 public:
  int order() const { return order_; }
  const std::vector<Vector>& vectors() const { return vectors_; }
  double gram_det() const { return gram_det_; }
  const Matrix& projector() const { return projector_; }

 private:
  friend class NSpace;
  Anchor() = default;

  int order_ = 2;
  std::vector<Vector> vectors_;
  double gram_det_ = 0.0;
  Matrix projector_;
};

// K^d with the Gram-determinant n-inner product anchored at (b_2, ..., b_n):
//
//   <x, y | b_2, ..., b_n> = det [ <x,y>   <x,b_2>   ... <x,b_n>   ]
//                                [ <b_2,y> <b_2,b_2> ... <b_2,b_n> ]
//                                [  ...                            ]
//                              = g * <Px, Py>,
//
// the second line being the Schur-complement form. The metric G = g * P
// realizes the pairing as y^H G x. Immutable after construction.
class NSpace {
 public:
  // Throws DimensionMismatch unless dim >= order >= 2 and exactly order - 1
  // anchor vectors of length dim are given; DegenerateAnchor if they are
  // numerically dependent.
  NSpace(Index dim, int order, std::vector<Vector> anchor_vectors, TolerancePolicy tol = {});

  Index dim() const { return dim_; }
  int order() const { return anchor_.order(); }
  const Anchor& anchor() const { return anchor_; }
  const Matrix& metric() const { return metric_; }
  const TolerancePolicy& tol() const { return tol_; }

  double gram_det() const { return anchor_.gram_det(); }
  const Matrix& projector() const { return anchor_.projector(); }

 private:
  Index dim_;
  Anchor anchor_;
  Matrix metric_;
  TolerancePolicy tol_;
};

// Determinant formula with an arbitrary trailing tuple. Dependent tuples are
// legal and give 0 where the axioms require it.
Scalar n_inner_general(const Vector& x, const Vector& y, std::span<const Vector> trailing);

// ||x_1, ..., x_n|| = sqrt(det Gram(x_1, ..., x_n)) with round-off below
// zero clamped.
double n_norm_general(std::span<const Vector> tuple);

// Anchored n-inner product through the determinant formula.
Scalar n_inner(const NSpace& space, const Vector& x, const Vector& y);

// Same value through the metric: y^H G x = g * <Px, Py>.
Scalar metric_pairing(const NSpace& space, const Vector& x, const Vector& y);

// ||x, b_2, ..., b_n||. Throws NumericalBreakdown when the self-pairing is
// negative beyond tolerance.
double n_norm(const NSpace& space, const Vector& x);

// Orthonormal basis (columns) of range(P), the quotient on which the anchored
// seminorm is a norm. Real mode returns a real basis and requires real anchors.
Matrix quotient_basis(const NSpace& space, FieldMode field = FieldMode::Complex);

bool is_b_orthogonal(const NSpace& space, const Vector& x, const Vector& y);

// Orthonormal (base inner product) basis of {x : <x, s | b> = 0 for all s}.
// Always contains span(anchor).
std::vector<Vector> b_orthogonal_complement(const NSpace& space, std::span<const Vector> subset);

struct BDecomposition {
  Vector proj;   // in span(W) + span(anchor)
  Vector resid;  // in range(P), b-orthogonal to W
};

BDecomposition b_decompose(const NSpace& space, const Vector& x, std::span<const Vector> subspace);

// Seeded randomized check of the n-norm and n-inner-product axioms, Schwarz
// and the parallelogram identity. Each trial draws (d, n) from dims x orders
// with n <= d.
PropertyReport check_axioms(std::uint64_t seed, int trials, std::span<const int> dims,
                            std::span<const int> orders, const TolerancePolicy& tol);

}  // namespace nhilbert

#endif  // NHILBERT_NSPACE_HPP_
