// SPDX-License-Identifier: Apache-2.0

#ifndef NHILBERT_SESQUILINEAR_HPP_
#define NHILBERT_SESQUILINEAR_HPP_

#include <cstdint>
#include <functional>

#include "nhilbert/kernel.hpp"
#include "nhilbert/nspace.hpp"
#include "nhilbert/random.hpp"
#include "nhilbert/report.hpp"

namespace nhilbert {

// T(x, y, b_2, ..., b_n) = sum_ij x_i B_ij conj(y_j): linear in x,
// conjugate-linear in y. Equivalently T(x, y) = y^H K x with K = B^T.
struct BSesquilinearForm {
  Matrix matrix;
};

// Canonical representing operator: range inside range(P), kills span(anchor).
struct BOperator {
  Matrix matrix;
  double bnorm = 0.0;
};

// ||T'|| as a bracket. Symmetric forms (and every form in real mode) are
// exact: lower == upper == value.
struct QuadNorm {
  double value = 0.0;  // certified lower bound, attained at a concrete x
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
};

// Multiplicative slack used by the norm-relation and Schwarz checks.
inline constexpr double kNormSlack = 1e-8;

Scalar evaluate_form(const BSesquilinearForm& form, const Vector& x, const Vector& y);
Scalar quadratic_form(const BSesquilinearForm& form, const Vector& x);

// T(x, y) = <x, y | b_2, ..., b_n>.
BSesquilinearForm form_from_inner(const NSpace& space);

// U(x, y) = conj(T(y, x)); the matrix is B^H.
BSesquilinearForm flip_conjugate(const BSesquilinearForm& form);

// T(x, y) = <A x, y | b_2, ..., b_n>.
BSesquilinearForm form_from_operator(const NSpace& space, const Matrix& op);

bool is_symmetric(const BSesquilinearForm& form, const TolerancePolicy& tol = {});
bool is_positive(const NSpace& space, const BSesquilinearForm& form);

// Right-hand side of the polarization identity for the quadratic evaluator
// `quad`. Real mode throws FieldModeMismatch if `quad` returns a value with
// a non-negligible imaginary part.
Scalar polarize(const std::function<Scalar(const Vector&)>& quad, const Vector& x,
                const Vector& y, FieldMode field, const TolerancePolicy& tol = {});

// Bounded iff B is supported on range(P) in both slots.
bool is_bounded_form(const NSpace& space, const BSesquilinearForm& form);

// sup |T(x,y)| / (||x,b|| ||y,b||) = ||P K P|| / g. Throws UnboundedForm.
double sesq_norm(const NSpace& space, const BSesquilinearForm& form);

// sup |T'(x)| / ||x,b||^2 = w(P K P) / g (numerical radius). In real mode
// only real x are admitted, which reduces to the spectral radius of the
// symmetric part. Throws UnboundedForm, FieldModeMismatch.
QuadNorm quad_norm(const NSpace& space, const BSesquilinearForm& form,
                   FieldMode field = FieldMode::Complex);

// ||T'|| <= ||T|| <= 2 ||T'||, with equality for symmetric forms. In real
// mode a violated upper bound is the documented counterexample and is
// recorded as a fixture failure.
PropertyReport check_norm_relations(const NSpace& space, const BSesquilinearForm& form,
                                    FieldMode field = FieldMode::Complex);

// |T(x,y)|^2 <= T'(x) T'(y) on sampled pairs. Throws NotPositive.
PropertyReport check_generalized_schwarz(const NSpace& space, const BSesquilinearForm& form,
                                         std::uint64_t seed, int trials);

// T(x, y) = <S x, y | b> with S obtained column by column from the Riesz
// representer of y -> conj(T(e_j, y)). Throws UnboundedForm.
BOperator extract_operator(const NSpace& space, const BSesquilinearForm& form);

// sup ||S x, b|| / ||x, b|| = ||P S P||. Throws UnboundedOperator if S does
// not send span(anchor) into the seminorm kernel.
double operator_bnorm(const NSpace& space, const Matrix& op);

// Both matrix-level directions of "symmetric iff T' is real-valued".
PropertyReport check_symmetry_iff_real(const NSpace& space, const BSesquilinearForm& form,
                                       std::uint64_t seed, int trials);

// Sampled suprema for the norm definitions (always lower bounds: every value
// is a ratio evaluated at a concrete sample). The quadratic one picks its
// samples by multi-start alternating ascent rather than blind search.
SampledSup sampled_form_norm(const NSpace& space, const BSesquilinearForm& form,
                             std::uint64_t seed, int samples);
SampledSup sampled_quad_norm(const NSpace& space, const BSesquilinearForm& form, FieldMode field,
                             std::uint64_t seed, int samples);

}  // namespace nhilbert

#endif  // NHILBERT_SESQUILINEAR_HPP_
