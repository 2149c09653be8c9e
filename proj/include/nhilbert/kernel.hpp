// SPDX-License-Identifier: Apache-2.0

#ifndef NHILBERT_KERNEL_HPP_
#define NHILBERT_KERNEL_HPP_

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nhilbert/tolerance.hpp"

namespace nhilbert {

// Scalars are always complex; a real quantity is one whose imaginary part is
// within abs_tol of zero.
using Scalar = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

enum class FieldMode { Real, Complex };

// Base inner product <u, v> = sum_t u_t * conj(v_t): linear in u,
// conjugate-linear in v.
Scalar inner(const Vector& u, const Vector& v);

// Throws NonFinite if any entry is NaN or infinite.
void require_finite(const Vector& v, const char* what);
void require_finite(const Matrix& m, const char* what);

// Throws DimensionMismatch unless every vector has length `dim`.
void require_length(std::span<const Vector> vs, Index dim, const char* what);
void require_length(const Vector& v, Index dim, const char* what);

bool is_real(const Vector& v, const TolerancePolicy& tol = {});
bool is_real(const Matrix& m, const TolerancePolicy& tol = {});

// Columns of the result are the given vectors.
Matrix stack_columns(std::span<const Vector> vs, Index dim);

// Entry (i, j) = <vs[i], vs[j]>.
Matrix gram_matrix(std::span<const Vector> vs);

// LU with partial pivoting. A zero pivot column short-circuits to exactly 0.
Scalar det(const Matrix& m);

// Projector onto the orthogonal complement of span(vs) in K^dim. Rank is
// decided by singular values above abs_tol * (largest singular value).
Matrix orthogonal_projector(std::span<const Vector> vs, Index dim,
                            const TolerancePolicy& tol = {});

// Largest singular value.
double spectral_norm(const Matrix& m);

// Singular values in decreasing order.
Eigen::VectorXd singular_values(const Matrix& m);

// Number of singular values above abs_tol * max(sigma_max, reference_scale).
Index numerical_rank(const Matrix& m, const TolerancePolicy& tol = {},
                     double reference_scale = 0.0);

struct LeastSquaresResult {
  Vector solution;
  double residual = 0.0;  // ||m * solution - rhs||
};

// Minimum-norm least-squares solution through a truncated SVD; the cutoff
// matches numerical_rank().
LeastSquaresResult least_squares_solve(const Matrix& m, const Vector& rhs,
                                       const TolerancePolicy& tol = {});

// Orthonormal basis (as columns) of range(m) and of null(m). The rank cutoff
// uses the larger of sigma_max and reference_scale, so an operator that is
// numerically zero relative to its context has full null space.
Matrix range_basis(const Matrix& m, const TolerancePolicy& tol = {},
                   double reference_scale = 0.0);
Matrix null_space(const Matrix& m, const TolerancePolicy& tol = {},
                  double reference_scale = 0.0);

// Eigenvalues of the Hermitian part (m + m^H) / 2, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);

// Bracket on the numerical radius w(m) = sup_{|x|=1} |x^H m x|.
struct NumericalRadius {
  double lower = 0.0;  // attained by `maximizer`
  double upper = 0.0;
  Vector maximizer;
};

// Maximizes the support function t -> lambda_max(Herm(e^{it} m)) over the
// angle: a uniform grid gives the polygon upper bound, golden-section search
// refines the best local maxima. Hermitian input takes the exact path.
NumericalRadius numerical_radius(const Matrix& m, const TolerancePolicy& tol = {});

}  // namespace nhilbert

#endif  // NHILBERT_KERNEL_HPP_
