// SPDX-License-Identifier: Apache-2.0
//
// Test helpers and reference implementations that share no code with the
// library: cofactor determinants, Gram-Schmidt projectors and brute-force
// evaluation of pairings.

#ifndef NHILBERT_TESTS_SUPPORT_HPP_
#define NHILBERT_TESTS_SUPPORT_HPP_

#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include "nhilbert/kernel.hpp"

namespace testing {

using nhilbert::Index;
using nhilbert::Matrix;
using nhilbert::Scalar;
using nhilbert::Vector;

inline constexpr Scalar I{0.0, 1.0};

inline Vector vec(std::initializer_list<Scalar> entries) {
  Vector v(static_cast<Index>(entries.size()));
  Index i = 0;
  for (const Scalar s : entries) v(i++) = s;
  return v;
}

inline Matrix mat(std::initializer_list<std::initializer_list<Scalar>> rows) {
  const auto r = static_cast<Index>(rows.size());
  const auto c = static_cast<Index>(rows.begin()->size());
  Matrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (const Scalar s : row) m(i, j++) = s;
    ++i;
  }
  return m;
}

inline Vector unit(Index i, Index dim) {
  Vector v = Vector::Zero(dim);
  v(i) = 1.0;
  return v;
}

inline Matrix diag(std::initializer_list<Scalar> entries) {
  return vec(entries).asDiagonal();
}

// sum_t u_t conj(v_t), written out.
inline Scalar dot(const Vector& u, const Vector& v) {
  Scalar s = 0.0;
  for (Index t = 0; t < u.size(); ++t) s += u(t) * std::conj(v(t));
  return s;
}

// Laplace expansion along the first row.
inline Scalar cofactor_det(const Matrix& m) {
  const Index n = m.rows();
  if (n == 0) return 1.0;
  if (n == 1) return m(0, 0);
  Scalar total = 0.0;
  for (Index j = 0; j < n; ++j) {
    Matrix minor(n - 1, n - 1);
    for (Index r = 1; r < n; ++r) {
      Index cc = 0;
      for (Index c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = m(r, c);
      }
    }
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    total += sign * m(0, j) * cofactor_det(minor);
  }
  return total;
}

// Modified Gram-Schmidt; drops vectors whose remainder is below `cut`.
inline std::vector<Vector> orthonormalize(const std::vector<Vector>& vs, double cut = 1e-10) {
  std::vector<Vector> basis;
  for (Vector v : vs) {
    for (const Vector& q : basis) v -= dot(v, q) * q;
    const double len = std::sqrt(std::real(dot(v, v)));
    if (len > cut) basis.push_back(v / len);
  }
  return basis;
}

// I - sum q q^H over an orthonormal basis of span(vs).
inline Matrix complement_projector(const std::vector<Vector>& vs, Index dim) {
  Matrix p = Matrix::Identity(dim, dim);
  for (const Vector& q : orthonormalize(vs)) p -= q * q.adjoint();
  return p;
}

// Determinant formula for <x, y | t_2, ..., t_n> with an explicit matrix.
inline Scalar reference_n_inner(const Vector& x, const Vector& y, const std::vector<Vector>& trailing) {
  const auto n = static_cast<Index>(trailing.size()) + 1;
  Matrix m(n, n);
  m(0, 0) = dot(x, y);
  for (Index j = 1; j < n; ++j) m(0, j) = dot(x, trailing[j - 1]);
  for (Index i = 1; i < n; ++i) {
    m(i, 0) = dot(trailing[i - 1], y);
    for (Index j = 1; j < n; ++j) m(i, j) = dot(trailing[i - 1], trailing[j - 1]);
  }
  return cofactor_det(m);
}

// sum_ij x_i B_ij conj(y_j), written out.
inline Scalar reference_form(const Matrix& b, const Vector& x, const Vector& y) {
  Scalar s = 0.0;
  for (Index i = 0; i < b.rows(); ++i)
    for (Index j = 0; j < b.cols(); ++j) s += x(i) * b(i, j) * std::conj(y(j));
  return s;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing

#endif  // NHILBERT_TESTS_SUPPORT_HPP_
