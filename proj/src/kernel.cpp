// SPDX-License-Identifier: Apache-2.0

#include "nhilbert/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "nhilbert/errors.hpp"

namespace nhilbert {

namespace {

using Svd = Eigen::JacobiSVD<Matrix>;

double cutoff(const Eigen::VectorXd& sigma, const TolerancePolicy& tol, double reference_scale) {
  const double top = sigma.size() > 0 ? sigma(0) : 0.0;
  return tol.abs_tol * std::max(top, reference_scale);
}

Index count_above(const Eigen::VectorXd& sigma, double cut) {
  Index r = 0;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cut) ++r;
  }
  return r;
}

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

// Largest eigenpair of the Hermitian part of e^{it} m.
std::pair<double, Vector> support(const Matrix& m, double t) {
  const Scalar phase = std::polar(1.0, t);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(phase * m));
  const Index last = m.rows() - 1;
  return {es.eigenvalues()(last), es.eigenvectors().col(last)};
}

}  // namespace

Scalar inner(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) {
    throw Error(ErrorKind::DimensionMismatch, "inner: lengths " + std::to_string(u.size()) +
                                                  " and " + std::to_string(v.size()));
  }
  // Eigen's dot conjugates its first argument.
  return v.dot(u);
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw Error(ErrorKind::NonFinite, what);
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorKind::NonFinite, what);
}

void require_length(std::span<const Vector> vs, Index dim, const char* what) {
  for (const auto& v : vs) require_length(v, dim, what);
}

void require_length(const Vector& v, Index dim, const char* what) {
  if (v.size() != dim) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": expected length " +
                                                  std::to_string(dim) + ", got " +
                                                  std::to_string(v.size()));
  }
  require_finite(v, what);
}

bool is_real(const Vector& v, const TolerancePolicy& tol) {
  return v.size() == 0 || v.imag().cwiseAbs().maxCoeff() <= tol.abs_tol;
}

bool is_real(const Matrix& m, const TolerancePolicy& tol) {
  return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() <= tol.abs_tol;
}

Matrix stack_columns(std::span<const Vector> vs, Index dim) {
  Matrix out(dim, static_cast<Index>(vs.size()));
  for (Index j = 0; j < out.cols(); ++j) {
    require_length(vs[static_cast<std::size_t>(j)], dim, "stack_columns");
    out.col(j) = vs[static_cast<std::size_t>(j)];
  }
  return out;
}

Matrix gram_matrix(std::span<const Vector> vs) {
  if (vs.empty()) throw Error(ErrorKind::DimensionMismatch, "gram_matrix: empty list");
  const Index dim = vs.front().size();
  const Index k = static_cast<Index>(vs.size());
  require_length(vs, dim, "gram_matrix");
  Matrix g(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      g(i, j) = inner(vs[static_cast<std::size_t>(i)], vs[static_cast<std::size_t>(j)]);
    }
  }
  return g;
}

Scalar det(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::NotSquare, "det: " + std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()));
  }
  require_finite(m, "det");
  Matrix a = m;
  const Index n = a.rows();
  Scalar result(1.0, 0.0);
  for (Index k = 0; k < n; ++k) {
    Index pivot = k;
    double best = std::abs(a(k, k));
    for (Index i = k + 1; i < n; ++i) {
      const double cand = std::abs(a(i, k));
      if (cand > best) {
        best = cand;
        pivot = i;
      }
    }
    if (best == 0.0) return Scalar(0.0, 0.0);
    if (pivot != k) {
      a.row(k).swap(a.row(pivot));
      result = -result;
    }
    result *= a(k, k);
    for (Index i = k + 1; i < n; ++i) {
      const Scalar factor = a(i, k) / a(k, k);
      if (factor == Scalar(0.0, 0.0)) continue;
      a.row(i).tail(n - k) -= factor * a.row(k).tail(n - k);
    }
  }
  return result;
}

Eigen::VectorXd singular_values(const Matrix& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  require_finite(m, "singular_values");
  return Svd(m).singularValues();
}

double spectral_norm(const Matrix& m) {
  const Eigen::VectorXd sigma = singular_values(m);
  return sigma.size() > 0 ? sigma(0) : 0.0;
}

Index numerical_rank(const Matrix& m, const TolerancePolicy& tol, double reference_scale) {
  const Eigen::VectorXd sigma = singular_values(m);
  return count_above(sigma, cutoff(sigma, tol, reference_scale));
}

Matrix range_basis(const Matrix& m, const TolerancePolicy& tol, double reference_scale) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  require_finite(m, "range_basis");
  Svd svd(m, Eigen::ComputeThinU);
  const Index r = count_above(svd.singularValues(), cutoff(svd.singularValues(), tol, reference_scale));
  return svd.matrixU().leftCols(r);
}

Matrix null_space(const Matrix& m, const TolerancePolicy& tol, double reference_scale) {
  if (m.rows() == 0) return Matrix::Identity(m.cols(), m.cols());
  require_finite(m, "null_space");
  Svd svd(m, Eigen::ComputeFullV);
  const Index r = count_above(svd.singularValues(), cutoff(svd.singularValues(), tol, reference_scale));
  return svd.matrixV().rightCols(m.cols() - r);
}

Matrix orthogonal_projector(std::span<const Vector> vs, Index dim, const TolerancePolicy& tol) {
  if (vs.size() > static_cast<std::size_t>(dim)) {
    throw Error(ErrorKind::DimensionMismatch, "orthogonal_projector: more vectors than dimension");
  }
  Matrix p = Matrix::Identity(dim, dim);
  if (vs.empty()) return p;
  const Matrix u = range_basis(stack_columns(vs, dim), tol);
  p -= u * u.adjoint();
  // Symmetrize away the last bits of round-off so P is exactly Hermitian.
  return hermitian_part(p);
}

LeastSquaresResult least_squares_solve(const Matrix& m, const Vector& rhs,
                                       const TolerancePolicy& tol) {
  if (m.rows() != rhs.size()) {
    throw Error(ErrorKind::DimensionMismatch, "least_squares_solve: rows " +
                                                  std::to_string(m.rows()) + " vs rhs " +
                                                  std::to_string(rhs.size()));
  }
  require_finite(m, "least_squares_solve");
  require_finite(rhs, "least_squares_solve");
  LeastSquaresResult out;
  out.solution = Vector::Zero(m.cols());
  if (m.size() == 0) {
    out.residual = rhs.norm();
    return out;
  }
  Svd svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const Index r = count_above(sigma, cutoff(sigma, tol, 0.0));
  const Vector coeffs = svd.matrixU().leftCols(r).adjoint() * rhs;
  out.solution = svd.matrixV().leftCols(r) *
                 (coeffs.array() / sigma.head(r).array().cast<Scalar>()).matrix();
  out.residual = (m * out.solution - rhs).norm();
  return out;
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::NotSquare, "hermitian_eigenvalues");
  require_finite(m, "hermitian_eigenvalues");
  if (m.size() == 0) return Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

NumericalRadius numerical_radius(const Matrix& m, const TolerancePolicy& tol) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::NotSquare, "numerical_radius");
  require_finite(m, "numerical_radius");
  NumericalRadius out;
  const Index n = m.rows();
  out.maximizer = Vector::Zero(n);
  if (n == 0) return out;
  const double scale = spectral_norm(m);
  if (scale == 0.0) {
    out.maximizer(0) = 1.0;
    return out;
  }

  const auto attained = [&](const Vector& x) { return std::abs(x.dot(m * x)) / x.squaredNorm(); };

  if ((m - m.adjoint()).norm() <= tol.abs_tol * scale) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
    const Eigen::VectorXd& ev = es.eigenvalues();
    const Index pick = std::abs(ev(0)) > std::abs(ev(n - 1)) ? 0 : n - 1;
    out.maximizer = es.eigenvectors().col(pick);
    out.lower = attained(out.maximizer);
    out.upper = std::max(out.lower, ev.cwiseAbs().maxCoeff());
    return out;
  }

  constexpr int kGrid = 720;
  constexpr int kStarts = 4;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double step = kTwoPi / kGrid;
  std::vector<double> f(kGrid);
  for (int k = 0; k < kGrid; ++k) f[static_cast<std::size_t>(k)] = support(m, k * step).first;

  const double grid_max = *std::max_element(f.begin(), f.end());
  const double polygon_bound = grid_max / std::cos(std::numbers::pi / kGrid);

  std::vector<int> peaks;
  for (int k = 0; k < kGrid; ++k) {
    const double left = f[static_cast<std::size_t>((k + kGrid - 1) % kGrid)];
    const double right = f[static_cast<std::size_t>((k + 1) % kGrid)];
    const double here = f[static_cast<std::size_t>(k)];
    if (here >= left && here >= right) peaks.push_back(k);
  }
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) {
    return f[static_cast<std::size_t>(a)] > f[static_cast<std::size_t>(b)];
  });
  if (peaks.size() > kStarts) peaks.resize(kStarts);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int k : peaks) {
    double a = (k - 1) * step;
    double b = (k + 1) * step;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = support(m, c).first;
    double fd = support(m, d).first;
    while (b - a > 1e-12) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = support(m, c).first;
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = support(m, d).first;
      }
    }
    const Vector x = support(m, 0.5 * (a + b)).second;
    const double value = attained(x);
    if (value > out.lower) {
      out.lower = value;
      out.maximizer = x;
    }
  }
  out.upper = std::max(out.lower, std::min(polygon_bound, scale));
  return out;
}

}  // namespace nhilbert
