// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include "doctest.h"
#include "nhilbert/errors.hpp"
#include "nhilbert/kernel.hpp"
#include "nhilbert/random.hpp"
#include "support.hpp"

using namespace nhilbert;
using namespace testing;

TEST_SUITE("kernel") {
  TEST_CASE("gram matrix examples") {
    const std::vector<Vector> orthonormal{vec({1, 0}), vec({0, 1})};
    CHECK(max_abs(gram_matrix(orthonormal) - Matrix::Identity(2, 2)) == 0.0);

    const std::vector<Vector> single{vec({1, 1})};
    CHECK(gram_matrix(single)(0, 0) == Scalar(2.0));

    const std::vector<Vector> pair{vec({1, 0, 0}), vec({1, 1, 0})};
    CHECK(max_abs(gram_matrix(pair) - mat({{1, 1}, {1, 2}})) == 0.0);

    const std::vector<Vector> ragged{vec({1, 0}), vec({1, 0, 0})};
    CHECK_THROWS_AS(gram_matrix(ragged), Error);
  }

  TEST_CASE("gram matrix uses conjugation in the second slot") {
    const std::vector<Vector> vs{vec({I, 0}), vec({1, 0})};
    const Matrix g = gram_matrix(vs);
    CHECK(std::abs(g(0, 1) - I) < 1e-15);   // <i e1, e1> = i
    CHECK(std::abs(g(1, 0) + I) < 1e-15);   // <e1, i e1> = -i
  }

  TEST_CASE("det examples") {
    CHECK(det(Matrix::Identity(3, 3)) == Scalar(1.0));
    CHECK(std::abs(det(diag({2, 3})) - 6.0) < 1e-15);
    CHECK(std::abs(det(mat({{1, 1}, {1, 2}})) - 1.0) < 1e-15);
    CHECK(det(Matrix::Zero(3, 3)) == Scalar(0.0));
    CHECK_THROWS_AS(det(Matrix::Zero(2, 3)), Error);
  }

  TEST_CASE("det agrees with cofactor expansion") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const Index d = rng.uniform_int(1, 6);
      const Matrix m = rng.box_matrix(d, d, FieldMode::Complex);
      const Scalar expected = cofactor_det(m);
      CHECK(std::abs(det(m) - expected) <= 1e-12 * (1.0 + std::abs(expected)));
    }
  }

  TEST_CASE("det is multiplicative") {
    Rng rng(12);
    for (int trial = 0; trial < 500; ++trial) {
      const Index d = rng.uniform_int(1, 6);
      const Matrix a = rng.box_matrix(d, d, FieldMode::Complex);
      const Matrix b = rng.box_matrix(d, d, FieldMode::Complex);
      const Scalar lhs = det(a * b);
      const Scalar rhs = det(a) * det(b);
      // Relative to the product of the factor norms, which bounds both sides.
      const double scale = std::pow(spectral_norm(a) * spectral_norm(b), static_cast<double>(d));
      CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(std::abs(rhs), 1e-3 * scale));
    }
  }

  TEST_CASE("projector examples") {
    const std::vector<Vector> axis{unit(2, 3)};
    CHECK(max_abs(orthogonal_projector(axis, 3) - diag({1, 1, 0})) < 1e-15);

    const std::vector<Vector> none;
    CHECK(max_abs(orthogonal_projector(none, 4) - Matrix::Identity(4, 4)) == 0.0);

    const double r = 1.0 / std::sqrt(2.0);
    const std::vector<Vector> diagonal{vec({r, r})};
    CHECK(max_abs(orthogonal_projector(diagonal, 2) - mat({{0.5, -0.5}, {-0.5, 0.5}})) < 1e-15);

    const std::vector<Vector> wrong{vec({1, 0})};
    CHECK_THROWS_AS(orthogonal_projector(wrong, 3), Error);
  }

  TEST_CASE("projector properties on random spans") {
    Rng rng(13);
    const TolerancePolicy tol;
    for (int trial = 0; trial < 1000; ++trial) {
      const Index d = rng.uniform_int(1, 8);
      const int k = rng.uniform_int(0, static_cast<int>(d));
      std::vector<Vector> vs;
      for (int i = 0; i < k; ++i) vs.push_back(rng.box_vector(d, FieldMode::Complex));
      // Sometimes repeat a vector so the span is rank deficient.
      if (k >= 2 && trial % 5 == 0) vs[1] = vs[0] * Scalar(2.0, -1.0);
      const Matrix p = orthogonal_projector(vs, d);
      CHECK(spectral_norm(p * p - p) <= tol.abs_tol);
      CHECK(spectral_norm(p - p.adjoint()) <= tol.abs_tol);
      for (const auto& v : vs) CHECK((p * v).norm() <= tol.allowance(v.norm()));
      const Matrix expected = complement_projector(vs, d);
      CHECK(max_abs(p - expected) <= 1e-10);
      // rank(P) = d - rank(vs)
      CHECK(std::abs(p.trace().real() - static_cast<double>(d - static_cast<Index>(orthonormalize(vs).size()))) < 1e-9);
    }
  }

  TEST_CASE("spectral norm examples") {
    CHECK(std::abs(spectral_norm(Matrix::Identity(5, 5)) - 1.0) < 1e-14);
    CHECK(std::abs(spectral_norm(diag({1, 2, 0})) - 2.0) < 1e-14);
    CHECK(std::abs(spectral_norm(mat({{0, 1}, {-1, 0}})) - 1.0) < 1e-14);
    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 1) = std::nan("");
    CHECK_THROWS_AS(spectral_norm(bad), Error);
  }

  TEST_CASE("spectral norm is never exceeded by sampled ratios") {
    Rng rng(14);
    const TolerancePolicy tol;
    for (int trial = 0; trial < 50; ++trial) {
      const Index r = rng.uniform_int(1, 7);
      const Index c = rng.uniform_int(1, 7);
      const Matrix m = rng.box_matrix(r, c, FieldMode::Complex);
      const double s = spectral_norm(m);
      // Frobenius bounds: s <= ||m||_F <= sqrt(min(r, c)) s.
      CHECK(s <= m.norm() * (1 + 1e-12));
      CHECK(m.norm() <= std::sqrt(static_cast<double>(std::min(r, c))) * s * (1 + 1e-12));
      for (int k = 0; k < 100; ++k) {
        Vector u = rng.gaussian_vector(c, FieldMode::Complex);
        u.normalize();
        CHECK((m * u).norm() <= s + tol.abs_tol);
      }
    }
  }

  TEST_CASE("least squares examples") {
    auto a = least_squares_solve(Matrix::Identity(2, 2), vec({1, 2}));
    CHECK((a.solution - vec({1, 2})).norm() < 1e-15);
    CHECK(a.residual < 1e-15);

    auto b = least_squares_solve(diag({1, 0}), vec({3, 0}));
    CHECK((b.solution - vec({3, 0})).norm() < 1e-15);

    Matrix column(2, 1);
    column << 1.0, 1.0;
    auto c = least_squares_solve(column, vec({1, 3}));
    CHECK(std::abs(c.solution(0) - 2.0) < 1e-14);
    CHECK(std::abs(c.residual - std::sqrt(2.0)) < 1e-14);

    CHECK_THROWS_AS(least_squares_solve(column, vec({1, 2, 3})), Error);
  }

  TEST_CASE("least squares gives the minimum-norm normal-equation solution") {
    Rng rng(15);
    for (int trial = 0; trial < 200; ++trial) {
      const Index r = rng.uniform_int(1, 6);
      const Index k = rng.uniform_int(1, 4);
      const Index c = rng.uniform_int(1, 6);
      // Rank-k product, so many systems are rank deficient.
      const Matrix m = rng.box_matrix(r, k, FieldMode::Complex) * rng.box_matrix(k, c, FieldMode::Complex);
      const Vector rhs = rng.box_vector(r, FieldMode::Complex);
      const Vector x = least_squares_solve(m, rhs).solution;
      // Normal equations, and x orthogonal to null(m).
      CHECK((m.adjoint() * (m * x - rhs)).norm() <= 1e-9 * (1 + m.norm() * m.norm() * x.norm()));
      const Matrix nulls = null_space(m);
      CHECK((nulls.adjoint() * x).norm() <= 1e-9 * (1 + x.norm()));
    }
  }

  TEST_CASE("non-finite input is rejected") {
    Vector v = vec({1, 2});
    v(1) = std::numeric_limits<double>::infinity();
    const std::vector<Vector> vs{v};
    CHECK_THROWS_AS(gram_matrix(vs), Error);
    Matrix m = Matrix::Identity(2, 2);
    m(1, 1) = std::nan("");
    CHECK_THROWS_AS(det(m), Error);
  }

  TEST_CASE("numerical radius brackets") {
    const Matrix skew = mat({{0, 1}, {-1, 0}});
    const NumericalRadius w = numerical_radius(skew);
    CHECK(std::abs(w.lower - 1.0) < 1e-10);
    CHECK(w.upper >= w.lower);
    CHECK(std::abs(std::abs(w.maximizer.dot(skew * w.maximizer)) - w.lower) < 1e-12);

    // Nilpotent Jordan block: w = 1/2.
    const NumericalRadius j = numerical_radius(mat({{0, 1}, {0, 0}}));
    CHECK(std::abs(j.lower - 0.5) < 1e-10);

    Rng rng(16);
    for (int trial = 0; trial < 100; ++trial) {
      const Index d = rng.uniform_int(1, 6);
      const Matrix m = rng.box_matrix(d, d, FieldMode::Complex);
      const NumericalRadius r = numerical_radius(m);
      const double norm = spectral_norm(m);
      CHECK(r.lower <= r.upper + 1e-12);
      CHECK(r.upper <= norm * (1 + 1e-12));
      CHECK(r.lower >= norm / 2 * (1 - 1e-12));
      for (int k = 0; k < 50; ++k) {
        Vector u = rng.gaussian_vector(d, FieldMode::Complex);
        u.normalize();
        CHECK(std::abs(u.dot(m * u)) <= r.upper * (1 + 1e-9) + 1e-12);
      }
    }
  }

  TEST_CASE("real predicate") {
    CHECK(is_real(vec({1, 2})));
    CHECK_FALSE(is_real(vec({1, I})));
    CHECK(is_real(vec({1, Scalar(2, 1e-12)})));
  }
}
