// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "nhilbert/errors.hpp"
#include "nhilbert/random.hpp"
#include "nhilbert/sesquilinear.hpp"
#include "support.hpp"

using namespace nhilbert;
using namespace testing;

namespace {

NSpace axis_space(double scale = 1.0) { return NSpace(3, 2, {scale * unit(2, 3)}); }

const Matrix kSkew = mat({{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}});

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidSpec;
}

bool has_flag(const PropertyReport& r, const char* name) {
  return std::find(r.flags.begin(), r.flags.end(), name) != r.flags.end();
}

struct RandomCase {
  NSpace space;
  std::vector<Vector> anchor;
  Matrix q;  // Gram-Schmidt complement projector
  double g;
};

RandomCase random_case(Rng& rng, FieldMode field = FieldMode::Complex) {
  const int d = rng.uniform_int(2, 7);
  const int n = rng.uniform_int(2, std::min(4, d));
  std::vector<Vector> anchor;
  for (int i = 0; i < n - 1; ++i) anchor.push_back(rng.box_vector(d, field));
  const double g = cofactor_det(gram_matrix(anchor)).real();
  return {NSpace(d, n, anchor), anchor, complement_projector(anchor, d), g};
}

// Bounded random form: both slots supported on range(Q).
Matrix bounded_matrix(Rng& rng, const Matrix& q, FieldMode field = FieldMode::Complex) {
  const Matrix raw = rng.box_matrix(q.rows(), q.rows(), field);
  return q.conjugate() * raw * q.conjugate();
}

}  // namespace

TEST_SUITE("sesquilinear") {
  TEST_CASE("evaluation examples") {
    const BSesquilinearForm f{diag({1, 2, 0})};
    CHECK(std::abs(evaluate_form(f, unit(1, 3), unit(1, 3)) - 2.0) < 1e-15);
    CHECK(evaluate_form(f, Vector::Zero(3), unit(1, 3)) == Scalar(0.0));
    CHECK(evaluate_form(f, unit(1, 3), Vector::Zero(3)) == Scalar(0.0));
    CHECK(std::abs(evaluate_form(f, unit(1, 3), I * unit(1, 3)) + 2.0 * I) < 1e-15);
    CHECK_THROWS_AS(evaluate_form(f, vec({1, 2}), unit(1, 3)), Error);

    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
      const Index d = rng.uniform_int(1, 6);
      const Matrix b = rng.box_matrix(d, d, FieldMode::Complex);
      const Vector x = rng.box_vector(d, FieldMode::Complex);
      const Vector y = rng.box_vector(d, FieldMode::Complex);
      CHECK(std::abs(evaluate_form({b}, x, y) - reference_form(b, x, y)) < 1e-13);
    }
  }

  TEST_CASE("quadratic form examples") {
    CHECK(std::abs(quadratic_form({diag({1, 2, 0})}, vec({1, 1, 7})) - 3.0) < 1e-14);
    CHECK(quadratic_form({diag({1, 2, 0})}, Vector::Zero(3)) == Scalar(0.0));
    Rng rng(42);
    for (int k = 0; k < 20; ++k) {
      const Vector x = rng.box_vector(2, FieldMode::Real);
      CHECK(std::abs(quadratic_form({mat({{0, 1}, {-1, 0}})}, x)) < 1e-15);
    }
  }

  TEST_CASE("form from the n-inner product") {
    const NSpace space = axis_space();
    const BSesquilinearForm f = form_from_inner(space);
    Rng rng(43);
    for (int k = 0; k < 20; ++k) {
      const Vector x = rng.box_vector(3, FieldMode::Complex);
      const Vector y = rng.box_vector(3, FieldMode::Complex);
      const Scalar expected = x(0) * std::conj(y(0)) + x(1) * std::conj(y(1));
      CHECK(std::abs(evaluate_form(f, x, y) - expected) < 1e-14);
      CHECK(std::abs(evaluate_form(form_from_inner(axis_space(2.0)), x, y) - 4.0 * expected) < 1e-13);
      CHECK(std::abs(evaluate_form(f, unit(2, 3), y)) == 0.0);
    }
  }

  TEST_CASE("flip examples") {
    const Matrix hermitian = mat({{1, I}, {-I, 3}});
    CHECK(max_abs(flip_conjugate({hermitian}).matrix - hermitian) == 0.0);
    Rng rng(44);
    const Matrix b = rng.box_matrix(4, 4, FieldMode::Complex);
    CHECK(max_abs(flip_conjugate(flip_conjugate({b})).matrix - b) == 0.0);
    CHECK(max_abs(flip_conjugate({mat({{0, 1}, {0, 0}})}).matrix - mat({{0, 0}, {1, 0}})) == 0.0);
    for (int k = 0; k < 20; ++k) {
      const Vector x = rng.box_vector(4, FieldMode::Complex);
      const Vector y = rng.box_vector(4, FieldMode::Complex);
      CHECK(std::abs(evaluate_form(flip_conjugate({b}), x, y) - std::conj(reference_form(b, y, x))) < 1e-13);
    }
  }

  TEST_CASE("form from an operator") {
    const NSpace space = axis_space();
    CHECK(max_abs(form_from_operator(space, Matrix::Identity(3, 3)).matrix - form_from_inner(space).matrix) < 1e-14);
    CHECK(max_abs(form_from_operator(space, Matrix::Zero(3, 3)).matrix) == 0.0);
    const BSesquilinearForm f = form_from_operator(space, diag({2, 3, 0}));
    CHECK(std::abs(evaluate_form(f, unit(0, 3), unit(0, 3)) - 2.0) < 1e-14);
    CHECK(std::abs(evaluate_form(f, unit(1, 3), unit(1, 3)) - 3.0) < 1e-14);
    CHECK_THROWS_AS(form_from_operator(space, Matrix::Identity(2, 2)), Error);

    Rng rng(45);
    for (int trial = 0; trial < 100; ++trial) {
      const RandomCase c = random_case(rng);
      const Index d = c.space.dim();
      const Matrix a = rng.box_matrix(d, d, FieldMode::Complex);
      const BSesquilinearForm t = form_from_operator(c.space, a);
      const Vector x = rng.box_vector(d, FieldMode::Complex);
      const Vector y = rng.box_vector(d, FieldMode::Complex);
      const Scalar expected = reference_n_inner(a * x, y, c.anchor);
      CHECK(std::abs(evaluate_form(t, x, y) - expected) <= 1e-9 * c.g * (1 + (a * x).norm() * y.norm()));
    }
  }

  TEST_CASE("symmetry examples") {
    CHECK(is_symmetric({diag({1, 2, 0})}));
    CHECK_FALSE(is_symmetric({mat({{0, 1}, {-1, 0}})}));
    CHECK_FALSE(is_symmetric({mat({{0, I}, {I, 0}})}));
    CHECK(is_symmetric({mat({{0, I}, {-I, 0}})}));
  }

  TEST_CASE("positivity examples") {
    const NSpace space = axis_space();
    CHECK(is_positive(space, form_from_inner(space)));
    CHECK_FALSE(is_positive(space, {diag({1, -1, 0})}));
    CHECK(is_positive(space, {Matrix::Zero(3, 3)}));
    CHECK_FALSE(is_positive(space, {kSkew}));
  }

  TEST_CASE("polarization examples") {
    const NSpace space = axis_space();
    const BSesquilinearForm inner = form_from_inner(space);
    const auto q = [&](const Vector& v) { return quadratic_form(inner, v); };
    CHECK(std::abs(polarize(q, vec({1, 2, 3}), vec({4, 5, 6}), FieldMode::Complex) - 14.0) < 1e-13);
    CHECK(std::abs(polarize(q, vec({1, 2, 3}), vec({4, 5, 6}), FieldMode::Real) - 14.0) < 1e-13);

    const Vector x = vec({1, I, 2});
    const Scalar diagonal = polarize(q, x, x, FieldMode::Complex);
    CHECK(std::abs(diagonal - q(x)) < 1e-13);
    CHECK(std::abs(diagonal.imag()) < 1e-13);

    const BSesquilinearForm skew{mat({{0, 1}, {-1, 0}})};
    const auto qs = [&](const Vector& v) { return quadratic_form(skew, v); };
    const Vector a = vec({1, 2});
    const Vector b = vec({3, -1});
    CHECK(std::abs(polarize(qs, a, b, FieldMode::Real)) < 1e-15);
    CHECK(std::abs(evaluate_form(skew, a, b) - (-1.0 - 6.0)) < 1e-15);

    // A quadratic evaluator with imaginary values is rejected in real mode.
    const BSesquilinearForm imaginary{diag({I, 0, 0})};
    const auto qi = [&](const Vector& v) { return quadratic_form(imaginary, v); };
    CHECK(kind_of([&] { polarize(qi, unit(0, 3), unit(1, 3), FieldMode::Real); }) == ErrorKind::FieldModeMismatch);
  }

  TEST_CASE("polarization round trip for random symmetric forms") {
    Rng rng(46);
    for (int trial = 0; trial < 200; ++trial) {
      const Index d = rng.uniform_int(1, 8);
      const FieldMode field = trial % 2 == 0 ? FieldMode::Complex : FieldMode::Real;
      const Matrix raw = rng.box_matrix(d, d, field);
      const BSesquilinearForm f{(raw + raw.adjoint()) / 2.0};
      const auto q = [&](const Vector& v) { return quadratic_form(f, v); };
      for (int k = 0; k < 20; ++k) {
        const Vector x = rng.box_vector(d, field);
        const Vector y = rng.box_vector(d, field);
        const Scalar expected = reference_form(f.matrix, x, y);
        const double scale = f.matrix.norm() * x.norm() * y.norm();
        CHECK(std::abs(polarize(q, x, y, field) - expected) <= 1e-9 * (1 + scale));
      }
    }
  }

  TEST_CASE("boundedness examples") {
    const NSpace space = axis_space();
    CHECK(is_bounded_form(space, form_from_inner(space)));
    CHECK_FALSE(is_bounded_form(space, {diag({0, 0, 1})}));
    CHECK(is_bounded_form(space, {Matrix::Zero(3, 3)}));
    CHECK_FALSE(is_bounded_form(space, {mat({{0, 0, 1}, {0, 0, 0}, {0, 0, 0}})}));
  }

  TEST_CASE("form norm examples") {
    const NSpace space = axis_space();
    CHECK(std::abs(sesq_norm(space, {diag({1, 2, 0})}) - 2.0) < 1e-13);
    CHECK(sesq_norm(space, {Matrix::Zero(3, 3)}) == 0.0);
    CHECK(std::abs(sesq_norm(space, form_from_inner(space)) - 1.0) < 1e-13);
    const NSpace scaled = axis_space(2.0);
    CHECK(std::abs(sesq_norm(scaled, form_from_inner(scaled)) - 1.0) < 1e-13);
    CHECK(kind_of([&] { sesq_norm(space, {diag({0, 0, 1})}); }) == ErrorKind::UnboundedForm);
  }

  TEST_CASE("quadratic norm examples") {
    const NSpace space = axis_space();
    const QuadNorm diagonal = quad_norm(space, {diag({1, 2, 0})});
    CHECK(diagonal.exact);
    CHECK(std::abs(diagonal.value - 2.0) < 1e-13);
    CHECK(quad_norm(space, {Matrix::Zero(3, 3)}).value == 0.0);

    const QuadNorm skew = quad_norm(space, {kSkew});
    CHECK(std::abs(skew.value - 1.0) < 1e-10);
    CHECK(skew.lower <= skew.upper + 1e-12);
    CHECK(std::abs(quad_norm(space, {kSkew}, FieldMode::Real).value) < 1e-14);
    CHECK(kind_of([&] { quad_norm(space, {diag({0, 0, 1})}); }) == ErrorKind::UnboundedForm);
  }

  TEST_CASE("norm relation examples") {
    const NSpace space = axis_space();
    const PropertyReport diagonal = check_norm_relations(space, {diag({1, 2, 0})});
    CHECK(diagonal.passed());

    const PropertyReport skew = check_norm_relations(space, {kSkew});
    CHECK(skew.passed());

    const PropertyReport real_skew = check_norm_relations(space, {kSkew}, FieldMode::Real);
    CHECK(real_skew.status() == Status::Fixture);
    CHECK(real_skew.failures == real_skew.fixture_failures);
    CHECK(has_flag(real_skew, "real_field_counterexample"));
  }

  TEST_CASE("norms against an independent sweep") {
    // For the skew block, |T'(x)| = 2 |Im(x1 conj(x2))| <= |x1|^2 + |x2|^2.
    const NSpace space = axis_space();
    double best = 0.0;
    for (int i = 0; i <= 64; ++i) {
      const double t = M_PI * i / 128.0;
      for (int j = 0; j <= 64; ++j) {
        const double phase = 2 * M_PI * j / 64.0;
        const Vector x = vec({std::cos(t), std::sin(t) * std::exp(I * phase), 0});
        best = std::max(best, std::abs(reference_form(kSkew, x, x)));
      }
    }
    CHECK(std::abs(best - quad_norm(space, {kSkew}).value) < 1e-9);

    Rng rng(47);
    for (int trial = 0; trial < 100; ++trial) {
      const RandomCase c = random_case(rng);
      const Matrix b = bounded_matrix(rng, c.q);
      const double norm = sesq_norm(c.space, {b});
      // ||Q K Q|| / g computed through the Gram-Schmidt projector.
      const Matrix k = b.transpose();
      const double expected = spectral_norm(c.q * k * c.q) / c.g;
      CHECK(std::abs(norm - expected) <= 1e-9 * (1 + expected));
      const QuadNorm quad = quad_norm(c.space, {b});
      CHECK(quad.value <= norm * (1 + kNormSlack));
      CHECK(norm <= 2 * quad.value * (1 + kNormSlack));
      CHECK(check_norm_relations(c.space, {b}).passed());
    }
  }

  TEST_CASE("generalized Schwarz") {
    const NSpace space = axis_space();
    CHECK(check_generalized_schwarz(space, form_from_inner(space), 0, 200).passed());
    CHECK(check_generalized_schwarz(space, {diag({1, 2, 0})}, 0, 200).passed());
    CHECK(kind_of([&] { check_generalized_schwarz(space, {diag({1, -1, 0})}, 0, 10); }) ==
          ErrorKind::NotPositive);

    // Equality on the diagonal, computed directly.
    Rng rng(48);
    const BSesquilinearForm f{diag({1, 2, 0})};
    for (int k = 0; k < 20; ++k) {
      const Vector x = rng.box_vector(3, FieldMode::Complex);
      const double lhs = std::norm(evaluate_form(f, x, x));
      const double rhs = quadratic_form(f, x).real() * quadratic_form(f, x).real();
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + rhs));
    }
  }

  TEST_CASE("operator extraction examples") {
    const NSpace space = axis_space();
    const BOperator inner = extract_operator(space, form_from_inner(space));
    CHECK(max_abs(inner.matrix - space.projector()) < 1e-12);
    CHECK(std::abs(inner.bnorm - 1.0) < 1e-12);

    const BOperator zero = extract_operator(space, {Matrix::Zero(3, 3)});
    CHECK(max_abs(zero.matrix) < 1e-15);
    CHECK(zero.bnorm == 0.0);

    const Matrix a = mat({{2, I, 0}, {1, 3, 0}, {0, 0, 0}});
    const BOperator round = extract_operator(space, form_from_operator(space, a));
    CHECK(max_abs(round.matrix - a) < 1e-12);
    CHECK(kind_of([&] { extract_operator(space, {diag({0, 0, 1})}); }) == ErrorKind::UnboundedForm);
  }

  TEST_CASE("operator extraction on random forms") {
    Rng rng(49);
    for (int trial = 0; trial < 100; ++trial) {
      const RandomCase c = random_case(rng);
      const Matrix b = bounded_matrix(rng, c.q);
      const BOperator s = extract_operator(c.space, {b});
      CHECK(max_abs(c.q * s.matrix * c.q - s.matrix) <= 1e-9 * (1 + max_abs(s.matrix)));
      for (int k = 0; k < 5; ++k) {
        const Vector x = rng.box_vector(c.space.dim(), FieldMode::Complex);
        const Vector y = rng.box_vector(c.space.dim(), FieldMode::Complex);
        const Scalar expected = reference_form(b, x, y);
        const Scalar got = reference_n_inner(s.matrix * x, y, c.anchor);
        CHECK(std::abs(got - expected) <= 1e-8 * (1 + b.norm() * x.norm() * y.norm()));
      }
      CHECK(std::abs(s.bnorm - sesq_norm(c.space, {b})) <= 1e-9 * (1 + s.bnorm));
    }
  }

  TEST_CASE("operator b-norm examples") {
    const NSpace space = axis_space();
    CHECK(std::abs(operator_bnorm(space, space.projector()) - 1.0) < 1e-14);
    CHECK(operator_bnorm(space, Matrix::Zero(3, 3)) == 0.0);
    CHECK(std::abs(operator_bnorm(space, 3.0 * space.projector()) - 3.0) < 1e-13);
    // Sends the anchor to e1, so no bound exists.
    CHECK(kind_of([&] { operator_bnorm(space, mat({{0, 0, 1}, {0, 0, 0}, {0, 0, 0}})); }) ==
          ErrorKind::UnboundedOperator);
    // Moving range(P) onto the anchor is harmless: the image has seminorm 0.
    CHECK(operator_bnorm(space, mat({{0, 0, 0}, {0, 0, 0}, {1, 0, 0}})) == doctest::Approx(0.0));
  }

  TEST_CASE("symmetry iff real quadratic form") {
    const NSpace space = axis_space();
    const Matrix upper = mat({{0, 1, 0}, {0, 0, 0}, {0, 0, 0}});
    CHECK(std::abs(quadratic_form({upper}, vec({1, I, 0})) + I) < 1e-15);
    CHECK_FALSE(is_symmetric({upper}));
    CHECK(check_symmetry_iff_real(space, {upper}, 0, 50).passed());

    const Matrix imaginary = diag({I, 0, 0});
    CHECK(std::abs(quadratic_form({imaginary}, unit(0, 3)) - I) < 1e-15);
    CHECK(check_symmetry_iff_real(space, {imaginary}, 0, 50).passed());

    const Matrix hermitian = mat({{1, I, 0}, {-I, 2, 0}, {0, 0, 0}});
    CHECK(check_symmetry_iff_real(space, {hermitian}, 0, 50).passed());
    Rng rng(50);
    for (int k = 0; k < 50; ++k) {
      CHECK(std::abs(quadratic_form({hermitian}, rng.box_vector(3, FieldMode::Complex)).imag()) <= 1e-12);
    }

    for (int trial = 0; trial < 100; ++trial) {
      const RandomCase c = random_case(rng);
      const Matrix b = bounded_matrix(rng, c.q);
      CHECK(check_symmetry_iff_real(c.space, {b}, static_cast<std::uint64_t>(trial), 20).passed());
      CHECK(check_symmetry_iff_real(c.space, {(b + b.adjoint()) / 2.0}, static_cast<std::uint64_t>(trial), 20)
                .passed());
    }
  }

  TEST_CASE("sampled norms are close lower bounds") {
    Rng rng(51);
    for (int trial = 0; trial < 20; ++trial) {
      const RandomCase c = random_case(rng);
      const BSesquilinearForm f{bounded_matrix(rng, c.q)};
      const auto seed = static_cast<std::uint64_t>(trial);
      const double form = sesq_norm(c.space, f);
      const SampledSup sf = sampled_form_norm(c.space, f, seed, 1000);
      CHECK(sf.value <= form + 1e-8);
      CHECK(sf.value >= 0.98 * form);
      const double quad = quad_norm(c.space, f).value;
      const SampledSup sq = sampled_quad_norm(c.space, f, FieldMode::Complex, seed, 1000);
      CHECK(sq.value <= quad + 1e-8);
      CHECK(sq.value >= 0.98 * quad);
    }
  }
}
