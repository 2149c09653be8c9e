// SPDX-License-Identifier: Apache-2.0

#ifndef NHILBERT_FUNCTIONALS_HPP_
#define NHILBERT_FUNCTIONALS_HPP_

#include <cstdint>
#include <optional>

#include "nhilbert/kernel.hpp"
#include "nhilbert/nspace.hpp"
#include "nhilbert/random.hpp"
#include "nhilbert/report.hpp"

namespace nhilbert {

// T(x, b_2, ..., b_n) = sum_i c_i x_i.
struct BLinearFunctional {
  Vector coeffs;
};

struct RieszSolution {
  Vector representer;            // canonical z, lies in range(P)
  double functional_norm = 0.0;  // ||z, b_2, ..., b_n||
  double residual = 0.0;         // max sampled |T(x) - <x,z|b>| / (||c|| ||x||)
  std::optional<Vector> witness; // z_0 from the constructive path, absent for T = 0
};

Scalar evaluate(const BLinearFunctional& functional, const Vector& x);

// T is bounded w.r.t. the anchored seminorm iff it vanishes on every anchor
// vector, i.e. c annihilates span(anchor).
bool is_bounded(const NSpace& space, const BLinearFunctional& functional);

// ||T|| = ||P conj(c)|| / sqrt(g), which equals ||z, b_2, ..., b_n||.
// Throws UnboundedFunctional.
double functional_norm(const NSpace& space, const BLinearFunctional& functional);

// Closed form: z = P conj(c) / g, the unique solution of the metric equation
// that lies in range(P).
RieszSolution riesz_direct(const NSpace& space, const BLinearFunctional& functional);

// Follows the existence proof: null space N(T) inside range(P), a unit z_0
// spanning its b-orthogonal complement there, then
//   z = conj(T(z_0)) z_0 / ||z_0, b_2, ..., b_n||^2.
RieszSolution riesz_constructive(const NSpace& space, const BLinearFunctional& functional);

// Samples x and checks |T(x) - <x,z|b>| within tolerance. A representer
// with a component along span(anchor) still represents T (the pairing cannot
// see it) but is not canonical; that raises the "non_canonical" flag without
// counting as a failure.
PropertyReport verify_representation(const NSpace& space, const BLinearFunctional& functional,
                                     const Vector& representer, std::uint64_t seed, int trials);

// Sampled sup of |T(x)| / ||x, b_2, ..., b_n|| (always a lower bound).
SampledSup sampled_functional_norm(const NSpace& space, const BLinearFunctional& functional,
                                   std::uint64_t seed, int samples);

}  // namespace nhilbert

#endif  // NHILBERT_FUNCTIONALS_HPP_
