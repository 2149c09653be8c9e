// SPDX-License-Identifier: Apache-2.0

#ifndef NHILBERT_RANDOM_HPP_
#define NHILBERT_RANDOM_HPP_

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "nhilbert/kernel.hpp"

namespace nhilbert {

// splitmix64 finalizer over (seed, stream). Every trial draws from its own
// stream so serial and parallel runs see identical randomness.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Deterministic generator. Uniform and normal deviates are built from raw
// 64-bit words rather than std:: distributions so the streams do not depend
// on the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(derive_seed(seed, stream)) {}

  std::uint64_t next() { return engine_(); }
  double uniform01();                     // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double normal();                        // standard normal, Box-Muller
  int uniform_int(int lo, int hi);        // inclusive bounds

  // Entries uniform in the unit box [-1, 1] (imaginary part 0 in real mode).
  Scalar box_scalar(FieldMode field);
  Vector box_vector(Index dim, FieldMode field);
  Matrix box_matrix(Index rows, Index cols, FieldMode field);
  Vector gaussian_vector(Index dim, FieldMode field);

 private:
  std::mt19937_64 engine_;
};

struct SampledSup {
  double value = 0.0;
  std::vector<Vector> argmax;
  int evaluations = 0;
};

// Sampled supremum of a scale-invariant ratio of `arity` vectors. The search
// runs over coordinates w in K^r and the ratio sees embedding * w, so an
// orthonormal embedding confines it to that subspace. Each of `starts`
// independent (1+1) evolution strategies (one-fifth success rule) begins from
// the best of a few uniform draws; successive halving keeps the better half
// after each round. Multiple starts suit multimodal ratios such as
// |x^H K x|. Every returned value is attained at a concrete sample, so it is
// always a lower bound of the true supremum. Non-finite ratios are skipped.
SampledSup sampled_sup(const std::function<double(std::span<const Vector>)>& ratio, int arity,
                       const Matrix& embedding, FieldMode field, std::uint64_t seed, int samples,
                       int starts = 1);

// Same with the identity embedding of K^dim.
SampledSup sampled_sup(const std::function<double(std::span<const Vector>)>& ratio, int arity,
                       Index dim, FieldMode field, std::uint64_t seed, int samples, int starts = 1);

}  // namespace nhilbert

#endif  // NHILBERT_RANDOM_HPP_
