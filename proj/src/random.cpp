// SPDX-License-Identifier: Apache-2.0

#include "nhilbert/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace nhilbert {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next() % span);
}

Scalar Rng::box_scalar(FieldMode field) {
  const double re = uniform(-1.0, 1.0);
  const double im = field == FieldMode::Complex ? uniform(-1.0, 1.0) : 0.0;
  return {re, im};
}

Vector Rng::box_vector(Index dim, FieldMode field) {
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = box_scalar(field);
  return v;
}

Matrix Rng::box_matrix(Index rows, Index cols, FieldMode field) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = box_scalar(field);
  }
  return m;
}

Vector Rng::gaussian_vector(Index dim, FieldMode field) {
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) {
    const double re = normal();
    const double im = field == FieldMode::Complex ? normal() : 0.0;
    v(i) = Scalar(re, im);
  }
  return v;
}

namespace {

constexpr double kInitialStep = 0.5;
constexpr double kStepGrowth = 2.0;  // on success; failures shrink by kStepGrowth^-1/4
constexpr double kRoundDecay = 1.5;  // round r receives kRoundDecay^-r of the remaining budget

struct SearchRun {
  std::vector<Vector> incumbent;
  double value = -std::numeric_limits<double>::infinity();
  double step = kInitialStep;
};

}  // namespace

SampledSup sampled_sup(const std::function<double(std::span<const Vector>)>& ratio, int arity,
                       Index dim, FieldMode field, std::uint64_t seed, int samples, int starts) {
  return sampled_sup(ratio, arity, Matrix::Identity(dim, dim), field, seed, samples, starts);
}

SampledSup sampled_sup(const std::function<double(std::span<const Vector>)>& ratio, int arity,
                       const Matrix& embedding, FieldMode field, std::uint64_t seed, int samples,
                       int starts) {
  Rng rng(seed);
  SampledSup best;
  best.value = -std::numeric_limits<double>::infinity();
  const auto k = static_cast<std::size_t>(arity);
  const Index coords = embedding.cols();
  if (coords == 0 || samples <= 0) {
    best.value = 0.0;
    return best;
  }
  starts = std::clamp(starts, 1, std::max(1, samples / 20));

  std::vector<Vector> mapped(k);
  const auto consider = [&](SearchRun& run, std::vector<Vector>& point) {
    for (std::size_t i = 0; i < k; ++i) {
      const double n = point[i].norm();
      if (n > 0.0) point[i] /= n;
      mapped[i] = embedding * point[i];
    }
    const double value = ratio(mapped);
    ++best.evaluations;
    if (!std::isfinite(value) || !(value > run.value)) return false;
    run.value = value;
    run.incumbent = point;
    if (value > best.value) {
      best.value = value;
      best.argmax = mapped;
    }
    return true;
  };
  const auto random_point = [&] {
    std::vector<Vector> point(k);
    for (auto& v : point) v = rng.box_vector(coords, field);
    return point;
  };

  // Random draws seed each start; the rest is successive halving over
  // (1+1)-ES runs, with early rounds funded most.
  std::vector<SearchRun> runs(static_cast<std::size_t>(starts));
  const int draws = std::max(1, std::max(samples / 20 / starts, samples / 100));
  int used = 0;
  for (auto& run : runs) {
    for (int s = 0; s < draws && used < samples; ++s, ++used) {
      auto point = random_point();
      consider(run, point);
    }
  }
  int rounds = 1;
  for (int live = starts; live > 1; live /= 2) ++rounds;

  for (int round = 0; round < rounds; ++round) {
    double weight_sum = 0.0;
    for (int r = round; r < rounds; ++r) weight_sum += std::pow(kRoundDecay, round - r);
    const int budget = round + 1 == rounds ? samples - used
                                           : static_cast<int>((samples - used) / weight_sum);
    const int live = static_cast<int>(runs.size());
    for (int i = 0; i < live; ++i) {
      SearchRun& run = runs[static_cast<std::size_t>(i)];
      const int share = budget / live + (i < budget % live ? 1 : 0);
      for (int s = 0; s < share; ++s) {
        std::vector<Vector> point = run.incumbent.empty() ? random_point() : run.incumbent;
        if (!run.incumbent.empty()) {
          for (auto& v : point) v += run.step * rng.gaussian_vector(coords, field);
        }
        run.step *= consider(run, point) ? kStepGrowth : std::pow(kStepGrowth, -0.25);
        run.step = std::clamp(run.step, 1e-12, 2.0);
      }
    }
    used += budget;
    std::stable_sort(runs.begin(), runs.end(),
                     [](const SearchRun& a, const SearchRun& b) { return a.value > b.value; });
    runs.resize(std::max<std::size_t>(1, runs.size() / 2));
  }
  if (best.argmax.empty()) best.value = 0.0;
  return best;
}

}  // namespace nhilbert
