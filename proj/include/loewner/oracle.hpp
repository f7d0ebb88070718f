#pragma once

// Seeded samplers and brute-force oracles for property checks. The library's
// numerical routines never call into this module; the self-test does.

#include <cstdint>
#include <functional>
#include <random>
#include <utility>

#include "loewner/effects.hpp"
#include "loewner/intervals.hpp"
#include "loewner/linalg.hpp"

namespace loewner {

// The nine interval shapes: [A,B], [A,B), (A,B], (A,B), [A,inf), (A,inf),
// (-inf,A], (-inf,A), (-inf,inf).
enum class IntervalShape {
  ClosedClosed,
  ClosedOpen,
  OpenClosed,
  OpenOpen,
  ClosedInfinite,
  OpenInfinite,
  InfiniteClosed,
  InfiniteOpen,
  Whole,
};

inline constexpr IntervalShape kAllIntervalShapes[] = {
    IntervalShape::ClosedClosed,   IntervalShape::ClosedOpen,     IntervalShape::OpenClosed,
    IntervalShape::OpenOpen,       IntervalShape::ClosedInfinite, IntervalShape::OpenInfinite,
    IntervalShape::InfiniteClosed, IntervalShape::InfiniteOpen,   IntervalShape::Whole,
};

const char* to_string(IntervalShape shape) noexcept;

// Stream contract: std::mt19937_64 seeded with `seed`; uniforms take the top
// 53 bits of each draw, normals use Box-Muller on two uniforms. Both are
// fixed by this file, so a seed reproduces the same stream everywhere.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed, std::size_t min_dim = 2, std::size_t max_dim = 6,
                   double condition_cap = 10.0);

  std::uint64_t seed() const noexcept { return seed_; }
  // Independent stream for a parallel shard.
  Sampler derive(std::uint64_t stream) const;

  double uniform();                     // [0, 1)
  double uniform(double lo, double hi);
  double normal();
  std::size_t dimension();              // uniform in [min_dim, max_dim]
  bool coin();

  Vector unit_vector(std::size_t n);
  SymMat symmetric(std::size_t n);
  // Product of random plane rotations, with a random reflection half the time.
  Matrix orthogonal(std::size_t n);
  // O1 diag(sigma) O2, sigma log-uniform in [cap^{-1/2}, cap^{1/2}].
  Matrix invertible(std::size_t n);
  // Singular values uniform in [sigma_min, 1].
  Matrix contraction(std::size_t n, double sigma_min = 0.3);
  // Rank-`rank` PSD matrix with nonzero eigenvalues in [1/cap, 1].
  SymMat psd(std::size_t n, std::size_t rank);
  RankOneProjection projection(std::size_t n);
  // Orthogonal projection of the given rank.
  SymMat projection(std::size_t n, std::size_t rank);

  // Random symmetric matrix whose spectrum is mapped affinely into a random
  // sub-interval of [0, 1].
  Effect effect(std::size_t n);
  // Spectrum inside [margin, 1 - margin].
  Effect interior_effect(std::size_t n, double margin = 0.05);
  // X <= Y in [0, I], with Y - X = Y^{1/2} (I - E) Y^{1/2} >= 0.
  std::pair<Effect, Effect> comparable_pair(std::size_t n);

  // Random endpoints: A symmetric, B = A + (positive definite, eigenvalues in
  // [0.2, 2]).
  IntervalSpec interval(std::size_t n, IntervalShape shape);

  // Points strictly inside an interval, away from any boundary.
  SymMat point_in(const IntervalSpec& spec);
  std::pair<SymMat, SymMat> comparable_pair_in(const IntervalSpec& spec);

 private:
  std::uint64_t seed_;
  std::size_t min_dim_;
  std::size_t max_dim_;
  double cap_;
  std::mt19937_64 gen_;
};

// sup { t : tP <= A } by 60 bisection steps on [0, ||A||_2 + 1].
double strength_bisection(const SymMat& a, const RankOneProjection& p, const Tolerances& tol = {});

struct MonotonicityReport {
  int trials = 0;
  int preserved = 0;  // f(X) <= f(Y)
  int reversed = 0;   // f(Y) <= f(X) only
  int violated = 0;   // incomparable images
  bool ok() const noexcept { return violated == 0; }
};

MonotonicityReport monotonicity_report(const std::function<SymMat(const SymMat&)>& map,
                                       const IntervalSpec& domain, int trials, Sampler& s,
                                       const Tolerances& tol = {});

}  // namespace loewner
