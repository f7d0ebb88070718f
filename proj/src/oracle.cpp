#include "loewner/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "loewner/error.hpp"

namespace loewner {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SymMat spectral(const Matrix& basis, const Vector& eigenvalues) {
  return SymMat::congruence(basis, SymMat::diagonal(eigenvalues));
}

}  // namespace

const char* to_string(IntervalShape shape) noexcept {
  switch (shape) {
    case IntervalShape::ClosedClosed: return "[A,B]";
    case IntervalShape::ClosedOpen: return "[A,B)";
    case IntervalShape::OpenClosed: return "(A,B]";
    case IntervalShape::OpenOpen: return "(A,B)";
    case IntervalShape::ClosedInfinite: return "[A,inf)";
    case IntervalShape::OpenInfinite: return "(A,inf)";
    case IntervalShape::InfiniteClosed: return "(-inf,A]";
    case IntervalShape::InfiniteOpen: return "(-inf,A)";
    case IntervalShape::Whole: return "(-inf,inf)";
  }
  return "?";
}

Sampler::Sampler(std::uint64_t seed, std::size_t min_dim, std::size_t max_dim, double condition_cap)
    : seed_(seed), min_dim_(min_dim), max_dim_(max_dim), cap_(condition_cap), gen_(seed) {
  if (min_dim_ < 1 || max_dim_ < min_dim_) fail(ErrorCode::BadParameter, "sampler: bad dimension range");
  if (!(cap_ >= 1.0)) fail(ErrorCode::BadParameter, "sampler: condition cap must be >= 1");
}

Sampler Sampler::derive(std::uint64_t stream) const {
  return Sampler(splitmix64(seed_ ^ splitmix64(stream + 1)), min_dim_, max_dim_, cap_);
}

double Sampler::uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

double Sampler::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Sampler::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Sampler::dimension() {
  const std::size_t span = max_dim_ - min_dim_ + 1;
  return min_dim_ + static_cast<std::size_t>(uniform() * static_cast<double>(span));
}

bool Sampler::coin() { return uniform() < 0.5; }

Vector Sampler::unit_vector(std::size_t n) {
  Vector v(n);
  do {
    for (double& x : v) x = normal();
  } while (norm(v) < 1e-6);
  return normalized(v);
}

SymMat Sampler::symmetric(std::size_t n) {
  Matrix g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = normal();
  return SymMat(g);
}

Matrix Sampler::orthogonal(std::size_t n) {
  Matrix o = Matrix::identity(n);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double a = uniform(0.0, 2.0 * std::numbers::pi);
        const double c = std::cos(a);
        const double s = std::sin(a);
        for (std::size_t k = 0; k < n; ++k) {
          const double okp = o(k, p);
          const double okq = o(k, q);
          o(k, p) = c * okp - s * okq;
          o(k, q) = s * okp + c * okq;
        }
      }
    }
  }
  if (coin()) {
    for (std::size_t k = 0; k < n; ++k) o(k, 0) = -o(k, 0);
  }
  return o;
}

Matrix Sampler::invertible(std::size_t n) {
  const double lo = std::log(1.0 / std::sqrt(cap_));
  const double hi = std::log(std::sqrt(cap_));
  Vector sigma(n);
  for (double& s : sigma) s = std::exp(uniform(lo, hi));
  return orthogonal(n) * Matrix::diagonal(sigma) * orthogonal(n);
}

Matrix Sampler::contraction(std::size_t n, double sigma_min) {
  Vector sigma(n);
  for (double& s : sigma) s = uniform(sigma_min, 1.0);
  return orthogonal(n) * Matrix::diagonal(sigma) * orthogonal(n);
}

SymMat Sampler::psd(std::size_t n, std::size_t rank) {
  Vector l(n, 0.0);
  for (std::size_t i = 0; i < std::min(rank, n); ++i) l[i] = uniform(1.0 / cap_, 1.0);
  return spectral(orthogonal(n), l);
}

RankOneProjection Sampler::projection(std::size_t n) { return RankOneProjection(unit_vector(n)); }

SymMat Sampler::projection(std::size_t n, std::size_t rank) {
  Vector l(n, 0.0);
  for (std::size_t i = 0; i < std::min(rank, n); ++i) l[i] = 1.0;
  return spectral(orthogonal(n), l);
}

Effect Sampler::effect(std::size_t n) {
  const Spectrum s = eigh(symmetric(n));
  const double a = uniform(0.0, 0.3);
  const double b = uniform(0.7, 1.0);
  const double width = s.max() - s.min();
  Vector l(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = width > 0 ? (s.eigenvalues[i] - s.min()) / width : 0.5;
    l[i] = a + (b - a) * r;
  }
  return make_effect(spectral(s.vectors, l));
}

Effect Sampler::interior_effect(std::size_t n, double margin) {
  Vector l(n);
  for (double& x : l) x = uniform(margin, 1.0 - margin);
  return make_effect(spectral(orthogonal(n), l));
}

std::pair<Effect, Effect> Sampler::comparable_pair(std::size_t n) {
  const Effect y = effect(n);
  const SymMat root = sqrt_psd(y.mat());
  SymMat e = effect(n).mat();
  if (uniform() < 1.0 / 3.0) {
    // Y - X of rank one
    e = SymMat::identity(n) - uniform() * projection(n).mat();
  }
  const SymMat x = SymMat::congruence(root.matrix(), e);
  return {make_effect(x), y};
}

IntervalSpec Sampler::interval(std::size_t n, IntervalShape shape) {
  const SymMat a = symmetric(n);
  Vector l(n);
  for (double& x : l) x = uniform(0.2, 2.0);
  const SymMat b = a + spectral(orthogonal(n), l);
  using E = Endpoint;
  switch (shape) {
    case IntervalShape::ClosedClosed: return {n, E::closed(a), E::closed(b)};
    case IntervalShape::ClosedOpen: return {n, E::closed(a), E::open(b)};
    case IntervalShape::OpenClosed: return {n, E::open(a), E::closed(b)};
    case IntervalShape::OpenOpen: return {n, E::open(a), E::open(b)};
    case IntervalShape::ClosedInfinite: return {n, E::closed(a), E::plus_infinity()};
    case IntervalShape::OpenInfinite: return {n, E::open(a), E::plus_infinity()};
    case IntervalShape::InfiniteClosed: return {n, E::minus_infinity(), E::closed(a)};
    case IntervalShape::InfiniteOpen: return {n, E::minus_infinity(), E::open(a)};
    case IntervalShape::Whole: return IntervalSpec::whole(n);
  }
  fail(ErrorCode::BadParameter, "unknown interval shape");
}

SymMat Sampler::point_in(const IntervalSpec& spec) {
  return comparable_pair_in(spec).first;
}

std::pair<SymMat, SymMat> Sampler::comparable_pair_in(const IntervalSpec& spec) {
  const std::size_t n = spec.n();
  const Endpoint& lo = spec.lower();
  const Endpoint& hi = spec.upper();
  if (lo.is_finite() && hi.is_finite()) {
    const SymMat root = sqrt_psd(hi.matrix() - lo.matrix());
    const Effect big = interior_effect(n);
    const SymMat big_root = sqrt_psd(big.mat());
    const SymMat small = SymMat::congruence(big_root.matrix(), interior_effect(n).mat());
    return {lo.matrix() + SymMat::congruence(root.matrix(), small),
            lo.matrix() + SymMat::congruence(root.matrix(), big.mat())};
  }
  auto definite = [&] {
    Vector l(n);
    for (double& x : l) x = uniform(0.05, 2.0);
    return spectral(orthogonal(n), l);
  };
  const SymMat p1 = definite();
  const SymMat p2 = p1 + psd(n, 1 + static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  if (lo.is_finite()) return {lo.matrix() + p1, lo.matrix() + p2};
  if (hi.is_finite()) return {hi.matrix() - p2, hi.matrix() - p1};
  const SymMat base = symmetric(n);
  return {base, base + (p2 - p1)};
}

double strength_bisection(const SymMat& a, const RankOneProjection& p, const Tolerances& tol) {
  if (a.n() != p.n()) fail(ErrorCode::DimensionMismatch, "strength_bisection: dimension mismatch");
  const Spectrum s = eigh(a, tol);
  if (s.min() < -tol.psd_tol) fail(ErrorCode::NotPSD, "strength_bisection: matrix is not PSD");
  double lo = 0.0;
  double hi = std::max(std::abs(s.min()), std::abs(s.max())) + 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (loewner_le(mid * p.mat(), a, tol)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

MonotonicityReport monotonicity_report(const std::function<SymMat(const SymMat&)>& map,
                                       const IntervalSpec& domain, int trials, Sampler& s,
                                       const Tolerances& tol) {
  MonotonicityReport r;
  for (int k = 0; k < trials; ++k) {
    const auto [x, y] = s.comparable_pair_in(domain);
    const SymMat fx = map(x);
    const SymMat fy = map(y);
    ++r.trials;
    if (loewner_le(fx, fy, tol)) {
      ++r.preserved;
    } else if (loewner_le(fy, fx, tol)) {
      ++r.reversed;
    } else {
      ++r.violated;
    }
  }
  return r;
}

}  // namespace loewner
