#include "loewner/effects.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "loewner/error.hpp"

namespace loewner {

namespace {

void require_psd(const Spectrum& s, const Tolerances& tol, const char* where) {
  if (s.min() < -tol.psd_tol) {
    std::ostringstream os;
    os << where << ": matrix is not positive semidefinite (lambda_min = " << s.min() << ")";
    fail(ErrorCode::NotPSD, os.str());
  }
}

// Only reached for x near the boundary of range(A).
double strength_by_bisection(const SymMat& a, const RankOneProjection& p, double upper,
                             const Tolerances& tol) {
  double lo = 0.0;
  double hi = upper;
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

Vector orthogonalize(Vector v, const std::vector<Vector>& against) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vector& b : against) {
      const double c = dot(b, v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
  }
  return v;
}

}  // namespace

Effect make_effect(const SymMat& a, const Tolerances& tol) {
  const Spectrum s = eigh(a, tol);
  if (s.min() < -tol.psd_tol || s.max() > 1.0 + tol.psd_tol) {
    const double bad = s.min() < -tol.psd_tol ? s.min() : s.max();
    std::ostringstream os;
    os << "matrix is not an effect: eigenvalue " << bad << " lies outside [0, 1]";
    fail(ErrorCode::OutOfInterval, os.str());
  }
  return Effect(a);
}

RankOneProjection::RankOneProjection(std::span<const double> x) : x_(normalized(x)) {
  for (double v : x_) {
    if (std::abs(v) > 1e-12) {
      if (v < 0) {
        for (double& w : x_) w = -w;
      }
      break;
    }
  }
  m_ = SymMat::outer(x_);
}

RankOneProjection RankOneProjection::basis(std::size_t n, std::size_t i) {
  Vector e(n, 0.0);
  e.at(i) = 1.0;
  return RankOneProjection(e);
}

double strength(const SymMat& a, const RankOneProjection& p, const Tolerances& tol) {
  if (a.n() != p.n()) fail(ErrorCode::DimensionMismatch, "strength: dimension mismatch");
  const Spectrum s = eigh(a, tol);
  require_psd(s, tol, "strength");
  const PseudoInverse pi = pinv_and_range(a, tol);
  if (!pi.in_range(p.vector())) return 0.0;
  const double top = std::max(s.max(), 0.0);
  const double quad = dot(p.vector(), pi.pinv().matrix() * p.vector());
  if (std::abs(quad) < 10.0 * tol.rank_tol) {
    return strength_by_bisection(a, p, top + 1.0, tol);
  }
  return std::clamp(1.0 / quad, 0.0, top);
}

std::optional<StrengthWitness> strength_witness(const SymMat& a, const SymMat& b,
                                                const Tolerances& tol) {
  if (a.n() != b.n()) fail(ErrorCode::DimensionMismatch, "strength_witness: dimension mismatch");
  require_psd(eigh(a, tol), tol, "strength_witness");
  require_psd(eigh(b, tol), tol, "strength_witness");

  const Spectrum d = eigh(a - b, tol);
  if (d.max() <= tol.psd_tol) return std::nullopt;

  // first eigenvector (in ascending order) attaining the top eigenvalue
  const double top = d.max();
  std::size_t k = d.eigenvalues.size() - 1;
  for (std::size_t i = 0; i < d.eigenvalues.size(); ++i) {
    if (d.eigenvalues[i] >= top - 1e-12 * (1.0 + std::abs(top))) {
      k = i;
      break;
    }
  }
  const Vector x = d.vector(k);
  const Vector ax = a.matrix() * x;
  const double axx = dot(ax, x);
  return StrengthWitness{RankOneProjection(ax), dot(ax, ax) / axx};
}

std::optional<RankOneSegment> rank_one_segment(const Effect& a, const Effect& b,
                                               const Tolerances& tol) {
  if (a.n() != b.n()) fail(ErrorCode::DimensionMismatch, "rank_one_segment: dimension mismatch");
  if (!loewner_le(a.mat(), b.mat(), tol)) {
    fail(ErrorCode::NotComparable, "rank_one_segment: lower endpoint is not below upper endpoint");
  }
  const Spectrum s = eigh(b.mat() - a.mat(), tol);
  const std::size_t n = s.eigenvalues.size();
  const double scale = std::max(std::abs(s.min()), std::abs(s.max()));
  const double cut = tol.rank_tol * (1.0 + scale);
  if (n >= 2 && s.eigenvalues[n - 2] > cut) return std::nullopt;
  if (s.max() <= cut) return RankOneSegment{0.0, RankOneProjection::basis(n, 0)};
  return RankOneSegment{s.max(), RankOneProjection(s.vector(n - 1))};
}

IdentityBlock identity_block(const Effect& a, const RankOneProjection& p,
                             const RankOneProjection& q, const Tolerances& tol) {
  const std::size_t n = a.n();
  if (p.n() != n || q.n() != n) fail(ErrorCode::DimensionMismatch, "identity_block: dimension mismatch");
  if ((p.mat() - q.mat()).frobenius_norm() <= tol.equality_tol) {
    fail(ErrorCode::PreconditionViolated, "identity_block: P and Q coincide");
  }
  if (!loewner_le(p.mat(), a.mat(), tol)) {
    fail(ErrorCode::PreconditionViolated, "identity_block: P <= A fails");
  }
  if (!loewner_le(q.mat(), a.mat(), tol)) {
    fail(ErrorCode::PreconditionViolated, "identity_block: Q <= A fails");
  }
  if (!loewner_le(a.mat(), SymMat::identity(n), tol)) {
    fail(ErrorCode::PreconditionViolated, "identity_block: A <= I fails");
  }

  IdentityBlock out;
  out.k_basis.push_back(p.vector());
  out.k_basis.push_back(normalized(orthogonalize(q.vector(), out.k_basis)));

  std::vector<Vector> all = out.k_basis;
  const double accept = 0.5 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n && all.size() < n; ++i) {
    Vector e(n, 0.0);
    e[i] = 1.0;
    Vector r = orthogonalize(e, all);
    if (norm(r) > accept) {
      all.push_back(normalized(r));
      out.complement_basis.push_back(all.back());
    }
  }

  const Matrix& am = a.mat().matrix();
  auto form = [&](const Vector& x, const Vector& y) { return dot(x, am * y); };

  double id_defect = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const double d = form(out.k_basis[i], out.k_basis[j]) - (i == j ? 1.0 : 0.0);
      id_defect += d * d;
    }
  out.identity_defect = std::sqrt(id_defect);

  double off = 0.0;
  for (const Vector& w : out.complement_basis)
    for (const Vector& u : out.k_basis) off += form(w, u) * form(w, u);
  out.off_block_norm = std::sqrt(off);

  const std::size_t m = out.complement_basis.size();
  if (m > 0) {
    Matrix b(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        b(i, j) = form(out.complement_basis[i], out.complement_basis[j]);
    out.complement = SymMat(b);
  }

  // P <= A within psd_tol only pins A x = x to O(sqrt(psd_tol)).
  const double block_tol = 4.0 * std::sqrt(tol.psd_tol * (1.0 + norm2(a.mat(), tol)));
  if (out.identity_defect > block_tol || out.off_block_norm > block_tol) {
    fail(ErrorCode::PreconditionViolated, "identity_block: block structure not certified");
  }
  return out;
}

OrthogonalPair orthogonal_pair_for_strength(const RankOneProjection& r, double s) {
  if (!(s > 0.5 && s < 1.0)) {
    std::ostringstream os;
    os << "strength target " << s << " must lie strictly between 1/2 and 1";
    fail(ErrorCode::BadParameter, os.str());
  }
  const std::size_t n = r.n();
  if (n < 2) fail(ErrorCode::BadParameter, "orthogonal_pair_for_strength needs n >= 2");
  const Vector& x0 = r.vector();

  Vector w;
  for (std::size_t k = 0; k < n; ++k) {
    Vector e(n, 0.0);
    e[k] = 1.0;
    Vector res = orthogonalize(e, {x0});
    if (norm(res) > 1e-3) {
      w = normalized(res);
      break;
    }
  }

  // <R x, x> = c places R's vector at (sqrt(c), -sqrt(1-c)) in the (x, y) frame
  const double c = (1.0 - s) / s;
  const double a = std::sqrt(c);
  const double b = std::sqrt(1.0 - c);
  Vector x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = a * x0[i] + b * w[i];
    y[i] = -b * x0[i] + a * w[i];
  }
  return OrthogonalPair{RankOneProjection(x), RankOneProjection(y)};
}

std::optional<RankOneProjection> one_third_decomposition(const SymMat& a,
                                                         const RankOneProjection& p,
                                                         const Tolerances& tol) {
  if (a.n() != 2 || p.n() != 2) {
    fail(ErrorCode::DimensionMismatch, "one_third_decomposition is defined for 2x2 matrices");
  }
  // A = (1/3)Q + (I - Q) forces Q = (3/2)(I - A)
  const SymMat q = 1.5 * (SymMat::identity(2) - a);
  const SymMat q2(q.matrix() * q.matrix());
  const double pq = SymMat(p.mat().matrix() * q.matrix()).trace();
  const double eps = tol.equality_tol;
  if (std::abs(q.trace() - 1.0) > eps || (q2 - q).frobenius_norm() > eps ||
      std::abs(pq - 0.5) > eps) {
    return std::nullopt;
  }
  const Spectrum s = eigh(q, tol);
  return RankOneProjection(s.vector(1));
}

bool MaxDiagonalSet::Curve::contains(double p, double q, double slack) const {
  if (p < -slack || p > t + slack || q < -slack || q > s + slack) return false;
  return std::abs((t - p) * (s - q) - u * u) <= slack;
}

MaxDiagonalSet maximal_diagonals(const Effect& a, const Tolerances& tol) {
  if (a.n() != 2) fail(ErrorCode::DimensionMismatch, "maximal_diagonals is defined for 2x2 effects");
  const double t = a.mat()(0, 0);
  const double s = a.mat()(1, 1);
  const double u = a.mat()(0, 1);
  if (std::abs(u) <= tol.equality_tol) {
    return {MaxDiagonalSet::Singleton{SymMat::diagonal({t, s})}};
  }
  if (t * s - u * u <= tol.rank_tol) return {MaxDiagonalSet::ZeroOnly{}};
  return {MaxDiagonalSet::Curve{t, s, u}};
}

const TwoByTwoConstants& two_by_two_constants() {
  static const TwoByTwoConstants k{
      SymMat(2, {1.0, 0.0, 0.0, -1.0}),
      SymMat(2, {0.0, 1.0, 1.0, 0.0}),
      SymMat(2, {0.5, 0.5, 0.5, 0.5}),
      SymMat(2, {0.5, -0.5, -0.5, 0.5}),
  };
  return k;
}

Effect sharp(const SymMat& x, const Tolerances& tol) {
  if (x.n() != 2) fail(ErrorCode::DimensionMismatch, "sharp is defined for 2x2 matrices");
  if (std::abs(x(0, 1)) > tol.equality_tol) {
    fail(ErrorCode::NotDiagonal, "sharp: input is not diagonal");
  }
  const auto& k = two_by_two_constants();
  return make_effect(x(0, 0) * k.basis_plus + x(1, 1) * k.basis_minus, tol);
}

}  // namespace loewner
