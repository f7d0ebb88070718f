#include "loewner/automorphisms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "loewner/error.hpp"

namespace loewner {

namespace {

Matrix canonical_sign(Matrix t, const Tolerances& tol) {
  const double cut = tol.equality_tol * norm2(t, tol);
  for (double v : t.data()) {
    if (std::abs(v) > cut) {
      if (v < 0) t *= -1.0;
      break;
    }
  }
  return t;
}

Vector dominant_vector(const SymMat& a, const Tolerances& tol) {
  const Spectrum s = eigh(a, tol);
  return s.vector(s.eigenvalues.size() - 1);
}

void fix_sign(Vector& v) {
  for (double x : v) {
    if (std::abs(x) > 1e-12) {
      if (x < 0) {
        for (double& y : v) y = -y;
      }
      return;
    }
  }
}

// Fixed-seed effects for residual checks; independent of the test samplers.
std::vector<Effect> residual_effects(std::size_t n, int count, const Tolerances& tol) {
  std::mt19937_64 gen(0x5eed5eedULL);
  auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::vector<Effect> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    Matrix g(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = 2.0 * uniform() - 1.0;
    const Spectrum s = eigh(SymMat(g), tol);
    Vector d(n);
    for (double& v : d) v = uniform();
    const SymMat e = SymMat::congruence(s.vectors, SymMat::diagonal(d));
    out.push_back(make_effect(e, tol));
  }
  return out;
}

double residual(const EffectAutomorphism& phi, const Effect& x, const Effect& expected,
                const Tolerances& tol) {
  return (apply(phi, x, tol).mat() - expected.mat()).frobenius_norm();
}

// f applied to eigenvalues that may stray outside [0, 1] by `slack`.
std::function<double(double)> clamped_mobius(double p, double slack) {
  return [p, slack](double x) {
    if (x < -slack || x > 1.0 + slack) {
      std::ostringstream os;
      os << "eigenvalue " << x << " outside [0, 1]";
      fail(ErrorCode::DomainError, os.str());
    }
    return unit_mobius(p, std::clamp(x, 0.0, 1.0));
  };
}

}  // namespace

EffectAutomorphism EffectAutomorphism::make(const Matrix& t, const Tolerances& tol) {
  if (t.n() == 0) fail(ErrorCode::DimensionMismatch, "generator must be non-empty");
  for (double v : t.data()) {
    if (!std::isfinite(v)) fail(ErrorCode::DomainError, "generator has a non-finite entry");
  }
  if (!(std::abs(det(t)) > tol.rank_tol)) {
    fail(ErrorCode::Singular, "generator is singular");
  }
  const double delta = eigh(SymMat::gram(t), tol).min();
  std::optional<double> eps;
  if (delta < 1.0) {
    const double d = delta * (1.0 - 1e-12);
    eps = d / (1.0 - d);
  }
  return EffectAutomorphism(canonical_sign(t, tol), eps);
}

SymMat evaluate(const EffectAutomorphism& phi, const SymMat& x) {
  const std::size_t n = phi.n();
  if (x.n() != n) fail(ErrorCode::DimensionMismatch, "automorphism: dimension mismatch");
  const Matrix& t = phi.generator();
  const Matrix g = t.transpose() * t - Matrix::identity(n);
  const Matrix m = x.matrix() * g + Matrix::identity(n);
  Matrix y;
  try {
    y = solve(m, x.matrix());
  } catch (const Error&) {
    fail(ErrorCode::InternalInversionFailure, "X (T^t T - I) + I is numerically singular");
  }
  return SymMat(t * y * t.transpose());
}

Effect apply(const EffectAutomorphism& phi, const Effect& x, const Tolerances& tol) {
  const SymMat y = evaluate(phi, x.mat());
  try {
    return make_effect(y, tol);
  } catch (const Error& e) {
    fail(ErrorCode::InternalInversionFailure,
         std::string("image left [0, I] numerically: ") + e.what());
  }
}

Effect apply(const EffectAutomorphism& phi, const SymMat& x, const Tolerances& tol) {
  std::optional<Effect> e;
  try {
    e = make_effect(x, tol);
  } catch (const Error& err) {
    fail(ErrorCode::NotAnEffect, err.what());
  }
  return apply(phi, *e, tol);
}

EffectAutomorphism compose(const EffectAutomorphism& s, const EffectAutomorphism& r,
                           const Tolerances& tol) {
  if (s.n() != r.n()) fail(ErrorCode::DimensionMismatch, "compose: dimension mismatch");
  return EffectAutomorphism::make(s.generator() * r.generator(), tol);
}

EffectAutomorphism inverse(const EffectAutomorphism& phi, const Tolerances& tol) {
  return EffectAutomorphism::make(loewner::inverse(phi.generator()), tol);
}

bool equals(const EffectAutomorphism& a, const EffectAutomorphism& b, const Tolerances& tol) {
  if (a.n() != b.n()) fail(ErrorCode::DimensionMismatch, "equals: dimension mismatch");
  return (a.generator() - b.generator()).frobenius_norm() <=
         tol.equality_tol * a.generator().frobenius_norm();
}

RankOneProjection project_image(const EffectAutomorphism& phi, const RankOneProjection& p) {
  if (p.n() != phi.n()) fail(ErrorCode::DimensionMismatch, "project_image: dimension mismatch");
  return RankOneProjection(phi.generator() * p.vector());
}

std::vector<Effect> recovery_probes(std::size_t n) {
  if (n < 1) fail(ErrorCode::BadParameter, "recovery_probes: n must be positive");
  std::vector<Effect> probes;
  probes.reserve(2 * n);
  probes.push_back(make_effect(0.5 * SymMat::identity(n)));
  for (std::size_t i = 0; i < n; ++i) probes.push_back(make_effect(RankOneProjection::basis(n, i).mat()));
  for (std::size_t j = 1; j < n; ++j) {
    Vector v(n, 0.0);
    v[0] = 1.0;
    v[j] = 1.0;
    probes.push_back(make_effect(RankOneProjection(v).mat()));
  }
  return probes;
}

EffectAutomorphism recover_from_probes(std::size_t n, const std::vector<Effect>& images,
                                       const Tolerances& tol) {
  if (images.size() != 2 * n) {
    std::ostringstream os;
    os << "recovery needs " << 2 * n << " probe images, got " << images.size();
    fail(ErrorCode::DimensionMismatch, os.str());
  }
  for (const Effect& e : images) {
    if (e.n() != n) fail(ErrorCode::DimensionMismatch, "probe image has the wrong dimension");
  }

  // phi((1/2) I) = (I + (T T^t)^{-1})^{-1}, so T T^t = C (I - C)^{-1}.
  const Spectrum c = eigh(images[0].mat(), tol);
  if (!(c.min() > tol.psd_tol) || !(c.max() < 1.0 - tol.psd_tol)) {
    fail(ErrorCode::NotAutomorphism, "image of (1/2)I does not lie in the open interval (0, I)");
  }
  const SymMat m = apply_fn(c, [](double x) { return std::sqrt(x / (1.0 - x)); });
  const SymMat m_inv = apply_fn(c, [](double x) { return std::sqrt((1.0 - x) / x); });

  // columns of the orthogonal factor O in T = M O, each up to sign
  std::vector<Vector> u;
  u.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    u.push_back(normalized(m_inv.matrix() * dominant_vector(images[1 + i].mat(), tol)));
  }
  fix_sign(u[0]);
  for (std::size_t j = 1; j < n; ++j) {
    const Vector w = normalized(m_inv.matrix() * dominant_vector(images[n + j].mat(), tol));
    Vector plus(n), minus(n);
    for (std::size_t i = 0; i < n; ++i) {
      plus[i] = u[0][i] + u[j][i];
      minus[i] = u[0][i] - u[j][i];
    }
    const double align_plus = std::abs(dot(w, normalized(plus)));
    const double align_minus = std::abs(dot(w, normalized(minus)));
    if (align_minus > align_plus) {
      for (double& v : u[j]) v = -v;
    }
  }

  const Matrix o = Matrix::from_columns(u);
  const double orth_defect = (o.transpose() * o - Matrix::identity(n)).frobenius_norm();
  if (!(orth_defect <= 1e-6)) {
    std::ostringstream os;
    os << "recovered orthogonal factor fails orthogonality (defect " << orth_defect << ")";
    fail(ErrorCode::NotAutomorphism, os.str());
  }

  std::optional<EffectAutomorphism> phi;
  try {
    phi = EffectAutomorphism::make(m.matrix() * o, tol);
  } catch (const Error& e) {
    fail(ErrorCode::NotAutomorphism, std::string("recovered generator rejected: ") + e.what());
  }

  const std::vector<Effect> probes = recovery_probes(n);
  for (std::size_t k = 0; k < probes.size(); ++k) {
    double r;
    try {
      r = residual(*phi, probes[k], images[k], tol);
    } catch (const Error& e) {
      fail(ErrorCode::NotAutomorphism, std::string("recovered map failed on a probe: ") + e.what());
    }
    if (!(r <= kRecoveryResidualTol)) {
      std::ostringstream os;
      os << "recovered map misses probe " << k << " by " << r;
      fail(ErrorCode::NotAutomorphism, os.str());
    }
  }
  return *phi;
}

EffectAutomorphism recover_generator(const EffectOracle& oracle, std::size_t n,
                                     const Tolerances& tol, int residual_samples) {
  const std::vector<Effect> probes = recovery_probes(n);
  std::vector<Effect> images;
  images.reserve(probes.size());
  for (const Effect& p : probes) images.push_back(oracle(p));
  EffectAutomorphism phi = recover_from_probes(n, images, tol);

  for (const Effect& x : residual_effects(n, residual_samples, tol)) {
    const double r = residual(phi, x, oracle(x), tol);
    if (!(r <= kRecoveryResidualTol)) {
      std::ostringstream os;
      os << "recovered map deviates from the oracle by " << r;
      fail(ErrorCode::NotAutomorphism, os.str());
    }
  }
  return phi;
}

double unit_mobius(double p, double x) {
  if (!(p < 1.0)) fail(ErrorCode::BadParameter, "unit_mobius: p must be < 1");
  if (!(x >= 0.0 && x <= 1.0)) fail(ErrorCode::BadParameter, "unit_mobius: x must lie in [0, 1]");
  return x / (p * x + (1.0 - p));
}

void MobiusForm::validate(const Tolerances& tol) const {
  if (!(p < 1.0) || !(q < 1.0)) fail(ErrorCode::BadParameter, "Mobius form needs p, q < 1");
  if (t.n() == 0) fail(ErrorCode::BadParameter, "Mobius form needs a generator");
  if (norm2(t, tol) > 1.0 + tol.equality_tol) {
    fail(ErrorCode::BadParameter, "Mobius form generator must be a contraction");
  }
  if (!(sigma_min(t, tol) > tol.rank_tol)) {
    fail(ErrorCode::BadParameter, "Mobius form generator must be invertible");
  }
}

Effect mobius_form_apply(const MobiusForm& form, const Effect& x, const Tolerances& tol) {
  form.validate(tol);
  if (x.n() != form.t.n()) fail(ErrorCode::DimensionMismatch, "Mobius form: dimension mismatch");
  const double slack = 3.0 * tol.equality_tol + tol.psd_tol;
  const auto fp = clamped_mobius(form.p, slack);
  const auto fq = clamped_mobius(form.q, slack);

  const Spectrum outer = eigh(SymMat::congruence(form.t, SymMat::identity(form.t.n())), tol);
  const double floor = tol.rank_tol;
  const SymMat scale = apply_fn(outer, [&](double v) { return 1.0 / std::sqrt(std::max(fp(v), floor)); });
  const SymMat inner = apply_fn(SymMat::congruence(form.t, x.mat()), fp, tol);
  const SymMat y = apply_fn(SymMat::congruence(scale.matrix(), inner), fq, tol);
  return make_effect(y, tol);
}

Effect mobius_form_apply(const MobiusForm& form, const SymMat& x, const Tolerances& tol) {
  std::optional<Effect> e;
  try {
    e = make_effect(x, tol);
  } catch (const Error& err) {
    fail(ErrorCode::NotAnEffect, err.what());
  }
  return mobius_form_apply(form, *e, tol);
}

EffectAutomorphism mobius_form_to_canonical(const MobiusForm& form, const Tolerances& tol) {
  form.validate(tol);
  return recover_generator([&](const Effect& x) { return mobius_form_apply(form, x, tol); },
                           form.t.n(), tol, 20);
}

}  // namespace loewner
