#pragma once

// Order automorphisms of the effect algebra [0, I]:
//
//   phi_T(X) = T (X (T^t T - I) + I)^{-1} X T^t
//
// for an invertible real generator T, unique up to sign.

#include <functional>
#include <optional>
#include <vector>

#include "loewner/effects.hpp"
#include "loewner/linalg.hpp"

namespace loewner {

class EffectAutomorphism {
 public:
  // Throws Singular when |det T| <= rank_tol. The stored generator has its
  // first entry of magnitude above equality_tol * ||T||_2 (row-major) positive.
  static EffectAutomorphism make(const Matrix& t, const Tolerances& tol = {});
  static EffectAutomorphism identity(std::size_t n) { return make(Matrix::identity(n)); }

  std::size_t n() const noexcept { return t_.n(); }
  const Matrix& generator() const noexcept { return t_; }

  // X (T^t T - I) + I stays invertible on [0, (1 + eps) I). Empty when the
  // extension is unbounded (lambda_min(T^t T) >= 1).
  std::optional<double> epsilon() const noexcept { return epsilon_; }

 private:
  EffectAutomorphism(Matrix t, std::optional<double> eps) : t_(std::move(t)), epsilon_(eps) {}

  Matrix t_;
  std::optional<double> epsilon_;
};

// Raw evaluation of the formula for any X where X (T^t T - I) + I is
// invertible; used on the extended domain. Throws InternalInversionFailure.
SymMat evaluate(const EffectAutomorphism& phi, const SymMat& x);

Effect apply(const EffectAutomorphism& phi, const Effect& x, const Tolerances& tol = {});
// Same, but checks membership first and throws NotAnEffect.
Effect apply(const EffectAutomorphism& phi, const SymMat& x, const Tolerances& tol = {});

// phi_S o phi_R = phi_{SR}
EffectAutomorphism compose(const EffectAutomorphism& s, const EffectAutomorphism& r,
                           const Tolerances& tol = {});
EffectAutomorphism inverse(const EffectAutomorphism& phi, const Tolerances& tol = {});
bool equals(const EffectAutomorphism& a, const EffectAutomorphism& b, const Tolerances& tol = {});

// Image of the ray of P: the projection onto T x where x spans Im P.
RankOneProjection project_image(const EffectAutomorphism& phi, const RankOneProjection& p);

using EffectOracle = std::function<Effect(const Effect&)>;

// (1/2)I, the n coordinate projections, then the n - 1 projections onto
// (e_1 + e_j)/sqrt(2), j = 2..n.
std::vector<Effect> recovery_probes(std::size_t n);

// Rebuilds T from the images of recovery_probes(n). Every probe image must be
// reproduced within 1e-6 (Frobenius) or NotAutomorphism is thrown.
EffectAutomorphism recover_from_probes(std::size_t n, const std::vector<Effect>& images,
                                       const Tolerances& tol = {});

// Queries `oracle` sequentially on the probe set and then on `residual_samples`
// deterministic pseudo-random effects, all of which must match within 1e-6.
EffectAutomorphism recover_generator(const EffectOracle& oracle, std::size_t n,
                                     const Tolerances& tol = {}, int residual_samples = 10);

inline constexpr double kRecoveryResidualTol = 1e-6;

// x / (p x + 1 - p): an increasing bijection of [0, 1] for p < 1.
double unit_mobius(double p, double x);

// phi(X) = f_q( f_p(T T^t)^{-1/2} f_p(T X T^t) f_p(T T^t)^{-1/2} ) with
// f_p = unit_mobius(p, .), p, q < 1, and T an invertible contraction.
struct MobiusForm {
  double p = 0.0;
  double q = 0.0;
  Matrix t;

  void validate(const Tolerances& tol = {}) const;
};

Effect mobius_form_apply(const MobiusForm& form, const Effect& x, const Tolerances& tol = {});
Effect mobius_form_apply(const MobiusForm& form, const SymMat& x, const Tolerances& tol = {});

// Converts to the canonical generator by black-box recovery; the result is
// checked against the form on 20 effects.
EffectAutomorphism mobius_form_to_canonical(const MobiusForm& form, const Tolerances& tol = {});

}  // namespace loewner
