#pragma once

// The effect algebra [0, I]: membership, rank-one projections, the strength of
// a positive matrix along a ray, and the small 2x2 constructions used to pin
// down automorphisms.

#include <optional>
#include <variant>
#include <vector>

#include "loewner/linalg.hpp"

namespace loewner {

class Effect {
 public:
  const SymMat& mat() const noexcept { return m_; }
  std::size_t n() const noexcept { return m_.n(); }

 private:
  friend Effect make_effect(const SymMat& a, const Tolerances& tol);
  explicit Effect(SymMat m) : m_(std::move(m)) {}
  SymMat m_;
};

// Throws OutOfInterval naming the offending eigenvalue.
Effect make_effect(const SymMat& a, const Tolerances& tol = {});

// x x^t for a unit vector x. The stored vector is normalized and sign-fixed so
// that its first entry with magnitude above 1e-12 is positive.
class RankOneProjection {
 public:
  explicit RankOneProjection(std::span<const double> x);
  static RankOneProjection basis(std::size_t n, std::size_t i);

  std::size_t n() const noexcept { return x_.size(); }
  const Vector& vector() const noexcept { return x_; }
  const SymMat& mat() const noexcept { return m_; }

 private:
  Vector x_;
  SymMat m_;
};

// max { t : tP <= A } for positive semidefinite A.
double strength(const SymMat& a, const RankOneProjection& p, const Tolerances& tol = {});

struct StrengthWitness {
  RankOneProjection q;
  double t;
};

// Empty iff A <= B. Otherwise (Q, t) with tQ <= A and tQ not <= B, so the
// strength of A along Q exceeds that of B.
std::optional<StrengthWitness> strength_witness(const SymMat& a, const SymMat& b,
                                                const Tolerances& tol = {});

struct RankOneSegment {
  double t;
  RankOneProjection p;
};

// For A <= B: (t, P) with B = A + tP when B - A has rank at most one.
// Throws NotComparable when A is not below B.
std::optional<RankOneSegment> rank_one_segment(const Effect& a, const Effect& b,
                                               const Tolerances& tol = {});

struct IdentityBlock {
  std::vector<Vector> k_basis;           // orthonormal basis of span(Im P, Im Q)
  std::vector<Vector> complement_basis;  // orthonormal basis of its complement
  std::optional<SymMat> complement;      // compression of A, absent when n == 2
  double identity_defect;                // ||U^t A U - I||_F on K
  double off_block_norm;                 // ||W^t A U||_F
};

// A with P <= A, Q <= A, A <= I splits as I on K plus a contraction on K-perp.
// Throws PreconditionViolated naming the failed inequality.
IdentityBlock identity_block(const Effect& a, const RankOneProjection& p,
                             const RankOneProjection& q, const Tolerances& tol = {});

struct OrthogonalPair {
  RankOneProjection p;
  RankOneProjection q;
};

// Orthogonal P, Q with strength((1/2)P + Q, R) = s, for 1/2 < s < 1.
// The frame lives in the plane spanned by Im R and the lowest-index standard
// basis vector that is not parallel to it.
OrthogonalPair orthogonal_pair_for_strength(const RankOneProjection& r, double s);

// 2x2 only. Returns Q when A = (1/3)Q + (I - Q) for a rank-one projection Q
// with tr(PQ) = 1/2.
std::optional<RankOneProjection> one_third_decomposition(const SymMat& a,
                                                         const RankOneProjection& p,
                                                         const Tolerances& tol = {});

// Maximal elements of { D diagonal effect : D <= A } for a 2x2 effect A.
struct MaxDiagonalSet {
  struct Singleton {
    SymMat d;
  };
  struct ZeroOnly {};
  // { diag(p, q) : 0 <= p <= t, 0 <= q <= s, (t - p)(s - q) = u^2 }
  struct Curve {
    double t;
    double s;
    double u;
    bool contains(double p, double q, double slack = 1e-12) const;
  };

  std::variant<Singleton, ZeroOnly, Curve> value;

  bool is_singleton() const { return std::holds_alternative<Singleton>(value); }
  bool is_zero_only() const { return std::holds_alternative<ZeroOnly>(value); }
  bool is_curve() const { return std::holds_alternative<Curve>(value); }
};

MaxDiagonalSet maximal_diagonals(const Effect& a, const Tolerances& tol = {});

struct TwoByTwoConstants {
  SymMat j;            // diag(1, -1)
  SymMat j_sharp;      // basis_plus - basis_minus
  SymMat basis_plus;   // projection onto (1, 1)/sqrt(2)
  SymMat basis_minus;  // projection onto (1, -1)/sqrt(2)
};

const TwoByTwoConstants& two_by_two_constants();

// diag(s, t) -> s * basis_plus + t * basis_minus.
Effect sharp(const SymMat& x, const Tolerances& tol = {});

}  // namespace loewner
