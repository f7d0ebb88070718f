#pragma once

// Matrix intervals under the Loewner order, their five isomorphism classes,
// and explicit isomorphism chains built from translations, congruences,
// inversion and negation.

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "loewner/linalg.hpp"

namespace loewner {

class Endpoint {
 public:
  enum class Kind { Finite, PlusInfinity, MinusInfinity };

  static Endpoint closed(SymMat a) { return Endpoint(Kind::Finite, true, std::move(a)); }
  static Endpoint open(SymMat a) { return Endpoint(Kind::Finite, false, std::move(a)); }
  static Endpoint plus_infinity() { return Endpoint(Kind::PlusInfinity, false, std::nullopt); }
  static Endpoint minus_infinity() { return Endpoint(Kind::MinusInfinity, false, std::nullopt); }

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::Finite; }
  bool is_closed() const noexcept { return closed_; }
  // Only valid for finite endpoints.
  const SymMat& matrix() const;

 private:
  Endpoint(Kind k, bool closed, std::optional<SymMat> a)
      : kind_(k), closed_(closed), a_(std::move(a)) {}

  Kind kind_;
  bool closed_;
  std::optional<SymMat> a_;
};

class IntervalSpec {
 public:
  // Throws InvalidSpec: mismatched dimensions, +inf as lower or -inf as upper
  // end, or finite ends without lower < upper.
  IntervalSpec(std::size_t n, Endpoint lower, Endpoint upper, const Tolerances& tol = {});

  std::size_t n() const noexcept { return n_; }
  const Endpoint& lower() const noexcept { return lower_; }
  const Endpoint& upper() const noexcept { return upper_; }

  bool contains(const SymMat& x, const Tolerances& tol = {}) const;

  // [0, I] and friends.
  static IntervalSpec unit(std::size_t n);
  static IntervalSpec positive_closed(std::size_t n);
  static IntervalSpec negative_closed(std::size_t n);
  static IntervalSpec positive_open(std::size_t n);
  static IntervalSpec whole(std::size_t n);

 private:
  std::size_t n_;
  Endpoint lower_;
  Endpoint upper_;
};

enum class CanonicalClass { UnitInterval, PositiveClosed, NegativeClosed, PositiveOpen, Whole };

std::string_view to_string(CanonicalClass c) noexcept;
IntervalSpec canonical_representative(CanonicalClass c, std::size_t n);

CanonicalClass classify(const IntervalSpec& spec);

struct Translate {
  SymMat shift;
};
struct Congruence {
  Matrix t;
};
struct Invert {};
struct Negate {};

using PrimitiveMap = std::variant<Translate, Congruence, Invert, Negate>;

bool reverses_order(const PrimitiveMap& step) noexcept;

class MapChain {
 public:
  MapChain() = default;
  explicit MapChain(std::vector<PrimitiveMap> steps);

  const std::vector<PrimitiveMap>& steps() const noexcept { return steps_; }
  bool empty() const noexcept { return steps_.empty(); }
  // true when the chain reverses order (odd number of reversing steps)
  bool parity() const noexcept { return odd_; }

  // Appends `step` to be applied after the existing steps.
  void push(PrimitiveMap step);

 private:
  std::vector<PrimitiveMap> steps_;
  bool odd_ = false;
};

// Order isomorphism (even parity) from `spec` onto the canonical representative
// of classify(spec). Identity steps are omitted.
MapChain build_chain(const IntervalSpec& spec, const Tolerances& tol = {});

// Evaluates steps left to right. Throws OutOfDomain if x is not in `domain`,
// IntermediateSingular if an Invert step meets a singular value.
SymMat apply_chain(const MapChain& chain, const SymMat& x, const IntervalSpec& domain,
                   const Tolerances& tol = {});
// No domain check.
SymMat apply_steps(const MapChain& chain, const SymMat& x, const Tolerances& tol = {});

MapChain invert_chain(const MapChain& chain);
// outer o inner: the steps of `inner` followed by those of `outer`.
MapChain compose_chains(const MapChain& outer, const MapChain& inner);

// Throws NotIsomorphic when the classes differ.
MapChain iso_between(const IntervalSpec& from, const IntervalSpec& to, const Tolerances& tol = {});

enum class Cone { Closed, Open };

// T X T^t on [0, inf) or (0, inf). Throws OutOfDomain.
SymMat cone_automorphism_apply(const Matrix& t, const SymMat& x, Cone cone = Cone::Closed,
                               const Tolerances& tol = {});

struct AffineAutomorphism {
  Matrix t;
  SymMat shift;
};

// T X T^t + S on the whole space.
SymMat affine_automorphism_apply(const AffineAutomorphism& a, const SymMat& x);

}  // namespace loewner
