#include "loewner/intervals.hpp"

#include <cmath>
#include <sstream>

#include "loewner/error.hpp"

namespace loewner {

namespace {

bool is_exact_zero(const SymMat& s) {
  for (double v : s.data())
    if (v != 0.0) return false;
  return true;
}

bool is_exact_identity(const Matrix& t) {
  for (std::size_t i = 0; i < t.n(); ++i)
    for (std::size_t j = 0; j < t.n(); ++j)
      if (t(i, j) != (i == j ? 1.0 : 0.0)) return false;
  return true;
}

void push_translate(MapChain& c, SymMat s) {
  if (!is_exact_zero(s)) c.push(Translate{std::move(s)});
}

void push_congruence(MapChain& c, Matrix t) {
  if (!is_exact_identity(t)) c.push(Congruence{std::move(t)});
}

// X -> (I - X)^{-1} - I, taking [0, I) onto [0, inf) and (0, I) onto (0, inf)
void push_unit_to_cone(MapChain& c, std::size_t n) {
  c.push(Negate{});
  c.push(Translate{SymMat::identity(n)});
  c.push(Invert{});
  c.push(Translate{-SymMat::identity(n)});
}

// X -> I - X^{-1}, taking (0, I] onto (-inf, 0]
void push_unit_to_negative_cone(MapChain& c, std::size_t n) {
  c.push(Invert{});
  c.push(Negate{});
  c.push(Translate{SymMat::identity(n)});
}

}  // namespace

const SymMat& Endpoint::matrix() const {
  if (!a_) fail(ErrorCode::InvalidSpec, "infinite endpoint has no matrix");
  return *a_;
}

IntervalSpec::IntervalSpec(std::size_t n, Endpoint lower, Endpoint upper, const Tolerances& tol)
    : n_(n), lower_(std::move(lower)), upper_(std::move(upper)) {
  if (n_ == 0) fail(ErrorCode::InvalidSpec, "interval dimension must be positive");
  if (lower_.kind() == Endpoint::Kind::PlusInfinity) {
    fail(ErrorCode::InvalidSpec, "lower endpoint cannot be +infinity");
  }
  if (upper_.kind() == Endpoint::Kind::MinusInfinity) {
    fail(ErrorCode::InvalidSpec, "upper endpoint cannot be -infinity");
  }
  for (const Endpoint* e : {&lower_, &upper_}) {
    if (e->is_finite() && e->matrix().n() != n_) {
      fail(ErrorCode::InvalidSpec, "endpoint dimension does not match the interval");
    }
  }
  if (lower_.is_finite() && upper_.is_finite() &&
      !loewner_lt(lower_.matrix(), upper_.matrix(), tol)) {
    fail(ErrorCode::InvalidSpec, "finite endpoints must satisfy lower < upper");
  }
}

bool IntervalSpec::contains(const SymMat& x, const Tolerances& tol) const {
  if (x.n() != n_) fail(ErrorCode::DimensionMismatch, "interval membership: dimension mismatch");
  if (lower_.is_finite()) {
    const bool ok = lower_.is_closed() ? loewner_le(lower_.matrix(), x, tol)
                                       : loewner_lt(lower_.matrix(), x, tol);
    if (!ok) return false;
  }
  if (upper_.is_finite()) {
    const bool ok = upper_.is_closed() ? loewner_le(x, upper_.matrix(), tol)
                                       : loewner_lt(x, upper_.matrix(), tol);
    if (!ok) return false;
  }
  return true;
}

IntervalSpec IntervalSpec::unit(std::size_t n) {
  return {n, Endpoint::closed(SymMat::zero(n)), Endpoint::closed(SymMat::identity(n))};
}
IntervalSpec IntervalSpec::positive_closed(std::size_t n) {
  return {n, Endpoint::closed(SymMat::zero(n)), Endpoint::plus_infinity()};
}
IntervalSpec IntervalSpec::negative_closed(std::size_t n) {
  return {n, Endpoint::minus_infinity(), Endpoint::closed(SymMat::zero(n))};
}
IntervalSpec IntervalSpec::positive_open(std::size_t n) {
  return {n, Endpoint::open(SymMat::zero(n)), Endpoint::plus_infinity()};
}
IntervalSpec IntervalSpec::whole(std::size_t n) {
  return {n, Endpoint::minus_infinity(), Endpoint::plus_infinity()};
}

std::string_view to_string(CanonicalClass c) noexcept {
  switch (c) {
    case CanonicalClass::UnitInterval: return "unit_interval";
    case CanonicalClass::PositiveClosed: return "positive_closed";
    case CanonicalClass::NegativeClosed: return "negative_closed";
    case CanonicalClass::PositiveOpen: return "positive_open";
    case CanonicalClass::Whole: return "whole";
  }
  return "unknown";
}

IntervalSpec canonical_representative(CanonicalClass c, std::size_t n) {
  switch (c) {
    case CanonicalClass::UnitInterval: return IntervalSpec::unit(n);
    case CanonicalClass::PositiveClosed: return IntervalSpec::positive_closed(n);
    case CanonicalClass::NegativeClosed: return IntervalSpec::negative_closed(n);
    case CanonicalClass::PositiveOpen: return IntervalSpec::positive_open(n);
    case CanonicalClass::Whole: return IntervalSpec::whole(n);
  }
  fail(ErrorCode::InvalidSpec, "unknown canonical class");
}

CanonicalClass classify(const IntervalSpec& spec) {
  const bool lower_closed = spec.lower().is_finite() && spec.lower().is_closed();
  const bool upper_closed = spec.upper().is_finite() && spec.upper().is_closed();
  if (lower_closed && upper_closed) return CanonicalClass::UnitInterval;
  if (lower_closed) return CanonicalClass::PositiveClosed;
  if (upper_closed) return CanonicalClass::NegativeClosed;
  if (!spec.lower().is_finite() && !spec.upper().is_finite()) return CanonicalClass::Whole;
  return CanonicalClass::PositiveOpen;
}

bool reverses_order(const PrimitiveMap& step) noexcept {
  return std::holds_alternative<Invert>(step) || std::holds_alternative<Negate>(step);
}

MapChain::MapChain(std::vector<PrimitiveMap> steps) {
  for (auto& s : steps) push(std::move(s));
}

void MapChain::push(PrimitiveMap step) {
  if (const auto* c = std::get_if<Congruence>(&step); c && !(std::abs(det(c->t)) > 0.0)) {
    fail(ErrorCode::InvalidSpec, "congruence step needs an invertible matrix");
  }
  odd_ ^= reverses_order(step);
  steps_.push_back(std::move(step));
}

MapChain build_chain(const IntervalSpec& spec, const Tolerances& tol) {
  const std::size_t n = spec.n();
  const Endpoint& lo = spec.lower();
  const Endpoint& hi = spec.upper();
  MapChain c;

  if (lo.is_finite() && hi.is_finite()) {
    const SymMat& a = lo.matrix();
    const Spectrum d = eigh(hi.matrix() - a, tol);
    push_translate(c, -a);
    push_congruence(c, apply_fn(d, [](double x) { return 1.0 / std::sqrt(x); }).matrix());
    if (lo.is_closed() && !hi.is_closed()) push_unit_to_cone(c, n);
    if (!lo.is_closed() && hi.is_closed()) push_unit_to_negative_cone(c, n);
    if (!lo.is_closed() && !hi.is_closed()) push_unit_to_cone(c, n);
    return c;
  }
  if (lo.is_finite()) {
    push_translate(c, -lo.matrix());
    return c;
  }
  if (hi.is_finite()) {
    push_translate(c, -hi.matrix());
    if (!hi.is_closed()) {
      // (-inf, 0) -> (0, inf) via X -> (-X)^{-1}
      c.push(Negate{});
      c.push(Invert{});
    }
    return c;
  }
  return c;
}

SymMat apply_steps(const MapChain& chain, const SymMat& x, const Tolerances& tol) {
  SymMat y = x;
  for (const PrimitiveMap& step : chain.steps()) {
    if (const auto* t = std::get_if<Translate>(&step)) {
      if (t->shift.n() != y.n()) fail(ErrorCode::DimensionMismatch, "translate: dimension mismatch");
      y += t->shift;
    } else if (const auto* c = std::get_if<Congruence>(&step)) {
      if (c->t.n() != y.n()) fail(ErrorCode::DimensionMismatch, "congruence: dimension mismatch");
      y = SymMat::congruence(c->t, y);
    } else if (std::holds_alternative<Invert>(step)) {
      try {
        y = inv(y, tol);
      } catch (const Error&) {
        fail(ErrorCode::IntermediateSingular, "chain step X -> X^{-1} met a singular matrix");
      }
    } else {
      y = -y;
    }
  }
  return y;
}

SymMat apply_chain(const MapChain& chain, const SymMat& x, const IntervalSpec& domain,
                   const Tolerances& tol) {
  if (x.n() != domain.n()) fail(ErrorCode::DimensionMismatch, "apply_chain: dimension mismatch");
  if (!domain.contains(x, tol)) fail(ErrorCode::OutOfDomain, "apply_chain: input outside the domain");
  return apply_steps(chain, x, tol);
}

MapChain invert_chain(const MapChain& chain) {
  MapChain out;
  const auto& steps = chain.steps();
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    if (const auto* t = std::get_if<Translate>(&*it)) {
      out.push(Translate{-t->shift});
    } else if (const auto* c = std::get_if<Congruence>(&*it)) {
      out.push(Congruence{inverse(c->t)});
    } else {
      out.push(*it);
    }
  }
  return out;
}

MapChain compose_chains(const MapChain& outer, const MapChain& inner) {
  MapChain out = inner;
  for (const PrimitiveMap& s : outer.steps()) out.push(s);
  return out;
}

MapChain iso_between(const IntervalSpec& from, const IntervalSpec& to, const Tolerances& tol) {
  if (from.n() != to.n()) fail(ErrorCode::DimensionMismatch, "iso_between: dimension mismatch");
  const CanonicalClass a = classify(from);
  const CanonicalClass b = classify(to);
  if (a != b) {
    std::ostringstream os;
    os << "intervals are not order isomorphic: " << to_string(a) << " vs " << to_string(b);
    fail(ErrorCode::NotIsomorphic, os.str());
  }
  return compose_chains(invert_chain(build_chain(to, tol)), build_chain(from, tol));
}

SymMat cone_automorphism_apply(const Matrix& t, const SymMat& x, Cone cone, const Tolerances& tol) {
  if (t.n() != x.n()) fail(ErrorCode::DimensionMismatch, "cone automorphism: dimension mismatch");
  if (!(std::abs(det(t)) > 0.0)) fail(ErrorCode::Singular, "cone automorphism needs invertible T");
  const SymMat zero = SymMat::zero(x.n());
  const bool inside = cone == Cone::Closed ? loewner_le(zero, x, tol) : loewner_lt(zero, x, tol);
  if (!inside) fail(ErrorCode::OutOfDomain, "cone automorphism: input outside the cone");
  return SymMat::congruence(t, x);
}

SymMat affine_automorphism_apply(const AffineAutomorphism& a, const SymMat& x) {
  if (a.t.n() != x.n() || a.shift.n() != x.n()) {
    fail(ErrorCode::DimensionMismatch, "affine automorphism: dimension mismatch");
  }
  return SymMat::congruence(a.t, x) + a.shift;
}

}  // namespace loewner
