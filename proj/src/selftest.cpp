#include "loewner/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <variant>

#include "loewner/automorphisms.hpp"
#include "loewner/effects.hpp"
#include "loewner/error.hpp"
#include "loewner/intervals.hpp"
#include "loewner/linalg.hpp"
#include "loewner/oracle.hpp"

namespace loewner {

namespace {

// Tracks the worst error seen against a fixed bound.
struct Check {
  double bound;
  double worst = 0.0;
  int trials = 0;
  int failures = 0;

  void observe(double err) {
    ++trials;
    worst = std::max(worst, err);
    if (!(err <= bound)) ++failures;
  }
  void require(bool ok) {
    ++trials;
    if (!ok) {
      ++failures;
      worst = std::max(worst, static_cast<double>(failures));
    }
  }
};

PropertyResult finish(std::string name, const Check& c) {
  PropertyResult r;
  r.name = std::move(name);
  r.trials = c.trials;
  r.worst = c.worst;
  r.passed = c.failures == 0;
  std::ostringstream os;
  os << "bound " << c.bound << ", failures " << c.failures;
  r.detail = os.str();
  return r;
}

double frob(const SymMat& a) { return a.frobenius_norm(); }

Matrix solve_sym(const SymMat& x, const Matrix& t) {
  const std::size_t n = x.n();
  const Matrix g = t.transpose() * t - Matrix::identity(n);
  return solve(x.matrix() * g + Matrix::identity(n), x.matrix());
}

using Property = PropertyResult (*)(Sampler&, int);

PropertyResult eigh_reconstruction(Sampler& s, int trials) {
  Check c{1e-10};
  for (int k = 0; k < trials; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(s.uniform() * 7.0);
    const SymMat a = s.symmetric(n);
    const Spectrum sp = eigh(a);
    const SymMat rec = SymMat::congruence(sp.vectors, SymMat::diagonal(sp.eigenvalues));
    c.observe(frob(a - rec) / (1.0 + frob(a)));
    c.observe((sp.vectors.transpose() * sp.vectors - Matrix::identity(n)).frobenius_norm());
  }
  return finish("eigh_reconstruction", c);
}

PropertyResult loewner_partial_order(Sampler& s, int trials) {
  Check c{0.0};
  for (int k = 0; k < trials; ++k) {
    const std::size_t n = s.dimension();
    const auto [x, y] = s.comparable_pair(n);
    const SymMat z = y.mat() + s.psd(n, 1);
    c.require(loewner_le(x.mat(), x.mat()));
    c.require(loewner_le(x.mat(), y.mat()) && loewner_le(y.mat(), z) && loewner_le(x.mat(), z));
    if (loewner_le(y.mat(), x.mat())) {
      c.require(frob(y.mat() - x.mat()) <= 1e-4);
    }
  }
  return finish("loewner_partial_order", c);
}

PropertyResult sqrt_psd_square(Sampler& s, int trials) {
  Check c{1e-9};
  for (int k = 0; k < trials; ++k) {
    const std::size_t n = s.dimension();
    Vector l(n);
    for (double& v : l) v = std::pow(10.0, s.uniform(-6.0, 0.0));
    const SymMat a = SymMat::congruence(s.orthogonal(n), SymMat::diagonal(l));
    const SymMat r = sqrt_psd(a);
    c.observe(frob(SymMat(r.matrix() * r.matrix()) - a) / (1.0 + frob(a)));
  }
  return finish("sqrt_psd_square", c);
}

PropertyResult functional_calculus(Sampler& s, int trials) {
  Check c{1e-9};
  Check id{1e-10};
  auto f = [](double x) { return x * x * x + x; };
  auto g = [](double x) { return std::exp(x); };
  for (int k = 0; k < trials; ++k) {
    const SymMat a = s.effect(s.dimension()).mat();
    id.observe(frob(apply_fn(a, [](double x) { return x; }) - a));
    const SymMat lhs = apply_fn(apply_fn(a, f), g);
    const SymMat rhs = apply_fn(a, [&](double x) { return g(f(x)); });
    c.observe(frob(lhs - rhs));
  }
  PropertyResult r = finish("functional_calculus", c);
  r.passed = r.passed && id.failures == 0;
  r.worst = std::max(r.worst, id.worst);
  return r;
}

PropertyResult strength_against_bisection(Sampler& s, int trials) {
  Check c{1e-6};
  Tolerances tight;
  tight.psd_tol = 1e-12;
  for (int k = 0; k < trials; ++k) {
    const std::size_t n = s.dimension();
    const std::size_t rank = 1 + static_cast<std::size_t>(s.uniform() * static_cast<double>(n));
    const SymMat a = s.psd(n, rank);
    RankOneProjection p = s.projection(n);
    if (rank < n && s.coin()) {
      // a direction inside range(A)
      p = RankOneProjection(a.matrix() * s.unit_vector(n));
    }
    c.observe(std::abs(strength(a, p) - strength_bisection(a, p, tight)));
  }
  return finish("strength_against_bisection", c);
}

PropertyResult strength_monotone(Sampler& s, int trials) {
  Check c{1e-8};
  for (int k = 0; k < trials; ++k) {
    const std::size_t n = s.dimension();
    const auto [x, y] = s.comparable_pair(n);
    for (int j = 0; j < 10; ++j) {
      const RankOneProjection p = s.projection(n);
      c.observe(std::max(0.0, strength(x.mat(), p) - strength(y.mat(), p)));
    }
  }
  return finish("strength_monotone", c);
}

PropertyResult strength_witness_converse(Sampler& s, int trials) {
  Check c{0.0};
  for (int k = 0; k < trials; ++k) {
    const std::size_t n = s.dimension();
    const SymMat a = s.effect(n).mat();
    const SymMat b = s.effect(n).mat();
    const auto w = strength_witness(a, b);
    c.require(w.has_value() != loewner_le(a, b));
    if (w) {
      const SymMat tq = w->t * w->q.mat();
      c.require(loewner_le(tq, a) && !loewner_le(tq, b));
    }
  }
  return finish("strength_witness_converse", c);
}

PropertyResult strength_frame(Sampler& s, int trials) {
  Check c{1e-8};
  for (int k = 0; k < trials; ++k) {
    const std::size_t n = s.dimension();
    const RankOneProjection r = s.projection(n);
    const double target = s.uniform(0.51, 0.99);
    const OrthogonalPair pq = orthogonal_pair_for_strength(r, target);
    const SymMat a = 0.5 * pq.p.mat() + pq.q.mat();
    c.observe(std::abs(strength(a, r) - target));
    c.observe(std::abs(dot(pq.p.vector(), pq.q.vector())));
  }
  return finish("strength_frame", c);
}

PropertyResult one_third(Sampler& s, int trials) {
  Check c{0.0};
  const SymMat id = SymMat::identity(2);
  auto conditions_hold = [&](const SymMat& a, const RankOneProjection& p) {
    for (const SymMat& m : {a - 0.5 * p.mat(), a - 0.5 * (id - p.mat()), id - a}) {
      const Spectrum sp = eigh(m);
      if (sp.min() < -1e-9 || sp.min() > 1e-9) return false;
    }
    return true;
  };
  for (int k = 0; k < trials; ++k) {
    const RankOneProjection p = s.projection(2);
    // Q at 45 degrees to P gives tr(PQ) = 1/2
    const double sign = s.coin() ? 1.0 : -1.0;
    const Vector& x = p.vector();
    const RankOneProjection q(Vector{x[0] + sign * x[1], x[1] - sign * x[0]});
    const SymMat good = (1.0 / 3.0) * q.mat() + (id - q.mat());
    const auto found = one_third_decomposition(good, p);
    c.require(found.has_value() && conditions_hold(good, p) &&
              frob(found->mat() - q.mat()) <= 1e-8);
    const SymMat other = s.effect(2).mat();
    c.require(one_third_decomposition(other, p).has_value() == conditions_hold(other, p));
  }
  return finish("one_third_decomposition", c);
}

PropertyResult rank_one_segments(Sampler& s, int trials) {
  Check c{0.0};
  for (int k = 0; k < trials; ++k) {
    const std::size_t n = s.dimension();
    const auto [a, b] = s.comparable_pair(n);
    const auto seg = rank_one_segment(a, b);
    if (seg) {
      for (int j = 0; j < 30; ++j) {
        const double p = s.uniform(0.0, seg->t);
        const double q = s.uniform(0.0, seg->t);
        const SymMat cm = a.mat() + p * seg->p.mat();
        const SymMat dm = a.mat() + q * seg->p.mat();
        c.require(loewner_le(cm, dm) || loewner_le(dm, cm));
      }
    } else {
      // two distinct rank-one lower bounds of B - A
      const Spectrum d = eigh(b.mat() - a.mat());
      const SymMat cm = a.mat() + d.eigenvalues[n - 1] * SymMat::outer(d.vector(n - 1));
      const SymMat dm = a.mat() + d.eigenvalues[n - 2] * SymMat::outer(d.vector(n - 2));
      c.require(!loewner_le(cm, dm) && !loewner_le(dm, cm));
    }
  }
  return finish("rank_one_segments", c);
}

PropertyResult strength_above_half(Sampler& s, int trials) {
  Check c{0.0};
  for (int k = 0; k < trials; ++k) {
    const double sv = s.uniform(0.5, 1.0) + 1e-6;
    const SymMat a = SymMat::diagonal({std::min(sv, 1.0), 1.0});
    c.require(strength(a, s.projection(2)) > 0.5);
  }
  Check edge{1e-12};
  edge.observe(std::abs(strength(SymMat::diagonal({0.5, 1.0}), RankOneProjection::basis(2, 0)) - 0.5));
  PropertyResult r = finish("strength_above_half", c);
  r.passed = r.passed && edge.failures == 0;
  return r;
}

PropertyResult maximal_diagonal_curve(Sampler& s, int trials) {
  Check c{0.0};
  for (int k = 0; k < trials; ++k) {
    const Effect a = s.interior_effect(2);
    const MaxDiagonalSet set = maximal_diagonals(a);
    if (!set.is_curve()) continue;
    const auto& cv = std::get<MaxDiagonalSet::Curve>(set.value);
    // a point on the curve is a maximal diagonal effect below A
    const double p = s.uniform(0.0, cv.t - cv.u * cv.u / cv.s);
    const double q = cv.s - cv.u * cv.u / (cv.t - p);
    const SymMat d = SymMat::diagonal({p, q});
    Tolerances tol;
    tol.psd_tol = 1e-8;
    c.require(cv.contains(p, q, 1e-9) && loewner_le(d, a.mat(), tol));
    c.require(!loewner_le(d + 1e-4 * SymMat::identity(2), a.mat()));
  }
  return finish("maximal_diagonal_curve", c);
}

PropertyResult automorphism_order(Sampler& s, int trials) {
  Check c{0.0};
  Tolerances tol;
  tol.psd_tol = 1e-8;
  for (int k = 0; k < trials; ++k) {
    const std::size_t n = s.dimension();
    const auto phi = EffectAutomorphism::make(s.invertible(n));
    const auto [x, y] = s.comparable_pair(n);
    c.require(loewner_le(apply(phi, x).mat(), apply(phi, y).mat(), tol));
  }
  return finish("automorphism_order", c);
}

PropertyResult automorphism_group_law(Sampler& s, int trials) {
  Check c{1e-8};
  for (int k = 0; k < trials; ++k) {
    const std::size_t n = s.dimension();
    const auto phi_s = EffectAutomorphism::make(s.invertible(n));
    const auto phi_r = EffectAutomorphism::make(s.invertible(n));
    const Effect x = s.effect(n);
    const Effect lhs = apply(compose(phi_s, phi_r), x);
    const Effect rhs = apply(phi_s, apply(phi_r, x));
    c.observe(frob(lhs.mat() - rhs.mat()));
    c.require(equals(compose(phi_s, inverse(phi_s)), EffectAutomorphism::identity(n)));
  }
  return finish("automorphism_group_law", c);
}

PropertyResult automorphism_fixed_points(Sampler& s, int trials) {
  Check c{1e-10};
  for (int k = 0; k < trials; ++k) {
    const std::size_t n = s.dimension();
    const auto phi = EffectAutomorphism::make(s.invertible(n));
    c.observe(frob(apply(phi, SymMat::zero(n)).mat()));
    c.observe(frob(apply(phi, SymMat::identity(n)).mat() - SymMat::identity(n)));
  }
  return finish("automorphism_fixed_points", c);
}

PropertyResult automorphism_interior(Sampler& s, int trials) {
  Check c{0.0};
  for (int k = 0; k < trials; ++k) {
    const std::size_t n = s.dimension();
    const auto phi = EffectAutomorphism::make(s.invertible(n));
    const SymMat y = apply(phi, s.interior_effect(n)).mat();
    c.require(loewner_lt(SymMat::zero(n), y) && loewner_lt(y, SymMat::identity(n)));
    const double eps = phi.epsilon().value_or(2.0);
    const SymMat x = (1.0 + eps / 2.0) * s.effect(n).mat();
    const Matrix g = phi.generator().transpose() * phi.generator() - Matrix::identity(n);
    const double smin = sigma_min(x.matrix() * g + Matrix::identity(n));
    c.require(smin > 1e-12 && std::isfinite(1.0 / smin));
  }
  return finish("automorphism_interior", c);
}

PropertyResult projection_law(Sampler& s, int trials) {
  Check c{1e-8};
  Check angle{1e-6};
  for (int k = 0; k < trials; ++k) {
    const std::size_t n = s.dimension();
    const auto phi = EffectAutomorphism::make(s.invertible(n));
    const std::size_t rank = s.coin() ? 1 : 2;
    const SymMat p = s.projection(n, rank);
    const SymMat img = apply(phi, p).mat();
    c.observe(frob(SymMat(img.matrix() * img.matrix()) - img));

    const Spectrum sp = eigh(img);
    const Spectrum ps = eigh(p);
    std::vector<Vector> top, mapped;
    for (std::size_t j = 0; j < rank; ++j) {
      top.push_back(sp.vector(n - 1 - j));
      mapped.push_back(phi.generator() * ps.vector(n - 1 - j));
    }
    // orthonormalize T(Im P)
    for (std::size_t j = 0; j < mapped.size(); ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        const double d = dot(mapped[i], mapped[j]);
        for (std::size_t r = 0; r < n; ++r) mapped[j][r] -= d * mapped[i][r];
      }
      mapped[j] = normalized(mapped[j]);
    }
    angle.observe(principal_angle(top, mapped));
  }
  PropertyResult r = finish("projection_law", c);
  r.passed = r.passed && angle.failures == 0;
  r.worst = std::max(r.worst, angle.worst);
  return r;
}

PropertyResult self_adjointness(Sampler& s, int trials) {
  Check c{1e-9};
  for (int k = 0; k < trials; ++k) {
    const std::size_t n = s.dimension();
    const Matrix t = s.invertible(n);
    const Matrix y = solve_sym(s.effect(n).mat(), t);
    c.observe((y - y.transpose()).frobenius_norm());
  }
  return finish("self_adjointness", c);
}

PropertyResult generator_recovery(Sampler& s, int trials) {
  Check c{0.0};
  for (int k = 0; k < std::min(trials, 20); ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(s.uniform() * 4.0);
    const auto phi = EffectAutomorphism::make(s.invertible(n));
    const auto back = recover_generator([&](const Effect& x) { return apply(phi, x); }, n);
    c.require(equals(back, phi));
  }
  return finish("generator_recovery", c);
}

PropertyResult mobius_bridge(Sampler& s, int trials) {
  Check c{0.0};
  for (int k = 0; k < std::min(trials, 10); ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(s.uniform() * 3.0);
    const MobiusForm form{s.uniform(-2.0, 0.9), s.uniform(-2.0, 0.9), s.contraction(n)};
    const auto [x, y] = s.comparable_pair(n);
    const Effect fx = mobius_form_apply(form, x);
    const Effect fy = mobius_form_apply(form, y);
    Tolerances tol;
    tol.psd_tol = 1e-8;
    c.require(loewner_le(fx.mat(), fy.mat(), tol));
    mobius_form_to_canonical(form);  // throws NotAutomorphism on mismatch
    c.require(true);
  }
  return finish("mobius_bridge", c);
}

PropertyResult interval_chains(Sampler& s, int trials) {
  Check c{1e-8};
  const int per_shape = std::max(1, trials / 20);
  for (IntervalShape shape : kAllIntervalShapes) {
    for (int k = 0; k < per_shape; ++k) {
      const std::size_t n = s.dimension();
      const IntervalSpec spec = s.interval(n, shape);
      const MapChain chain = build_chain(spec);
      c.require(!chain.parity());
      const IntervalSpec canon = canonical_representative(classify(spec), n);
      const auto [x, y] = s.comparable_pair_in(spec);
      const SymMat fx = apply_chain(chain, x, spec);
      const SymMat fy = apply_chain(chain, y, spec);
      c.require(canon.contains(fx) && loewner_le(fx, fy));
      c.observe(frob(apply_steps(invert_chain(chain), fx) - x));
    }
  }
  return finish("interval_chains", c);
}

PropertyResult anti_isomorphism_parity(Sampler& s, int trials) {
  Check c{0.0};
  for (int k = 0; k < trials; ++k) {
    const std::size_t n = s.dimension();
    const SymMat id = SymMat::identity(n);
    const MapChain psi({Translate{id}, Invert{}});
    c.require(psi.parity());
    const IntervalSpec open_cone = IntervalSpec::positive_open(n);
    const auto [x, y] = s.comparable_pair_in(open_cone);
    const SymMat fx = apply_steps(psi, x);
    const SymMat fy = apply_steps(psi, y);
    c.require(loewner_le(fy, fx) && IntervalSpec(n, Endpoint::open(SymMat::zero(n)), Endpoint::open(id)).contains(fx));
  }
  return finish("anti_isomorphism_parity", c);
}

PropertyResult conjugation_identity(Sampler& s, int trials) {
  Check c{1e-8};
  for (int k = 0; k < trials; ++k) {
    const std::size_t n = s.dimension();
    const Matrix t = s.invertible(n);
    const auto phi = EffectAutomorphism::make(t);
    const SymMat id = SymMat::identity(n);
    MapChain chain({Invert{}, Translate{-id}, Congruence{inverse(t.transpose())}, Translate{id}, Invert{}});
    const Effect x = s.interior_effect(n);
    c.observe(frob(apply_steps(chain, x.mat()) - apply(phi, x).mat()));
  }
  return finish("conjugation_identity", c);
}

}  // namespace

std::vector<PropertyResult> run_selftest(std::uint64_t seed, int trials,
                                         const std::function<void(const PropertyResult&)>& on_result) {
  static constexpr Property kProperties[] = {
      eigh_reconstruction,        loewner_partial_order,     sqrt_psd_square,
      functional_calculus,        strength_against_bisection, strength_monotone,
      strength_witness_converse,  strength_frame,            one_third,
      rank_one_segments,          strength_above_half,       maximal_diagonal_curve,
      automorphism_order,         automorphism_group_law,    automorphism_fixed_points,
      automorphism_interior,      projection_law,            self_adjointness,
      generator_recovery,         mobius_bridge,             interval_chains,
      anti_isomorphism_parity,    conjugation_identity,
  };
  const Sampler root(seed);
  std::vector<PropertyResult> out;
  std::uint64_t stream = 0;
  for (Property prop : kProperties) {
    Sampler s = root.derive(stream++);
    PropertyResult r;
    try {
      r = prop(s, std::max(trials, 1));
    } catch (const Error& e) {
      r.name = "property_" + std::to_string(stream - 1);
      r.passed = false;
      r.detail = std::string(to_string(e.code())) + ": " + e.what();
    }
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace loewner
