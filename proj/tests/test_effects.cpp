#include <gtest/gtest.h>

#include <cmath>

#include "loewner/effects.hpp"
#include "loewner/error.hpp"
#include "loewner/oracle.hpp"
#include "oracles.hpp"

using namespace loewner;

namespace {

double dist(const SymMat& a, const SymMat& b) { return (a - b).frobenius_norm(); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InternalInversionFailure;
}

// R with R11 = 1/3, R22 = 2/3, R12 = sqrt(2)/3
RankOneProjection frame_r() { return RankOneProjection(Vector{1.0 / std::sqrt(3.0), std::sqrt(2.0 / 3.0)}); }

}  // namespace

TEST(MakeEffect, Examples) {
  EXPECT_NO_THROW(make_effect(SymMat::identity(2)));
  EXPECT_NO_THROW(make_effect(SymMat::diagonal({1.0 / 3.0, 1.0})));
  EXPECT_EQ(code_of([] { make_effect(SymMat::diagonal({2.0, 0.0})); }), ErrorCode::OutOfInterval);
  EXPECT_EQ(code_of([] { make_effect(SymMat::diagonal({-0.1, 0.5})); }), ErrorCode::OutOfInterval);
}

TEST(RankOneProjection, NormalizedAndIdempotent) {
  const RankOneProjection p(Vector{-3.0, 4.0});
  EXPECT_NEAR(norm(p.vector()), 1.0, 1e-12);
  EXPECT_GT(p.vector()[0], 0.0);
  EXPECT_LE(dist(SymMat(p.mat().matrix() * p.mat().matrix()), p.mat()), 1e-10);
}

TEST(Strength, Examples) {
  Sampler smp(21);
  for (int k = 0; k < 10; ++k) {
    const std::size_t n = smp.dimension();
    EXPECT_NEAR(strength(SymMat::identity(n), smp.projection(n)), 1.0, 1e-12);
    const RankOneProjection p = smp.projection(n);
    EXPECT_NEAR(strength(0.37 * p.mat(), p), 0.37, 1e-12);
  }
  const RankOneProjection r = frame_r();
  EXPECT_NEAR(r.mat()(0, 0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.mat()(1, 1), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.mat()(0, 1), std::sqrt(2.0) / 3.0, 1e-15);
  const double ref = oracle::strength2({0.5, 0, 0, 1}, r.vector()[0], r.vector()[1]);
  EXPECT_NEAR(ref, 0.75, 1e-12);
  EXPECT_NEAR(strength(SymMat::diagonal({0.5, 1.0}), r), 0.75, 1e-12);

  const double ref2 = oracle::strength2({2, 0, 0, 1}, 1, 0);
  EXPECT_NEAR(ref2, 2.0, 1e-12);
  EXPECT_NEAR(strength(SymMat::diagonal({2.0, 1.0}), RankOneProjection::basis(2, 0)), 2.0, 1e-12);
}

TEST(Strength, OutOfRangeIsZero) {
  EXPECT_EQ(strength(SymMat::outer(Vector{1.0, 0.0}), RankOneProjection::basis(2, 1)), 0.0);
}

TEST(Strength, NotPsd) {
  EXPECT_EQ(code_of([] { strength(SymMat::diagonal({-1.0, 1.0}), RankOneProjection::basis(2, 0)); }),
            ErrorCode::NotPSD);
}

TEST(Strength, AgainstTwoByTwoOracle) {
  Sampler smp(22);
  for (int k = 0; k < 300; ++k) {
    const SymMat a = smp.psd(2, smp.coin() ? 1 : 2);
    RankOneProjection p = smp.projection(2);
    if (smp.coin()) p = RankOneProjection(a.matrix() * smp.unit_vector(2));
    const double ref = oracle::strength2({a(0, 0), a(0, 1), a(1, 0), a(1, 1)}, p.vector()[0], p.vector()[1]);
    EXPECT_NEAR(strength(a, p), ref, 1e-6);
  }
}

TEST(StrengthWitness, Examples) {
  EXPECT_FALSE(strength_witness(SymMat::diagonal({0.2, 0.3}), SymMat::identity(2)).has_value());

  const auto w = strength_witness(SymMat::identity(2), 0.5 * SymMat::identity(2));
  ASSERT_TRUE(w.has_value());
  EXPECT_LE(dist(w->q.mat(), SymMat::outer(Vector{1.0, 0.0})), 1e-12);
  EXPECT_NEAR(w->t, 1.0, 1e-12);
  EXPECT_TRUE(loewner_le(w->t * w->q.mat(), SymMat::identity(2)));
  EXPECT_FALSE(loewner_le(w->t * w->q.mat(), 0.5 * SymMat::identity(2)));

  const auto w2 = strength_witness(SymMat::diagonal({1.0, 0.0}), SymMat::diagonal({0.0, 1.0}));
  ASSERT_TRUE(w2.has_value());
  EXPECT_LE(dist(w2->q.mat(), SymMat::outer(Vector{1.0, 0.0})), 1e-12);
  EXPECT_NEAR(w2->t, 1.0, 1e-12);
  EXPECT_FALSE(loewner_le(w2->t * w2->q.mat(), SymMat::diagonal({0.0, 1.0})));
}

TEST(StrengthWitness, Converse) {
  Sampler smp(23);
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = smp.dimension();
    const SymMat a = smp.effect(n).mat();
    const SymMat b = smp.effect(n).mat();
    const auto w = strength_witness(a, b);
    ASSERT_EQ(w.has_value(), !loewner_le(a, b));
    if (w) {
      EXPECT_TRUE(loewner_le(w->t * w->q.mat(), a));
      EXPECT_FALSE(loewner_le(w->t * w->q.mat(), b));
      EXPECT_GT(strength(a, w->q), strength(b, w->q));
    }
  }
}

TEST(Strength, MonotoneInTheOrder) {
  Sampler smp(24);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = smp.dimension();
    const auto [x, y] = smp.comparable_pair(n);
    for (int j = 0; j < 50; ++j) {
      const RankOneProjection p = smp.projection(n);
      EXPECT_LE(strength(x.mat(), p), strength(y.mat(), p) + 1e-8);
    }
  }
}

TEST(RankOneSegment, Examples) {
  const Effect a = make_effect(SymMat::diagonal({0.3, 0.6}));
  const auto same = rank_one_segment(a, a);
  ASSERT_TRUE(same.has_value());
  EXPECT_EQ(same->t, 0.0);

  const auto seg = rank_one_segment(make_effect(SymMat::zero(2)), make_effect(0.5 * SymMat::outer(Vector{1.0, 0.0})));
  ASSERT_TRUE(seg.has_value());
  EXPECT_NEAR(seg->t, 0.5, 1e-14);
  EXPECT_LE(dist(seg->p.mat(), SymMat::outer(Vector{1.0, 0.0})), 1e-14);

  EXPECT_FALSE(rank_one_segment(make_effect(SymMat::zero(2)), make_effect(SymMat::diagonal({0.5, 0.5}))).has_value());
  EXPECT_EQ(code_of([] {
              rank_one_segment(make_effect(SymMat::diagonal({0.5, 0.0})), make_effect(SymMat::diagonal({0.0, 0.5})));
            }),
            ErrorCode::NotComparable);
}

TEST(RankOneSegment, ComparabilityEquivalence) {
  Sampler smp(25);
  int segments = 0, others = 0;
  for (int k = 0; k < 150; ++k) {
    const std::size_t n = smp.dimension();
    const auto [a, b] = smp.comparable_pair(n);
    const auto seg = rank_one_segment(a, b);
    if (seg) {
      ++segments;
      EXPECT_LE(dist(a.mat() + seg->t * seg->p.mat(), b.mat()), 1e-8);
      for (int j = 0; j < 30; ++j) {
        const SymMat c = a.mat() + smp.uniform(0.0, seg->t) * seg->p.mat();
        const SymMat d = a.mat() + smp.uniform(0.0, seg->t) * seg->p.mat();
        EXPECT_TRUE(loewner_le(c, d) || loewner_le(d, c));
      }
    } else {
      ++others;
      const Spectrum s = eigh(b.mat() - a.mat());
      const SymMat c = a.mat() + s.eigenvalues[n - 1] * SymMat::outer(s.vector(n - 1));
      const SymMat d = a.mat() + s.eigenvalues[n - 2] * SymMat::outer(s.vector(n - 2));
      EXPECT_TRUE(loewner_le(a.mat(), c) && loewner_le(c, b.mat()));
      EXPECT_TRUE(loewner_le(a.mat(), d) && loewner_le(d, b.mat()));
      EXPECT_FALSE(loewner_le(c, d) || loewner_le(d, c));
    }
  }
  EXPECT_GT(segments, 10);
  EXPECT_GT(others, 10);
}

TEST(IdentityBlock, Examples) {
  const IdentityBlock full = identity_block(make_effect(SymMat::identity(3)), RankOneProjection::basis(3, 0),
                                            RankOneProjection::basis(3, 1));
  ASSERT_TRUE(full.complement.has_value());
  EXPECT_NEAR((*full.complement)(0, 0), 1.0, 1e-12);

  const IdentityBlock b = identity_block(make_effect(SymMat::diagonal({1.0, 1.0, 0.5})),
                                         RankOneProjection::basis(3, 0), RankOneProjection::basis(3, 1));
  ASSERT_EQ(b.k_basis.size(), 2u);
  ASSERT_EQ(b.complement_basis.size(), 1u);
  EXPECT_NEAR(std::abs(b.complement_basis[0][2]), 1.0, 1e-12);
  EXPECT_NEAR((*b.complement)(0, 0), 0.5, 1e-12);
  EXPECT_LE(b.identity_defect, 1e-12);
  EXPECT_LE(b.off_block_norm, 1e-12);

  try {
    identity_block(make_effect(SymMat::diagonal({1.0, 0.5, 0.5})), RankOneProjection::basis(3, 0),
                   RankOneProjection::basis(3, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PreconditionViolated);
    EXPECT_NE(std::string(e.what()).find("Q <= A"), std::string::npos);
  }
  EXPECT_EQ(code_of([] {
              identity_block(make_effect(SymMat::identity(2)), RankOneProjection::basis(2, 0),
                             RankOneProjection::basis(2, 0));
            }),
            ErrorCode::PreconditionViolated);
}

TEST(OrthogonalPairForStrength, Examples) {
  const RankOneProjection r = RankOneProjection::basis(2, 0);
  const OrthogonalPair pq = orthogonal_pair_for_strength(r, 0.75);
  EXPECT_NEAR(dot(pq.p.vector(), pq.q.vector()), 0.0, 1e-14);
  EXPECT_NEAR(strength(0.5 * pq.p.mat() + pq.q.mat(), r), 0.75, 1e-12);

  EXPECT_EQ(code_of([&] { orthogonal_pair_for_strength(r, 0.5); }), ErrorCode::BadParameter);
  EXPECT_EQ(code_of([&] { orthogonal_pair_for_strength(r, 1.0); }), ErrorCode::BadParameter);

  // pR <= (1/2)P + Q iff p <= s, checked by bisection over p
  const RankOneProjection diag(Vector{1.0, 1.0});
  const OrthogonalPair d = orthogonal_pair_for_strength(diag, 2.0 / 3.0);
  const SymMat a = 0.5 * d.p.mat() + d.q.mat();
  const double ref = oracle::strength2({a(0, 0), a(0, 1), a(1, 0), a(1, 1)}, diag.vector()[0], diag.vector()[1]);
  EXPECT_NEAR(ref, 2.0 / 3.0, 1e-8);
  EXPECT_TRUE(loewner_le((2.0 / 3.0 - 1e-6) * diag.mat(), a));
  EXPECT_FALSE(loewner_le((2.0 / 3.0 + 1e-6) * diag.mat(), a));
}

TEST(OrthogonalPairForStrength, RoundTrip) {
  Sampler smp(26);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = smp.dimension();
    const RankOneProjection r = smp.projection(n);
    const double s = smp.uniform(0.5, 1.0);
    if (s <= 0.5) continue;
    const OrthogonalPair pq = orthogonal_pair_for_strength(r, s);
    EXPECT_NEAR(strength(0.5 * pq.p.mat() + pq.q.mat(), r), s, 1e-8);
  }
}

TEST(OneThirdDecomposition, Examples) {
  const SymMat a = SymMat(2, {2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0});
  const auto q = one_third_decomposition(a, RankOneProjection::basis(2, 0));
  ASSERT_TRUE(q.has_value());
  EXPECT_LE(dist(q->mat(), SymMat(2, {0.5, -0.5, -0.5, 0.5})), 1e-12);

  const auto& k = two_by_two_constants();
  const SymMat a2 = SymMat::diagonal({1.0 / 3.0, 1.0});
  const auto q2 = one_third_decomposition(a2, RankOneProjection(Vector{1.0, 1.0}));
  ASSERT_TRUE(q2.has_value());
  EXPECT_LE(dist(q2->mat(), SymMat::diagonal({1.0, 0.0})), 1e-12);
  const SymMat diff = a2 - 0.5 * k.basis_plus;
  EXPECT_LE(dist(diff, SymMat(2, {1.0 / 12.0, -0.25, -0.25, 0.75})), 1e-15);

  EXPECT_FALSE(one_third_decomposition(SymMat::identity(2), RankOneProjection::basis(2, 0)).has_value());
  EXPECT_EQ(code_of([] { one_third_decomposition(SymMat::identity(3), RankOneProjection::basis(3, 0)); }),
            ErrorCode::DimensionMismatch);
}

TEST(OneThirdDecomposition, Biconditional) {
  Sampler smp(27);
  const SymMat id = SymMat::identity(2);
  auto rank_one_psd = [](const SymMat& m) {
    const auto e = oracle::eig2(m(0, 0), m(0, 1), m(1, 1));
    return e[0] >= -1e-9 && e[0] <= 1e-9;
  };
  int hits = 0;
  for (int k = 0; k < 300; ++k) {
    const RankOneProjection p = smp.projection(2);
    SymMat a = smp.effect(2).mat();
    if (smp.coin()) {
      const Vector& x = p.vector();
      const RankOneProjection q(Vector{x[0] + x[1], x[1] - x[0]});
      a = (1.0 / 3.0) * q.mat() + (id - q.mat());
    }
    const bool expect = rank_one_psd(a - 0.5 * p.mat()) && rank_one_psd(a - 0.5 * (id - p.mat())) && rank_one_psd(id - a);
    const auto got = one_third_decomposition(a, p);
    EXPECT_EQ(got.has_value(), expect);
    hits += expect;
  }
  EXPECT_GT(hits, 50);
}

TEST(MaximalDiagonals, Examples) {
  const auto single = maximal_diagonals(make_effect(SymMat::diagonal({0.5, 1.0 / 3.0})));
  ASSERT_TRUE(single.is_singleton());
  EXPECT_LE(dist(std::get<MaxDiagonalSet::Singleton>(single.value).d, SymMat::diagonal({0.5, 1.0 / 3.0})), 0.0);

  EXPECT_TRUE(maximal_diagonals(make_effect(SymMat(2, {0.5, 0.5, 0.5, 0.5}))).is_zero_only());

  // [[1,1/2],[1/2,1]] is not an effect (eigenvalue 3/2); the curve is read off directly
  const auto curve = maximal_diagonals(make_effect(SymMat(2, {0.5, 0.25, 0.25, 0.5})));
  ASSERT_TRUE(curve.is_curve());
  const auto& c = std::get<MaxDiagonalSet::Curve>(curve.value);
  EXPECT_DOUBLE_EQ(c.t, 0.5);
  EXPECT_DOUBLE_EQ(c.s, 0.5);
  EXPECT_DOUBLE_EQ(std::abs(c.u), 0.25);
  EXPECT_TRUE(c.contains(0.25, 0.25));
  const MaxDiagonalSet::Curve paper{1.0, 1.0, 0.5};
  EXPECT_TRUE(paper.contains(0.5, 0.5));
}

TEST(Sharp, Examples) {
  const auto& k = two_by_two_constants();
  EXPECT_LE(dist(sharp(SymMat::identity(2)).mat(), SymMat::identity(2)), 1e-15);
  EXPECT_LE(dist(sharp(SymMat::zero(2)).mat(), SymMat::zero(2)), 0.0);
  const SymMat s = sharp(SymMat::diagonal({1.0, 0.0})).mat();
  EXPECT_EQ(s(0, 0), 0.5);
  EXPECT_EQ(s(0, 1), 0.5);
  EXPECT_EQ(s(1, 1), 0.5);
  EXPECT_EQ(code_of([] { sharp(SymMat(2, {0.5, 0.1, 0.1, 0.5})); }), ErrorCode::NotDiagonal);
  EXPECT_LE(dist(SymMat(k.j.matrix() * k.j.matrix()), SymMat::identity(2)), 0.0);
  EXPECT_LE(dist(k.basis_plus + k.basis_minus, SymMat::identity(2)), 1e-15);
  EXPECT_LE((k.basis_plus.matrix() * k.basis_minus.matrix()).frobenius_norm(), 1e-15);
}

TEST(Strength, AboveHalfForDiagonals) {
  Sampler smp(28);
  for (int k = 0; k < 200; ++k) {
    const double s = std::min(1.0, smp.uniform(0.5, 1.0) + 1e-9);
    EXPECT_GT(strength(SymMat::diagonal({s, 1.0}), smp.projection(2)), 0.5);
  }
  EXPECT_EQ(strength(SymMat::diagonal({0.5, 1.0}), RankOneProjection::basis(2, 0)), 0.5);
}
