// One PASS/FAIL line per acceptance criterion. Usage:
//   acceptance <cli-binary> <golden-dir>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "loewner/automorphisms.hpp"
#include "loewner/effects.hpp"
#include "loewner/error.hpp"
#include "loewner/intervals.hpp"
#include "loewner/oracle.hpp"

using namespace loewner;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double dist(const SymMat& a, const SymMat& b) { return (a - b).frobenius_norm(); }

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Outcome order_preservation() {
  const auto t0 = Clock::now();
  Tolerances tol;
  tol.psd_tol = 1e-8;
  int violations = 0, total = 0;
  for (std::size_t n = 2; n <= 6; ++n) {
    Sampler s = Sampler(1).derive(n);
    for (int k = 0; k < 200; ++k) {
      const auto phi = EffectAutomorphism::make(s.invertible(n));
      const auto [x, y] = s.comparable_pair(n);
      ++total;
      if (!loewner_le(apply(phi, x).mat(), apply(phi, y).mat(), tol)) ++violations;
    }
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs < 5.0, fmt("%.0f triples, %.0f violations, %.3f s", total, violations, secs)};
}

Outcome group_law() {
  Sampler s(2);
  double worst = 0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = s.dimension();
    const auto a = EffectAutomorphism::make(s.invertible(n));
    const auto b = EffectAutomorphism::make(s.invertible(n));
    const Effect x = s.effect(n);
    worst = std::max(worst, dist(apply(compose(a, b), x).mat(), apply(a, apply(b, x)).mat()));
  }
  return {worst <= 1e-8, fmt("200 instances, worst %.3g (bound 1e-8)", worst)};
}

Outcome fixed_points() {
  Sampler s(3);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = s.dimension();
    const auto phi = EffectAutomorphism::make(s.invertible(n));
    worst = std::max(worst, apply(phi, SymMat::zero(n)).mat().frobenius_norm());
    worst = std::max(worst, dist(apply(phi, SymMat::identity(n)).mat(), SymMat::identity(n)));
  }
  return {worst <= 1e-10, fmt("100 generators, worst %.3g (bound 1e-10)", worst)};
}

Outcome projection_law() {
  Sampler s(4);
  double idem = 0, angle = 0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 3 + static_cast<std::size_t>(s.uniform() * 4.0);
    const std::size_t rank = 1 + k % 2;
    const Matrix t = s.invertible(n);
    const auto phi = EffectAutomorphism::make(t);
    const SymMat p = s.projection(n, rank);
    const SymMat img = apply(phi, p).mat();
    idem = std::max(idem, dist(SymMat(img.matrix() * img.matrix()), img));
    const Spectrum si = eigh(img);
    const Spectrum sp = eigh(p);
    std::vector<Vector> top, mapped;
    for (std::size_t j = 0; j < rank; ++j) {
      top.push_back(si.vector(n - 1 - j));
      Vector v = phi.generator() * sp.vector(n - 1 - j);
      for (const Vector& u : mapped) {
        const double d = dot(u, v);
        for (std::size_t i = 0; i < n; ++i) v[i] -= d * u[i];
      }
      mapped.push_back(normalized(v));
    }
    angle = std::max(angle, principal_angle(top, mapped));
  }
  return {idem <= 1e-8 && angle <= 1e-6,
          fmt("200 projections (rank 1 and 2), idempotence %.3g (1e-8), angle %.3g (1e-6)", idem, angle)};
}

Outcome strength_oracle() {
  Sampler s(5);
  Tolerances oracle_tol;
  oracle_tol.psd_tol = 1e-12;
  double worst = 0;
  int singular_in = 0, singular_out = 0;
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = s.dimension();
    const bool singular = k % 2 == 1;
    const std::size_t rank = singular ? 1 + static_cast<std::size_t>(s.uniform() * static_cast<double>(n - 1)) : n;
    const SymMat a = s.psd(n, rank);
    RankOneProjection p = s.projection(n);
    if (singular && s.coin()) {
      p = RankOneProjection(a.matrix() * s.unit_vector(n));
      ++singular_in;
    } else if (singular) {
      ++singular_out;
    }
    worst = std::max(worst, std::abs(strength(a, p) - strength_bisection(a, p, oracle_tol)));
  }
  return {worst <= 1e-6, fmt("500 pairs (%.0f singular in-range, %.0f singular generic), worst %.3g (bound 1e-6)",
                             singular_in, singular_out, worst)};
}

Outcome witness_biconditional() {
  Sampler s(6);
  int mismatches = 0, witnesses = 0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = s.dimension();
    SymMat a = s.effect(n).mat();
    SymMat b = s.effect(n).mat();
    if (k % 2 == 0) {
      const auto [x, y] = s.comparable_pair(n);
      a = x.mat();
      b = y.mat();
    }
    const auto w = strength_witness(a, b);
    if (w.has_value() == loewner_le(a, b)) ++mismatches;
    if (w) {
      ++witnesses;
      if (!loewner_le(w->t * w->q.mat(), a) || loewner_le(w->t * w->q.mat(), b)) ++mismatches;
    }
  }
  return {mismatches == 0, fmt("200 pairs, %.0f witnesses, %.0f mismatches", witnesses, mismatches)};
}

Outcome recovery() {
  Sampler s(7);
  int failures = 0;
  double residual = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 2 + k % 4;
    const auto phi = EffectAutomorphism::make(s.invertible(n));
    const EffectOracle oracle = [&](const Effect& x) { return apply(phi, x); };
    try {
      const auto back = recover_generator(oracle, n);
      if (!equals(back, phi)) ++failures;
      for (int j = 0; j < 10; ++j) {
        const Effect x = s.effect(n);
        residual = std::max(residual, dist(apply(back, x).mat(), oracle(x).mat()));
      }
    } catch (const Error&) {
      ++failures;
    }
  }
  return {failures == 0 && residual <= 1e-6, fmt("50 generators (n 2..5), %.0f failures, residual %.3g (1e-6)", failures, residual)};
}

Outcome mobius_bridge() {
  Sampler s(8);
  Tolerances tol;
  tol.psd_tol = 1e-8;
  int outside = 0, violations = 0, failures = 0;
  double residual = 0;
  for (int k = 0; k < 30; ++k) {
    const std::size_t n = s.dimension();
    const MobiusForm form{s.uniform(-2.0, 0.95), s.uniform(-2.0, 0.95), s.contraction(n)};
    for (int j = 0; j < 10; ++j) {
      const SymMat y = mobius_form_apply(form, s.effect(n).mat()).mat();
      if (!loewner_le(SymMat::zero(n), y, tol) || !loewner_le(y, SymMat::identity(n), tol)) ++outside;
    }
    const auto report = monotonicity_report([&](const SymMat& x) { return mobius_form_apply(form, x).mat(); },
                                            IntervalSpec::unit(n), 20, s, tol);
    violations += report.violated;
    try {
      const auto phi = mobius_form_to_canonical(form);
      for (int j = 0; j < 10; ++j) {
        const Effect x = s.effect(n);
        residual = std::max(residual, dist(apply(phi, x).mat(), mobius_form_apply(form, x).mat()));
      }
    } catch (const Error&) {
      ++failures;
    }
  }
  return {outside == 0 && violations == 0 && failures == 0 && residual <= 1e-6,
          fmt("30 forms, %.0f escapes, %.0f order violations, residual %.3g (1e-6)", outside, violations, residual) +
              (failures ? ", canonical conversion failed" : "")};
}

Outcome paper_fixtures() {
  std::vector<std::string> bad;
  const SymMat a(2, {2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0});
  const auto q = one_third_decomposition(a, RankOneProjection::basis(2, 0));
  if (!q || dist(q->mat(), SymMat(2, {0.5, -0.5, -0.5, 0.5})) > 1e-12) bad.push_back("decomposition");

  const SymMat d = SymMat::diagonal({1.0 / 3.0, 1.0}) - 0.5 * two_by_two_constants().basis_plus;
  if (dist(d, SymMat(2, {1.0 / 12.0, -0.25, -0.25, 0.75})) > 1e-15) bad.push_back("difference");
  const Spectrum sd = eigh(d);
  if (std::abs(sd.eigenvalues[0]) > 1e-15 || sd.eigenvalues[1] <= 0) bad.push_back("rank one");

  const SymMat sh = sharp(SymMat::diagonal({1.0, 0.0})).mat();
  if (sh(0, 0) != 0.5 || sh(0, 1) != 0.5 || sh(1, 0) != 0.5 || sh(1, 1) != 0.5) bad.push_back("sharp");

  std::string detail = bad.empty() ? "decomposition, rank-one difference, sharp exact" : "failed:";
  for (const auto& b : bad) detail += " " + b;
  return {bad.empty(), detail + fmt(" (smallest eigenvalue %.3g)", sd.eigenvalues[0])};
}

Outcome interval_atlas() {
  Sampler s(10);
  int odd = 0, order = 0, failures = 0;
  double endpoint = 0, round_trip = 0;
  for (IntervalShape shape : kAllIntervalShapes) {
    for (int k = 0; k < 20; ++k) {
      const std::size_t n = s.dimension();
      const IntervalSpec spec = s.interval(n, shape);
      try {
        const MapChain chain = build_chain(spec);
        if (chain.parity()) ++odd;
        const IntervalSpec canon = canonical_representative(classify(spec), n);
        if (spec.lower().is_finite() && spec.lower().is_closed())
          endpoint = std::max(endpoint, dist(apply_chain(chain, spec.lower().matrix(), spec), canon.lower().matrix()));
        if (spec.upper().is_finite() && spec.upper().is_closed())
          endpoint = std::max(endpoint, dist(apply_chain(chain, spec.upper().matrix(), spec), canon.upper().matrix()));
        const auto [x, y] = s.comparable_pair_in(spec);
        if (!loewner_le(apply_chain(chain, x, spec), apply_chain(chain, y, spec))) ++order;

        const IntervalSpec other = s.interval(n, shape);
        const MapChain fwd = iso_between(spec, other);
        const MapChain back = iso_between(other, spec);
        if (fwd.parity()) ++odd;
        round_trip = std::max(round_trip, dist(apply_steps(back, apply_steps(fwd, x)), x));
      } catch (const Error&) {
        ++failures;
      }
    }
  }
  bool rejected = false;
  try {
    iso_between(IntervalSpec::positive_closed(3), IntervalSpec::negative_closed(3));
  } catch (const Error& e) {
    rejected = e.code() == ErrorCode::NotIsomorphic;
  }
  const bool pass = odd == 0 && order == 0 && failures == 0 && endpoint <= 1e-10 && round_trip <= 1e-8 && rejected;
  return {pass, fmt("9 shapes x 20, odd %.0f, order breaks %.0f, endpoint %.3g (1e-10), ", odd, order, endpoint) +
                    fmt("round trip %.3g (1e-8), cone pair ", round_trip) + (rejected ? "rejected" : "accepted")};
}

Outcome conjugation_identity() {
  Sampler s(11);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = s.dimension();
    const Matrix t = s.invertible(n);
    const SymMat id = SymMat::identity(n);
    // psi(X) = (I + X)^{-1}, psi^{-1}(X) = X^{-1} - I, xi(X) = T' X T'^t
    const MapChain path({Invert{}, Translate{-1.0 * id}, Congruence{inverse(t.transpose())}, Translate{id}, Invert{}});
    const Effect x = s.interior_effect(n);
    worst = std::max(worst, dist(apply_steps(path, x.mat()), apply(EffectAutomorphism::make(t), x).mat()));
  }
  return {worst <= 1e-8, fmt("100 instances, worst %.3g (bound 1e-8)", worst)};
}

// ---- CLI ----

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& cmd) {
  Run r{-1, {}};
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome cli_contract(const std::string& cli, const fs::path& golden) {
  std::ifstream cases(golden / "cases.tsv");
  if (!cases) return {false, "missing " + (golden / "cases.tsv").string()};
  int total = 0, failed = 0;
  std::string first_failure;
  std::string line;
  while (std::getline(cases, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string name, args, code;
    std::getline(ls, name, '\t');
    std::getline(ls, args, '\t');
    std::getline(ls, code, '\t');
    ++total;
    std::string cmd = "'" + cli + "' " + args;
    const fs::path input = golden / (name + ".json");
    cmd += fs::exists(input) ? " '" + input.string() + "'" : " </dev/null";
    const Run r = run(cmd);
    const std::string expected = slurp(golden / (name + ".out"));
    if (r.code != std::stoi(code) || r.out != expected) {
      ++failed;
      if (first_failure.empty()) first_failure = name;
    }
  }
  const auto t0 = Clock::now();
  const Run st = run("'" + cli + "' selftest --seed 0");
  const double secs = seconds_since(t0);
  const bool pass = failed == 0 && total > 0 && st.code == 0 && secs < 60.0;
  std::string detail = fmt("%.0f golden cases, %.0f mismatched", total, failed);
  if (!first_failure.empty()) detail += " (first: " + first_failure + ")";
  detail += fmt("; selftest --seed 0 exit %.0f in %.2f s", st.code, secs);
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <cli-binary> <golden-dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path golden = argv[2];

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"automorphism order preservation", order_preservation},
      {"group law", group_law},
      {"fixed points", fixed_points},
      {"projection law", projection_law},
      {"strength closed form vs bisection", strength_oracle},
      {"strength witness biconditional", witness_biconditional},
      {"generator recovery round trip", recovery},
      {"mobius form bridge", mobius_bridge},
      {"exact 2x2 fixtures", paper_fixtures},
      {"interval atlas", interval_atlas},
      {"conjugation identity", conjugation_identity},
      {"cli contract", [&] { return cli_contract(cli, golden); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %2zu: %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
