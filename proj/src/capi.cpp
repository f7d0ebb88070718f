#include "loewner/loewner.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>
#include <variant>

#include "loewner/automorphisms.hpp"
#include "loewner/effects.hpp"
#include "loewner/error.hpp"
#include "loewner/intervals.hpp"
#include "loewner/linalg.hpp"
#include "loewner/selftest.hpp"

struct lw_automorphism {
  loewner::EffectAutomorphism phi;
};

struct lw_interval {
  loewner::IntervalSpec spec;
};

struct lw_chain {
  loewner::MapChain chain;
  std::size_t n;
};

namespace {

thread_local std::string g_last_error;

lw_status set_error(lw_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

lw_status from_code(loewner::ErrorCode code) {
  return static_cast<lw_status>(static_cast<int>(code) + 1);
}

template <class F>
lw_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return LW_OK;
  } catch (const loewner::Error& e) {
    return set_error(from_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(LW_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(LW_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(LW_ERR_INTERNAL, "unknown failure");
  }
}

#define LW_REQUIRE(...)                                                              \
  do {                                                                               \
    const void* lw_args_[] = {__VA_ARGS__};                                          \
    for (const void* p : lw_args_)                                                   \
      if (p == nullptr) return set_error(LW_ERR_NULL_ARGUMENT, "null argument");     \
  } while (0)

loewner::Tolerances tolerances(const lw_tolerances* t) {
  loewner::Tolerances out;
  if (t != nullptr) {
    out.eig_tol = t->eig_tol;
    out.psd_tol = t->psd_tol;
    out.rank_tol = t->rank_tol;
    out.equality_tol = t->equality_tol;
    out.validate();
  }
  return out;
}

void check_dim(std::size_t n) {
  if (n == 0) loewner::fail(loewner::ErrorCode::DimensionMismatch, "dimension must be positive");
}

loewner::Matrix matrix(std::size_t n, const double* data) {
  check_dim(n);
  return loewner::Matrix(n, std::vector<double>(data, data + n * n));
}

loewner::SymMat sym(std::size_t n, const double* data) {
  check_dim(n);
  return loewner::SymMat(n, std::vector<double>(data, data + n * n));
}

void copy_out(std::span<const double> src, double* dst) { std::copy(src.begin(), src.end(), dst); }

loewner::Endpoint endpoint(std::size_t n, lw_endpoint_kind kind, const double* data, bool lower) {
  switch (kind) {
    case LW_ENDPOINT_CLOSED:
    case LW_ENDPOINT_OPEN:
      if (data == nullptr) loewner::fail(loewner::ErrorCode::InvalidSpec, "finite endpoint needs a matrix");
      return kind == LW_ENDPOINT_CLOSED ? loewner::Endpoint::closed(sym(n, data))
                                        : loewner::Endpoint::open(sym(n, data));
    case LW_ENDPOINT_INFINITE:
      return lower ? loewner::Endpoint::minus_infinity() : loewner::Endpoint::plus_infinity();
  }
  loewner::fail(loewner::ErrorCode::InvalidSpec, "unknown endpoint kind");
}

}  // namespace

extern "C" {

const char* lw_version(void) { return "1.0.0"; }

const char* lw_last_error(void) { return g_last_error.c_str(); }

const char* lw_status_name(lw_status status) {
  switch (status) {
    case LW_OK: return "Ok";
    case LW_ERR_NULL_ARGUMENT: return "NullArgument";
    case LW_ERR_BUFFER_TOO_SMALL: return "BufferTooSmall";
    case LW_ERR_INTERNAL: return "Internal";
    default: break;
  }
  const int code = static_cast<int>(status) - 1;
  if (code >= 0 && code <= static_cast<int>(loewner::ErrorCode::NotIsomorphic)) {
    return loewner::to_string(static_cast<loewner::ErrorCode>(code)).data();
  }
  return "Unknown";
}

lw_tolerances lw_default_tolerances(void) {
  const loewner::Tolerances t;
  return {t.eig_tol, t.psd_tol, t.rank_tol, t.equality_tol};
}

lw_status lw_order(size_t n, const double* a, const double* b, const lw_tolerances* tol, int* le,
                   int* lt) {
  LW_REQUIRE(a, b, le, lt);
  return guarded([&] {
    const auto t = tolerances(tol);
    const auto ma = sym(n, a);
    const auto mb = sym(n, b);
    *le = loewner::loewner_le(ma, mb, t) ? 1 : 0;
    *lt = loewner::loewner_lt(ma, mb, t) ? 1 : 0;
  });
}

lw_status lw_order_witness(size_t n, const double* a, const double* b, const lw_tolerances* tol,
                           int* found, double* q, double* t) {
  LW_REQUIRE(a, b, found, q, t);
  return guarded([&] {
    const auto w = loewner::strength_witness(sym(n, a), sym(n, b), tolerances(tol));
    *found = w ? 1 : 0;
    if (w) {
      std::copy(w->q.vector().begin(), w->q.vector().end(), q);
      *t = w->t;
    }
  });
}

lw_status lw_strength(size_t n, const double* a, const double* x, const lw_tolerances* tol,
                      double* alpha) {
  LW_REQUIRE(a, x, alpha);
  return guarded([&] {
    check_dim(n);
    const loewner::RankOneProjection p(loewner::Vector(x, x + n));
    *alpha = loewner::strength(sym(n, a), p, tolerances(tol));
  });
}

lw_status lw_is_effect(size_t n, const double* a, const lw_tolerances* tol, int* result) {
  LW_REQUIRE(a, result);
  return guarded([&] {
    const auto m = sym(n, a);
    const auto t = tolerances(tol);
    *result = loewner::loewner_le(loewner::SymMat::zero(n), m, t) &&
                      loewner::loewner_le(m, loewner::SymMat::identity(n), t)
                  ? 1
                  : 0;
  });
}

lw_status lw_automorphism_create(size_t n, const double* t, const lw_tolerances* tol,
                                 lw_automorphism** out) {
  LW_REQUIRE(t, out);
  *out = nullptr;
  return guarded([&] {
    *out = new lw_automorphism{loewner::EffectAutomorphism::make(matrix(n, t), tolerances(tol))};
  });
}

void lw_automorphism_destroy(lw_automorphism* phi) { delete phi; }

size_t lw_automorphism_dim(const lw_automorphism* phi) { return phi ? phi->phi.n() : 0; }

lw_status lw_automorphism_generator(const lw_automorphism* phi, double* t) {
  LW_REQUIRE(phi, t);
  copy_out(phi->phi.generator().data(), t);
  return LW_OK;
}

lw_status lw_automorphism_epsilon(const lw_automorphism* phi, int* has_epsilon, double* epsilon) {
  LW_REQUIRE(phi, has_epsilon, epsilon);
  const auto e = phi->phi.epsilon();
  *has_epsilon = e ? 1 : 0;
  if (e) *epsilon = *e;
  return LW_OK;
}

lw_status lw_automorphism_apply(const lw_automorphism* phi, const double* x,
                                const lw_tolerances* tol, double* out) {
  LW_REQUIRE(phi, x, out);
  return guarded([&] {
    const auto img = loewner::apply(phi->phi, sym(phi->phi.n(), x), tolerances(tol));
    copy_out(img.mat().data(), out);
  });
}

lw_status lw_automorphism_compose(const lw_automorphism* s, const lw_automorphism* r,
                                  const lw_tolerances* tol, lw_automorphism** out) {
  LW_REQUIRE(s, r, out);
  *out = nullptr;
  return guarded([&] { *out = new lw_automorphism{loewner::compose(s->phi, r->phi, tolerances(tol))}; });
}

lw_status lw_automorphism_inverse(const lw_automorphism* phi, const lw_tolerances* tol,
                                  lw_automorphism** out) {
  LW_REQUIRE(phi, out);
  *out = nullptr;
  return guarded([&] { *out = new lw_automorphism{loewner::inverse(phi->phi, tolerances(tol))}; });
}

lw_status lw_automorphism_equals(const lw_automorphism* a, const lw_automorphism* b,
                                 const lw_tolerances* tol, int* result) {
  LW_REQUIRE(a, b, result);
  return guarded([&] { *result = loewner::equals(a->phi, b->phi, tolerances(tol)) ? 1 : 0; });
}

size_t lw_probe_count(size_t n) { return 2 * n; }

lw_status lw_probes(size_t n, double* probes) {
  LW_REQUIRE(probes);
  return guarded([&] {
    check_dim(n);
    double* dst = probes;
    for (const auto& p : loewner::recovery_probes(n)) {
      copy_out(p.mat().data(), dst);
      dst += n * n;
    }
  });
}

lw_status lw_recover_from_probes(size_t n, const double* images, const lw_tolerances* tol,
                                 lw_automorphism** out) {
  LW_REQUIRE(images, out);
  *out = nullptr;
  return guarded([&] {
    check_dim(n);
    const auto t = tolerances(tol);
    std::vector<loewner::Effect> imgs;
    for (std::size_t k = 0; k < lw_probe_count(n); ++k) {
      const auto m = sym(n, images + k * n * n);
      if (!loewner::loewner_le(loewner::SymMat::zero(n), m, t) ||
          !loewner::loewner_le(m, loewner::SymMat::identity(n), t)) {
        std::ostringstream os;
        os << "probe image " << k << " is not an effect";
        loewner::fail(loewner::ErrorCode::NotAutomorphism, os.str());
      }
      imgs.push_back(loewner::make_effect(m, t));
    }
    *out = new lw_automorphism{loewner::recover_from_probes(n, imgs, t)};
  });
}

lw_status lw_recover(size_t n, lw_effect_oracle oracle, void* user, const lw_tolerances* tol,
                     lw_automorphism** out) {
  LW_REQUIRE(out);
  if (oracle == nullptr) return set_error(LW_ERR_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    check_dim(n);
    const auto t = tolerances(tol);
    std::vector<double> buf(n * n);
    auto wrapped = [&](const loewner::Effect& x) {
      const auto data = x.mat().data();
      if (oracle(user, n, data.data(), buf.data()) != 0) {
        loewner::fail(loewner::ErrorCode::BadParameter, "oracle reported failure");
      }
      const auto m = sym(n, buf.data());
      if (!loewner::loewner_le(loewner::SymMat::zero(n), m, t) ||
          !loewner::loewner_le(m, loewner::SymMat::identity(n), t)) {
        loewner::fail(loewner::ErrorCode::NotAutomorphism, "oracle returned a non-effect");
      }
      return loewner::make_effect(m, t);
    };
    *out = new lw_automorphism{loewner::recover_generator(wrapped, n, t)};
  });
}

lw_status lw_interval_create(size_t n, lw_endpoint_kind lower_kind, const double* lower,
                             lw_endpoint_kind upper_kind, const double* upper,
                             const lw_tolerances* tol, lw_interval** out) {
  LW_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    check_dim(n);
    *out = new lw_interval{loewner::IntervalSpec(n, endpoint(n, lower_kind, lower, true),
                                                 endpoint(n, upper_kind, upper, false),
                                                 tolerances(tol))};
  });
}

void lw_interval_destroy(lw_interval* spec) { delete spec; }

lw_status lw_interval_classify(const lw_interval* spec, lw_class* out) {
  LW_REQUIRE(spec, out);
  return guarded([&] { *out = static_cast<lw_class>(loewner::classify(spec->spec)); });
}

const char* lw_class_name(lw_class c) {
  if (c < LW_CLASS_UNIT_INTERVAL || c > LW_CLASS_WHOLE) return "unknown";
  return loewner::to_string(static_cast<loewner::CanonicalClass>(c)).data();
}

lw_status lw_interval_contains(const lw_interval* spec, const double* x, const lw_tolerances* tol,
                               int* result) {
  LW_REQUIRE(spec, x, result);
  return guarded([&] { *result = spec->spec.contains(sym(spec->spec.n(), x), tolerances(tol)) ? 1 : 0; });
}

lw_status lw_chain_build(const lw_interval* spec, const lw_tolerances* tol, lw_chain** out) {
  LW_REQUIRE(spec, out);
  *out = nullptr;
  return guarded([&] { *out = new lw_chain{loewner::build_chain(spec->spec, tolerances(tol)), spec->spec.n()}; });
}

void lw_chain_destroy(lw_chain* chain) { delete chain; }

size_t lw_chain_length(const lw_chain* chain) { return chain ? chain->chain.steps().size() : 0; }

int lw_chain_parity(const lw_chain* chain) { return chain && chain->chain.parity() ? 1 : 0; }

lw_status lw_chain_step(const lw_chain* chain, size_t index, lw_step_kind* kind, size_t* n,
                        double* matrix) {
  LW_REQUIRE(chain, kind, n);
  if (index >= chain->chain.steps().size()) return set_error(LW_ERR_BAD_PARAMETER, "step index out of range");
  *n = chain->n;
  std::visit(
      [&](const auto& step) {
        using S = std::decay_t<decltype(step)>;
        if constexpr (std::is_same_v<S, loewner::Translate>) {
          *kind = LW_STEP_TRANSLATE;
          if (matrix) copy_out(step.shift.data(), matrix);
        } else if constexpr (std::is_same_v<S, loewner::Congruence>) {
          *kind = LW_STEP_CONGRUENCE;
          if (matrix) copy_out(step.t.data(), matrix);
        } else if constexpr (std::is_same_v<S, loewner::Invert>) {
          *kind = LW_STEP_INVERT;
        } else {
          *kind = LW_STEP_NEGATE;
        }
      },
      chain->chain.steps()[index]);
  return LW_OK;
}

lw_status lw_chain_apply(const lw_chain* chain, const lw_interval* domain, const double* x,
                         const lw_tolerances* tol, double* out) {
  LW_REQUIRE(chain, domain, x, out);
  return guarded([&] {
    const auto y = loewner::apply_chain(chain->chain, sym(domain->spec.n(), x), domain->spec, tolerances(tol));
    copy_out(y.data(), out);
  });
}

lw_status lw_chain_invert(const lw_chain* chain, lw_chain** out) {
  LW_REQUIRE(chain, out);
  *out = nullptr;
  return guarded([&] { *out = new lw_chain{loewner::invert_chain(chain->chain), chain->n}; });
}

lw_status lw_chain_compose(const lw_chain* outer, const lw_chain* inner, lw_chain** out) {
  LW_REQUIRE(outer, inner, out);
  *out = nullptr;
  if (outer->n != inner->n) return set_error(LW_ERR_DIMENSION_MISMATCH, "chain dimensions differ");
  return guarded([&] { *out = new lw_chain{loewner::compose_chains(outer->chain, inner->chain), outer->n}; });
}

lw_status lw_iso_between(const lw_interval* from, const lw_interval* to, const lw_tolerances* tol,
                         lw_chain** out) {
  LW_REQUIRE(from, to, out);
  *out = nullptr;
  return guarded([&] {
    if (from->spec.n() != to->spec.n()) {
      loewner::fail(loewner::ErrorCode::DimensionMismatch, "interval dimensions differ");
    }
    *out = new lw_chain{loewner::iso_between(from->spec, to->spec, tolerances(tol)), from->spec.n()};
  });
}

lw_status lw_selftest(uint64_t seed, int trials, lw_line_callback on_line, void* user, int* all_passed) {
  LW_REQUIRE(all_passed);
  if (trials < 1) return set_error(LW_ERR_BAD_PARAMETER, "trials must be positive");
  return guarded([&] {
    bool ok = true;
    loewner::run_selftest(seed, trials, [&](const loewner::PropertyResult& r) {
      ok = ok && r.passed;
      if (on_line) {
        std::ostringstream os;
        os.precision(3);
        os << (r.passed ? "PASS " : "FAIL ") << r.name << " trials=" << r.trials << " worst=" << r.worst;
        if (!r.detail.empty()) os << " (" << r.detail << ")";
        on_line(user, os.str().c_str());
      }
    });
    *all_passed = ok ? 1 : 0;
  });
}

}  // extern "C"
