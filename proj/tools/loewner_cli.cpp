#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "loewner/loewner.h"

using nlohmann::json;

namespace {

enum Exit { kOk = 0, kOther = 1, kParse = 2, kDimension = 3, kNotAutomorphism = 4, kProperty = 5 };

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void parse_error(const std::string& msg) { throw CliError{kParse, msg}; }

void check(lw_status s) {
  if (s == LW_OK) return;
  int code = kOther;
  if (s == LW_ERR_DIMENSION_MISMATCH) code = kDimension;
  if (s == LW_ERR_NOT_AUTOMORPHISM) code = kNotAutomorphism;
  throw CliError{code, std::string(lw_status_name(s)) + ": " + lw_last_error()};
}

// ---- output ----

void write_number(std::ostream& os, double v) {
  if (!std::isfinite(v)) {
    os << "null";
    return;
  }
  if (v == 0.0) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

void write(std::ostream& os, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map: keys already sorted
        if (!first) os << ',';
        first = false;
        os << json(it.key()).dump() << ':';
        write(os, it.value());
      }
      os << '}';
      break;
    }
    case json::value_t::array: {
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',';
        write(os, j[i]);
      }
      os << ']';
      break;
    }
    case json::value_t::number_float:
      write_number(os, j.get<double>());
      break;
    default:
      os << j.dump();
  }
}

void emit(const json& j) {
  write(std::cout, j);
  std::cout << '\n';
}

// ---- input ----

json read_payload(const std::string& path) {
  std::string text;
  if (path.empty() || path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) parse_error("cannot open " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    parse_error(std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) parse_error(std::string("missing field '") + key + "'");
  return obj.at(key);
}

std::size_t read_size(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 1) parse_error(std::string(what) + " must be a positive integer");
  return static_cast<std::size_t>(j.get<long long>());
}

std::vector<double> read_numbers(const json& j, const char* what) {
  if (!j.is_array()) parse_error(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) parse_error(std::string(what) + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

struct Mat {
  std::size_t n = 0;
  std::vector<double> data;
};

Mat read_matrix(const json& doc, const char* what, bool symmetrize = true) {
  if (!doc.is_object()) parse_error(std::string(what) + " must be a matrix document");
  Mat m;
  m.n = read_size(field(doc, "n"), "n");
  m.data = read_numbers(field(doc, "data"), "data");
  if (m.data.size() != m.n * m.n) {
    std::ostringstream os;
    os << what << ": data has " << m.data.size() << " entries, expected " << m.n * m.n;
    parse_error(os.str());
  }
  if (symmetrize) {
    double asym = 0.0;
    for (std::size_t i = 0; i < m.n; ++i)
      for (std::size_t j = i + 1; j < m.n; ++j) {
        const double a = m.data[i * m.n + j];
        const double b = m.data[j * m.n + i];
        asym = std::max(asym, std::abs(a - b));
        m.data[i * m.n + j] = m.data[j * m.n + i] = 0.5 * (a + b);
      }
    if (asym > 1e-9) {
      std::string name = doc.contains("name") && doc["name"].is_string() ? doc["name"].get<std::string>() : what;
      std::cerr << "warning: " << name << " asymmetric by " << asym << ", symmetrized\n";
    }
  }
  return m;
}

void same_dim(const Mat& a, const Mat& b) {
  if (a.n != b.n) {
    std::ostringstream os;
    os << "dimension mismatch: " << a.n << " vs " << b.n;
    throw CliError{kDimension, os.str()};
  }
}

json matrix_json(std::size_t n, const std::vector<double>& data) {
  json j;
  j["n"] = n;
  j["data"] = json::array();
  for (double v : data) j["data"].push_back(v);
  return j;
}

// ---- handles ----

struct AutDeleter {
  void operator()(lw_automorphism* p) const { lw_automorphism_destroy(p); }
};
struct IntervalDeleter {
  void operator()(lw_interval* p) const { lw_interval_destroy(p); }
};
struct ChainDeleter {
  void operator()(lw_chain* p) const { lw_chain_destroy(p); }
};
using Aut = std::unique_ptr<lw_automorphism, AutDeleter>;
using Interval = std::unique_ptr<lw_interval, IntervalDeleter>;
using Chain = std::unique_ptr<lw_chain, ChainDeleter>;

struct Context {
  lw_tolerances tol = lw_default_tolerances();
};

Aut make_aut(const Mat& t, const Context& ctx) {
  lw_automorphism* p = nullptr;
  check(lw_automorphism_create(t.n, t.data.data(), &ctx.tol, &p));
  return Aut(p);
}

json aut_json(const lw_automorphism* phi) {
  const std::size_t n = lw_automorphism_dim(phi);
  std::vector<double> t(n * n);
  check(lw_automorphism_generator(phi, t.data()));
  json out;
  out["t"] = matrix_json(n, t);
  int has = 0;
  double eps = 0.0;
  check(lw_automorphism_epsilon(phi, &has, &eps));
  if (has) out["epsilon"] = eps;
  return out;
}

struct EndpointDoc {
  lw_endpoint_kind kind;
  std::vector<double> data;
};

EndpointDoc read_endpoint(const json& doc, std::size_t n, const char* what) {
  if (!doc.is_object()) parse_error(std::string(what) + " must be an endpoint object");
  const json& k = field(doc, "kind");
  if (!k.is_string()) parse_error("endpoint kind must be a string");
  const std::string kind = k.get<std::string>();
  EndpointDoc e;
  if (kind == "infinite") {
    e.kind = LW_ENDPOINT_INFINITE;
    return e;
  }
  if (kind == "closed") {
    e.kind = LW_ENDPOINT_CLOSED;
  } else if (kind == "open") {
    e.kind = LW_ENDPOINT_OPEN;
  } else {
    parse_error("endpoint kind must be closed, open or infinite");
  }
  if (doc.contains("scalar")) {
    if (!doc["scalar"].is_number()) parse_error("scalar must be a number");
    e.data.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e.data[i * n + i] = doc["scalar"].get<double>();
    return e;
  }
  Mat m = read_matrix(doc, what);
  if (m.n != n) throw CliError{kDimension, std::string(what) + " has the wrong dimension"};
  e.data = std::move(m.data);
  return e;
}

Interval read_interval(const json& doc, const Context& ctx) {
  const std::size_t n = read_size(field(doc, "n"), "n");
  const EndpointDoc lo = read_endpoint(field(doc, "lower"), n, "lower");
  const EndpointDoc hi = read_endpoint(field(doc, "upper"), n, "upper");
  lw_interval* p = nullptr;
  check(lw_interval_create(n, lo.kind, lo.data.empty() ? nullptr : lo.data.data(), hi.kind,
                           hi.data.empty() ? nullptr : hi.data.data(), &ctx.tol, &p));
  return Interval(p);
}

json chain_json(const lw_chain* c) {
  json out;
  out["parity"] = lw_chain_parity(c) ? "odd" : "even";
  out["steps"] = json::array();
  for (std::size_t i = 0; i < lw_chain_length(c); ++i) {
    lw_step_kind kind{};
    std::size_t n = 0;
    check(lw_chain_step(c, i, &kind, &n, nullptr));
    std::vector<double> m(n * n);
    check(lw_chain_step(c, i, &kind, &n, m.data()));
    json step;
    switch (kind) {
      case LW_STEP_TRANSLATE:
        step["op"] = "translate";
        step["matrix"] = matrix_json(n, m);
        break;
      case LW_STEP_CONGRUENCE:
        step["op"] = "congruence";
        step["matrix"] = matrix_json(n, m);
        break;
      case LW_STEP_INVERT: step["op"] = "invert"; break;
      case LW_STEP_NEGATE: step["op"] = "negate"; break;
    }
    out["steps"].push_back(step);
  }
  return out;
}

const char* class_of(const lw_interval* spec) {
  lw_class c{};
  check(lw_interval_classify(spec, &c));
  return lw_class_name(c);
}

// ---- commands ----

void cmd_order(const json& in, const Context& ctx) {
  const Mat a = read_matrix(field(in, "a"), "a");
  const Mat b = read_matrix(field(in, "b"), "b");
  same_dim(a, b);
  int le = 0, lt = 0;
  check(lw_order(a.n, a.data.data(), b.data.data(), &ctx.tol, &le, &lt));
  json out;
  out["le"] = le != 0;
  out["lt"] = lt != 0;
  if (!le) {
    int found = 0;
    std::vector<double> q(a.n);
    double t = 0.0;
    check(lw_order_witness(a.n, a.data.data(), b.data.data(), &ctx.tol, &found, q.data(), &t));
    if (found) {
      out["witness"]["q"] = q;
      out["witness"]["t"] = t;
    }
  }
  emit(out);
}

void cmd_strength(const json& in, const Context& ctx) {
  const Mat a = read_matrix(field(in, "a"), "a");
  const std::vector<double> x = read_numbers(field(in, "x"), "x");
  if (x.size() != a.n) throw CliError{kDimension, "x has the wrong length"};
  double alpha = 0.0;
  check(lw_strength(a.n, a.data.data(), x.data(), &ctx.tol, &alpha));
  json out;
  out["alpha"] = alpha;
  emit(out);
}

void cmd_phi_apply(const json& in, const Context& ctx) {
  const Mat t = read_matrix(field(in, "t"), "t", false);
  const Mat x = read_matrix(field(in, "x"), "x");
  same_dim(t, x);
  const Aut phi = make_aut(t, ctx);
  std::vector<double> out(x.n * x.n);
  check(lw_automorphism_apply(phi.get(), x.data.data(), &ctx.tol, out.data()));
  json j;
  j["image"] = matrix_json(x.n, out);
  emit(j);
}

void cmd_phi_compose(const json& in, const Context& ctx) {
  const Mat s = read_matrix(field(in, "s"), "s", false);
  const Mat r = read_matrix(field(in, "r"), "r", false);
  same_dim(s, r);
  const Aut a = make_aut(s, ctx);
  const Aut b = make_aut(r, ctx);
  lw_automorphism* p = nullptr;
  check(lw_automorphism_compose(a.get(), b.get(), &ctx.tol, &p));
  const Aut c(p);
  emit(aut_json(c.get()));
}

void cmd_phi_invert(const json& in, const Context& ctx) {
  const Aut a = make_aut(read_matrix(field(in, "t"), "t", false), ctx);
  lw_automorphism* p = nullptr;
  check(lw_automorphism_inverse(a.get(), &ctx.tol, &p));
  const Aut c(p);
  emit(aut_json(c.get()));
}

void cmd_phi_probes(std::size_t n) {
  if (n < 1) parse_error("--n must be positive");
  std::vector<double> buf(lw_probe_count(n) * n * n);
  check(lw_probes(n, buf.data()));
  json out;
  out["n"] = n;
  out["probes"] = json::array();
  for (std::size_t k = 0; k < lw_probe_count(n); ++k) {
    out["probes"].push_back(matrix_json(n, std::vector<double>(buf.begin() + k * n * n, buf.begin() + (k + 1) * n * n)));
  }
  emit(out);
}

void cmd_phi_recover(const json& in, const Context& ctx) {
  const std::size_t n = read_size(field(in, "n"), "n");
  const json& images = field(in, "images");
  if (!images.is_array()) parse_error("images must be an array");
  if (images.size() != lw_probe_count(n)) {
    std::ostringstream os;
    os << "expected " << lw_probe_count(n) << " probe images, got " << images.size();
    parse_error(os.str());
  }
  std::vector<double> buf;
  for (const auto& img : images) {
    const Mat m = read_matrix(img, "image");
    if (m.n != n) throw CliError{kDimension, "probe image has the wrong dimension"};
    buf.insert(buf.end(), m.data.begin(), m.data.end());
  }
  lw_automorphism* p = nullptr;
  check(lw_recover_from_probes(n, buf.data(), &ctx.tol, &p));
  const Aut phi(p);
  emit(aut_json(phi.get()));
}

void cmd_interval_classify(const json& in, const Context& ctx) {
  const Interval spec = read_interval(in, ctx);
  json out;
  out["class"] = class_of(spec.get());
  emit(out);
}

void cmd_interval_chain(const json& in, const Context& ctx) {
  const Interval spec = read_interval(in, ctx);
  lw_chain* p = nullptr;
  check(lw_chain_build(spec.get(), &ctx.tol, &p));
  const Chain c(p);
  json out = chain_json(c.get());
  out["class"] = class_of(spec.get());
  emit(out);
}

void cmd_interval_map(const json& in, const Context& ctx) {
  const Interval spec = read_interval(field(in, "interval"), ctx);
  const Mat x = read_matrix(field(in, "x"), "x");
  if (x.n != read_size(field(field(in, "interval"), "n"), "n")) throw CliError{kDimension, "x has the wrong dimension"};
  lw_chain* p = nullptr;
  check(lw_chain_build(spec.get(), &ctx.tol, &p));
  const Chain c(p);
  std::vector<double> out(x.n * x.n);
  check(lw_chain_apply(c.get(), spec.get(), x.data.data(), &ctx.tol, out.data()));
  json j;
  j["image"] = matrix_json(x.n, out);
  emit(j);
}

void cmd_interval_iso(const json& in, const Context& ctx) {
  const Interval from = read_interval(field(in, "from"), ctx);
  const Interval to = read_interval(field(in, "to"), ctx);
  lw_chain* p = nullptr;
  check(lw_iso_between(from.get(), to.get(), &ctx.tol, &p));
  const Chain c(p);
  json out = chain_json(c.get());
  out["class"] = class_of(from.get());
  emit(out);
}

int cmd_selftest(std::uint64_t seed, int trials) {
  int ok = 0;
  check(lw_selftest(
      seed, trials, [](void*, const char* line) { std::cout << line << '\n'; }, nullptr, &ok));
  std::cout << (ok ? "selftest passed" : "selftest FAILED") << '\n';
  return ok ? kOk : kProperty;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loewner order toolkit: order checks, strength, effect automorphisms and matrix intervals"};
  app.require_subcommand(1);

  double tol = 1e-9;
  std::string input;
  app.add_option("--tol", tol, "Order and rank tolerance")->capture_default_str();

  auto with_input = [&](CLI::App* sub) { sub->add_option("input", input, "JSON payload file (default stdin)"); };

  auto* order = app.add_subcommand("order", "Compare two matrices: {\"a\", \"b\"}");
  with_input(order);
  auto* strength = app.add_subcommand("strength", "Strength of A along x: {\"a\", \"x\"}");
  with_input(strength);

  auto* phi = app.add_subcommand("phi", "Effect automorphisms");
  phi->require_subcommand(1);
  auto* phi_apply = phi->add_subcommand("apply", "{\"t\", \"x\"} -> image");
  auto* phi_compose = phi->add_subcommand("compose", "{\"s\", \"r\"} -> generator of the composite");
  auto* phi_invert = phi->add_subcommand("invert", "{\"t\"} -> generator of the inverse");
  auto* phi_recover = phi->add_subcommand("recover", "{\"n\", \"images\"} -> generator");
  auto* phi_probes = phi->add_subcommand("probes", "Probe effects for recovery");
  std::size_t probe_n = 0;
  phi_probes->add_option("--n", probe_n, "Dimension")->required();
  for (auto* s : {phi_apply, phi_compose, phi_invert, phi_recover}) with_input(s);

  auto* interval = app.add_subcommand("interval", "Matrix intervals");
  interval->require_subcommand(1);
  auto* iv_classify = interval->add_subcommand("classify", "{\"n\", \"lower\", \"upper\"} -> class");
  auto* iv_chain = interval->add_subcommand("chain", "Interval -> chain onto its canonical form");
  auto* iv_map = interval->add_subcommand("map", "{\"interval\", \"x\"} -> image under the chain");
  auto* iv_iso = interval->add_subcommand("iso", "{\"from\", \"to\"} -> isomorphism chain");
  for (auto* s : {iv_classify, iv_chain, iv_map, iv_iso}) with_input(s);

  auto* selftest = app.add_subcommand("selftest", "Run the invariant suite");
  std::uint64_t seed = 0;
  int trials = 200;
  selftest->add_option("--seed", seed)->capture_default_str();
  selftest->add_option("--trials", trials)->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  Context ctx;
  ctx.tol.psd_tol = tol;
  ctx.tol.rank_tol = tol;

  try {
    if (*selftest) return cmd_selftest(seed, trials);
    if (*phi_probes) {
      cmd_phi_probes(probe_n);
      return kOk;
    }
    const json in = read_payload(input);
    if (*order) cmd_order(in, ctx);
    else if (*strength) cmd_strength(in, ctx);
    else if (*phi_apply) cmd_phi_apply(in, ctx);
    else if (*phi_compose) cmd_phi_compose(in, ctx);
    else if (*phi_invert) cmd_phi_invert(in, ctx);
    else if (*phi_recover) cmd_phi_recover(in, ctx);
    else if (*iv_classify) cmd_interval_classify(in, ctx);
    else if (*iv_chain) cmd_interval_chain(in, ctx);
    else if (*iv_map) cmd_interval_map(in, ctx);
    else if (*iv_iso) cmd_interval_iso(in, ctx);
    return kOk;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  }
}
