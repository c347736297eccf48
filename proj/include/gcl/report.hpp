#pragma once

// Experiment plumbing: a deterministic JSON tree writer (17-significant-
// digit reals, insertion-ordered keys), CSV emitters for profiles, curves
// and verdict roll-ups, raw sample persistence, flat-text experiment
// configs and the batch runner. Report bodies are byte-stable across
// replays; wall-clock timing lives on its own line so consumers can
// exclude it.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gcl/catalog.hpp"
#include "gcl/dvoretzky.hpp"
#include "gcl/empirical.hpp"
#include "gcl/function_spec.hpp"
#include "gcl/inequalities.hpp"
#include "gcl/rearrangement.hpp"
#include "gcl/verdict.hpp"

namespace gcl {

inline constexpr const char* kVersion = "1.0.0";

// -------- deterministic JSON --------

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Json {
 public:
  using Object = std::vector<std::pair<std::string, Json>>;
  using Array = std::vector<Json>;

  Json() : v_(nullptr) {}
  Json(std::nullptr_t) : v_(nullptr) {}
  Json(bool b) : v_(b) {}
  Json(double d) : v_(d) {}
  Json(int i) : v_(std::int64_t(i)) {}
  Json(std::int64_t i) : v_(i) {}
  Json(std::size_t i) : v_(std::int64_t(i)) {}
  Json(const char* s) : v_(std::string(s)) {}
  Json(std::string s) : v_(std::move(s)) {}
  Json(Object o) : v_(std::move(o)) {}
  Json(Array a) : v_(std::move(a)) {}

  static Json object() { return Json(Object{}); }
  static Json array() { return Json(Array{}); }

  Json& set(const std::string& key, Json value) {
    auto& obj = std::get<Object>(v_);
    obj.emplace_back(key, std::move(value));
    return *this;
  }
  Json& push(Json value) {
    std::get<Array>(v_).push_back(std::move(value));
    return *this;
  }

  void write(std::string& out, int indent = 0) const {
    struct V {
      std::string& out;
      int indent;
      void pad(int n) const { out.append(std::size_t(2 * n), ' '); }
      void operator()(std::nullptr_t) const { out += "null"; }
      void operator()(bool b) const { out += b ? "true" : "false"; }
      void operator()(std::int64_t i) const { out += std::to_string(i); }
      void operator()(double d) const { out += format_real(d); }
      void operator()(const std::string& s) const {
        out += '"';
        for (char c : s) {
          switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
              if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
              } else {
                out += c;
              }
          }
        }
        out += '"';
      }
      void operator()(const Object& o) const {
        if (o.empty()) {
          out += "{}";
          return;
        }
        out += "{\n";
        for (std::size_t i = 0; i < o.size(); ++i) {
          pad(indent + 1);
          (*this)(o[i].first);
          out += ": ";
          o[i].second.write(out, indent + 1);
          if (i + 1 < o.size()) out += ',';
          out += '\n';
        }
        pad(indent);
        out += '}';
      }
      void operator()(const Array& a) const {
        if (a.empty()) {
          out += "[]";
          return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < a.size(); ++i) {
          pad(indent + 1);
          a[i].write(out, indent + 1);
          if (i + 1 < a.size()) out += ',';
          out += '\n';
        }
        pad(indent);
        out += ']';
      }
    };
    std::visit(V{out, indent}, v_);
  }

  std::string dump() const {
    std::string out;
    write(out);
    out += '\n';
    return out;
  }

 private:
  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Object,
               Array>
      v_;
};

inline Json to_json(const Estimate& e) {
  return Json::object().set("value", e.value).set("lo", e.lo).set("hi", e.hi);
}

inline Json to_json(const TailPoint& tp) {
  return Json::object()
      .set("t", tp.t)
      .set("count", tp.count)
      .set("p", tp.p)
      .set("lo", tp.lo)
      .set("hi", tp.hi)
      .set("resolved", tp.resolved);
}

inline Json to_json(const ConcentrationProfile& prof) {
  auto arr = [](const std::vector<TailPoint>& v) {
    Json a = Json::array();
    for (const auto& tp : v) a.push(to_json(tp));
    return a;
  };
  Json tg = Json::array();
  for (double t : prof.t_grid) tg.push(t);
  return Json::object()
      .set("center", prof.center)
      .set("center_label", prof.center_label)
      .set("scale", prof.scale)
      .set("scale_label", prof.scale_label)
      .set("t_grid", std::move(tg))
      .set("upper", arr(prof.upper))
      .set("lower", arr(prof.lower))
      .set("two_sided", arr(prof.two_sided));
}

inline Json to_json(const InequalityVerdict& v) {
  Json consts = Json::object();
  for (const auto& [k, val] : v.constants) consts.set(k, val);
  Json boxes = Json::object();
  for (const auto& [k, b] : v.boxes)
    boxes.set(k, Json::object().set("lo", b.lo).set("hi", b.hi));
  Json grid = Json::array();
  for (const auto& g : v.grid)
    grid.push(Json::object()
                  .set("t", g.t)
                  .set("lhs", g.lhs)
                  .set("rhs", g.rhs)
                  .set("resolved", g.resolved)
                  .set("ok", g.ok));
  return Json::object()
      .set("name", v.name)
      .set("passed", v.passed)
      .set("constants", std::move(consts))
      .set("boxes", std::move(boxes))
      .set("worst_margin", v.worst_margin)
      .set("note", v.note)
      .set("grid", std::move(grid));
}

inline Json to_json(const ConcConstants& cc) {
  return Json::object()
      .set("variance", to_json(cc.variance))
      .set("grad_sq_mean", to_json(cc.grad_sq_mean))
      .set("lipschitz", cc.lipschitz)
      .set("has_lipschitz", cc.has_lipschitz)
      .set("ov", to_json(cc.ov))
      .set("s", to_json(cc.s));
}

inline Json to_json(const SummaryStats& st) {
  Json moments = Json::object();
  for (const auto& [p, e] : st.centered_moments)
    moments.set("p=" + format_real(p), to_json(e));
  return Json::object()
      .set("mean", to_json(st.mean))
      .set("median", to_json(st.median))
      .set("variance", to_json(st.variance))
      .set("centered_moments", std::move(moments));
}

inline Json to_json(const RearrangementReport& r) {
  return Json::object()
      .set("monotone_ok", r.monotone_ok)
      .set("convexity_margin", r.convexity_margin)
      .set("convexity_tol", r.convexity_tol)
      .set("convexity_ok", r.convexity_ok)
      .set("lip_estimate", r.lip_estimate)
      .set("lipschitz_ok", r.lipschitz_ok)
      .set("ks_distance", r.ks_distance)
      .set("pushforward_ok", r.pushforward_ok);
}

inline Json to_json(const DvoretzkyEstimate& e) {
  Json trace = Json::array();
  for (const auto& pt : e.trace)
    trace.push(Json::object()
                   .set("k", pt.k)
                   .set("successes", pt.successes)
                   .set("trials", pt.trials)
                   .set("wilson_lo", pt.wilson_lo)
                   .set("wilson_hi", pt.wilson_hi)
                   .set("good", pt.good));
  return Json::object()
      .set("epsilon", e.epsilon)
      .set("k_estimate", e.k_estimate)
      .set("trace", std::move(trace));
}

inline Json to_json(const InstabilityReport& r) {
  Json pts = Json::array();
  for (const auto& p : r.points)
    pts.push(Json::object()
                 .set("epsilon", p.epsilon)
                 .set("k_eps", p.k_eps)
                 .set("predicted", p.predicted)
                 .set("ratio", p.ratio));
  Json ests = Json::array();
  for (const auto& e : r.estimates) ests.push(to_json(e));
  return Json::object()
      .set("base_key", r.base_key)
      .set("tilted_key", r.tilted_key)
      .set("t", r.t)
      .set("k_base", r.k_base)
      .set("k_t", r.k_t)
      .set("k_t_closed_form", r.k_t_closed_form)
      .set("points", std::move(pts))
      .set("estimates", std::move(ests))
      .set("band", r.band)
      .set("passed", r.passed);
}

inline Json to_json(const SandwichReport& r) {
  Json pts = Json::array();
  for (const auto& p : r.points)
    pts.push(Json::object()
                 .set("delta", p.delta)
                 .set("count", p.count)
                 .set("p", p.p)
                 .set("lo", p.lo)
                 .set("hi", p.hi));
  return Json::object()
      .set("tilted_key", r.tilted_key)
      .set("k_t", r.k_t)
      .set("mean_ratio", r.mean_ratio)
      .set("points", std::move(pts))
      .set("c4", r.c4)
      .set("C4", r.C4)
      .set("feasible", r.feasible);
}

// -------- file emission --------

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(text.data(), std::streamsize(text.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline void emit_profile_csv(const ConcentrationProfile& prof,
                             const std::string& path) {
  std::string s = "t, upper, upper_lo, upper_hi, lower, lower_lo, lower_hi\n";
  for (std::size_t i = 0; i < prof.t_grid.size(); ++i) {
    const auto& u = prof.upper[i];
    const auto& l = prof.lower[i];
    s += format_real(prof.t_grid[i]) + ", " + format_real(u.p) + ", " +
         format_real(u.lo) + ", " + format_real(u.hi) + ", " +
         format_real(l.p) + ", " + format_real(l.lo) + ", " +
         format_real(l.hi) + "\n";
  }
  write_text_file(path, s);
}

// Plot data: empirical two-sided tail with CI band plus the classical
// upper bound and, when a verdict carries one, the fitted lower bound.
inline void emit_tail_plot_csv(const ConcentrationProfile& prof,
                               const std::string& path) {
  std::string s = "t, empirical, ci_lo, ci_hi, bound_upper, bound_lower\n";
  for (std::size_t i = 0; i < prof.t_grid.size(); ++i) {
    double t = prof.t_grid[i];
    const auto& tp = prof.two_sided[i];
    s += format_real(t) + ", " + format_real(tp.p) + ", " + format_real(tp.lo) +
         ", " + format_real(tp.hi) + ", " +
         format_real(std::exp(-0.5 * t * t)) + ", " + format_real(0.0) + "\n";
  }
  write_text_file(path, s);
}

inline void emit_rearrangement_csv(const RearrangementCurve& curve,
                                   const std::string& path) {
  std::string s = "s, f_star\n";
  for (std::size_t i = 0; i < curve.s_grid.size(); ++i)
    s += format_real(curve.s_grid[i]) + ", " + format_real(curve.values[i]) +
         "\n";
  write_text_file(path, s);
}

inline void emit_verdict_rollup_csv(const std::vector<InequalityVerdict>& vs,
                                    const std::string& path) {
  std::string s = "name, passed, worst_margin, note\n";
  for (const auto& v : vs)
    s += v.name + ", " + (v.passed ? "1" : "0") + ", " +
         format_real(v.worst_margin) + ", " + v.note + "\n";
  write_text_file(path, s);
}

inline void emit_dvoretzky_csv(const std::vector<DvoretzkyEstimate>& ests,
                               const std::string& path) {
  std::string s = "epsilon, k, successes, trials, wilson_lo, wilson_hi\n";
  for (const auto& e : ests)
    for (const auto& pt : e.trace)
      s += format_real(e.epsilon) + ", " + std::to_string(pt.k) + ", " +
           std::to_string(pt.successes) + ", " + std::to_string(pt.trials) +
           ", " + format_real(pt.wilson_lo) + ", " +
           format_real(pt.wilson_hi) + "\n";
  write_text_file(path, s);
}

inline constexpr std::uint64_t kRawMagic = 0x474c43524157u;  // "GLCRAW"

// Little-endian doubles with a 16-byte header (magic, N).
inline void write_raw_samples(const EmpiricalDistribution& emp,
                              const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  std::uint64_t header[2] = {kRawMagic, emp.count};
  out.write(reinterpret_cast<const char*>(header), 16);
  out.write(reinterpret_cast<const char*>(emp.values.data()),
            std::streamsize(emp.count * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<double> read_raw_samples(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::uint64_t header[2];
  in.read(reinterpret_cast<char*>(header), 16);
  if (!in || header[0] != kRawMagic)
    throw std::runtime_error("bad raw sample header in " + path);
  std::vector<double> v(header[1]);
  in.read(reinterpret_cast<char*>(v.data()),
          std::streamsize(v.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated raw samples in " + path);
  return v;
}

// -------- experiment configs --------

struct ExperimentConfig {
  std::vector<std::string> keys;
  std::size_t samples = 200000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::vector<double> t_grid;        // empty -> default
  std::vector<double> p_list;        // empty -> {2,4,8,16}
  std::vector<double> epsilon_grid;  // empty -> {0.08, 0.12, 0.2, 0.3}
  std::vector<std::string> checks;   // empty -> applicable defaults
  std::string out_dir;               // empty -> no files
  void validate() const {
    if (keys.empty()) throw std::invalid_argument("config: no keys");
    if (samples < 1000 || samples > 100000000)
      throw std::invalid_argument("config: samples outside [1e3, 1e8]");
    auto ascending = [](const std::vector<double>& g) {
      for (std::size_t i = 1; i < g.size(); ++i)
        if (!(g[i] > g[i - 1])) return false;
      return true;
    };
    if (!ascending(t_grid) || !ascending(epsilon_grid))
      throw std::invalid_argument("config: grids must be ascending");
  }
};

namespace detail {

inline std::string join(const std::vector<std::string>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += v[i];
  }
  return s;
}

inline std::string join_reals(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_real(v[i]);
  }
  return s;
}

inline std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> v;
  for (const auto& part : split(s, ','))
    if (!part.empty()) v.push_back(std::stod(part));
  return v;
}

}  // namespace detail

// Flat key-value text form: one "key = value" per line, lists
// comma-separated. Round-trips bit-exactly through parse_config.
inline std::string config_to_text(const ExperimentConfig& c) {
  std::string s;
  s += "keys = " + detail::join(c.keys, ',') + "\n";
  s += "samples = " + std::to_string(c.samples) + "\n";
  s += "seed = " + std::to_string(c.seed) + "\n";
  s += "threads = " + std::to_string(c.threads) + "\n";
  s += "t_grid = " + detail::join_reals(c.t_grid) + "\n";
  s += "p_list = " + detail::join_reals(c.p_list) + "\n";
  s += "epsilon_grid = " + detail::join_reals(c.epsilon_grid) + "\n";
  s += "checks = " + detail::join(c.checks, ',') + "\n";
  s += "out_dir = " + c.out_dir + "\n";
  return s;
}

inline ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  c.samples = 0;  // force explicit
  for (const auto& line : detail::split(text, '\n')) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find(" = ");
    if (eq == std::string::npos)
      throw std::invalid_argument("config: malformed line '" + line + "'");
    std::string key = line.substr(0, eq), val = line.substr(eq + 3);
    if (key == "keys") {
      for (const auto& k : detail::split(val, ','))
        if (!k.empty()) c.keys.push_back(k);
    } else if (key == "samples") {
      c.samples = std::stoull(val);
    } else if (key == "seed") {
      c.seed = std::stoull(val);
    } else if (key == "threads") {
      c.threads = unsigned(std::stoul(val));
    } else if (key == "t_grid") {
      c.t_grid = detail::parse_reals(val);
    } else if (key == "p_list") {
      c.p_list = detail::parse_reals(val);
    } else if (key == "epsilon_grid") {
      c.epsilon_grid = detail::parse_reals(val);
    } else if (key == "checks") {
      for (const auto& k : detail::split(val, ','))
        if (!k.empty()) c.checks.push_back(k);
    } else if (key == "out_dir") {
      c.out_dir = val;
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

// -------- the runner --------

inline const std::vector<std::string>& known_check_names() {
  static const std::vector<std::string> names = {
      "upper_gaussian",   "lower_deviation_var", "reversal",
      "conditional_reversal",     "moment_bounds",       "skewness",
      "small_deviation",  "sd_reversal_tail",  "two_sided_rates",
      "talagrand",        "bobkov_houdre",       "convex_increasing_1d",
      "chi2_concavity",   "equivalence_triangle"};
  return names;
}

// Checks that make sense for a spec without being forced.
inline std::vector<std::string> default_checks_for(const FunctionSpec& spec) {
  std::vector<std::string> c;
  bool lip = spec.has_lipschitz;
  if (lip) c.push_back("upper_gaussian");
  if (spec.convex) c.push_back("lower_deviation_var");
  if (lip && spec.dim > 1) c.push_back("reversal");
  if (lip) c.push_back("conditional_reversal");
  if (lip) c.push_back("moment_bounds");
  c.push_back("skewness");
  c.push_back("small_deviation");
  if (spec.convex) c.push_back("sd_reversal_tail");
  if (spec.family == Family::sup_norm ||
      (spec.family == Family::lp_norm && spec.p == 4.0) ||
      spec.family == Family::ellipsoidal)
    c.push_back("two_sided_rates");
  if (spec.family == Family::linear || spec.family == Family::lp_norm ||
      spec.family == Family::sup_norm)
    c.push_back("talagrand");
  if (spec.dim == 1 && spec.convex) c.push_back("bobkov_houdre");
  if (spec.family == Family::g_alpha) c.push_back("convex_increasing_1d");
  if (lip) c.push_back("equivalence_triangle");
  return c;
}

struct KeyRunResult {
  std::string key;
  SummaryStats stats;
  ConcConstants constants;
  std::vector<InequalityVerdict> verdicts;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<KeyRunResult> results;
  double elapsed_seconds = 0;
  bool all_passed = true;

  // Deterministic body: everything except wall-clock timing. The echoed
  // config normalizes the thread count: results are thread-count
  // invariant, so the body is byte-stable across replays and re-running
  // the echoed config (single-threaded) reproduces the run bit-exactly.
  Json body_json() const {
    ExperimentConfig echo = config;
    echo.threads = 1;
    Json results_json = Json::array();
    for (const auto& r : results) {
      Json verdicts = Json::array();
      for (const auto& v : r.verdicts) verdicts.push(to_json(v));
      results_json.push(Json::object()
                            .set("key", r.key)
                            .set("stats", to_json(r.stats))
                            .set("constants", to_json(r.constants))
                            .set("verdicts", std::move(verdicts)));
    }
    return Json::object()
        .set("version", kVersion)
        .set("config", config_to_text(echo))
        .set("seed", config.seed)
        .set("results", std::move(results_json))
        .set("all_passed", all_passed);
  }

  std::string to_json_text() const {
    // body first, then a single timing line consumers can strip
    std::string body = body_json().dump();
    body.erase(body.size() - 2);  // drop "}\n"
    body += ",\n  \"timing_seconds\": " + format_real(elapsed_seconds) + "\n}\n";
    return body;
  }

  std::string body_text() const { return body_json().dump(); }
};

namespace detail {

inline InequalityVerdict dispatch_check(const std::string& name,
                                        const FunctionSpec& spec,
                                        const EmpiricalDistribution& emp,
                                        const SummaryStats& st,
                                        const ConcConstants& cc,
                                        const ExperimentConfig& cfg) {
  double med = st.median.value;
  double sqrt_var = std::sqrt(std::max(0.0, st.variance.value));
  std::vector<double> t_grid =
      cfg.t_grid.empty() ? default_tail_grid() : cfg.t_grid;
  auto lip_profile = [&]() {
    if (!spec.has_lipschitz)
      throw std::invalid_argument(name + ": spec has no Lipschitz constant");
    return tail_curve(emp, med, spec.lipschitz, t_grid, "median", "lipschitz");
  };
  if (name == "upper_gaussian") return check_upper_gaussian(lip_profile());
  if (name == "lower_deviation_var") {
    static const std::vector<double> kT = {0.025, 0.05, 0.1,  0.15, 0.2,
                                           0.25,  0.3,  0.4,  0.5};
    return check_lower_deviation_var(emp, med, sqrt_var, kT);
  }
  if (name == "reversal") return check_reversal(lip_profile(), cc);
  if (name == "conditional_reversal")
    return check_conditional_reversal(lip_profile(), 0.125, cc);
  if (name == "moment_bounds") return check_moment_bounds(emp, cc, cfg.p_list);
  if (name == "skewness") {
    std::vector<double> abs_grid;
    for (double t : t_grid) abs_grid.push_back(t * sqrt_var);
    return check_skewness(emp, med, abs_grid);
  }
  if (name == "small_deviation")
    return check_small_deviation(emp, spec.family == Family::linear);
  if (name == "sd_reversal_tail")
    return check_sd_reversal_tail(
        emp, cc, spec.family == Family::g_alpha ? &spec : nullptr);
  if (name == "two_sided_rates") {
    RateFunction rate;
    if (spec.family == Family::sup_norm)
      rate = {RateKind::alpha_inf, spec.dim, nullptr};
    else if (spec.family == Family::lp_norm && spec.p == 4.0)
      rate = {RateKind::alpha_4, spec.dim, nullptr};
    else if (spec.family == Family::ellipsoidal)
      rate = {RateKind::alpha_ellipsoidal, spec.dim, spec.mat};
    else
      throw std::invalid_argument(
          "two_sided_rates: no rate function for this family");
    auto prof = tail_curve(emp, st.mean.value, sqrt_var, t_grid, "mean",
                           "sqrt_var");
    return check_two_sided_rates(prof, rate);
  }
  if (name == "talagrand")
    return check_talagrand(spec, cfg.samples, cfg.seed, cfg.threads);
  if (name == "bobkov_houdre")
    return check_bobkov_houdre(spec, cfg.samples, cfg.seed);
  if (name == "convex_increasing_1d") return check_convex_increasing_1d(spec, cfg.samples, cfg.seed);
  if (name == "chi2_concavity")
    return check_chi2_concavity(spec, 2, cfg.samples, cfg.seed, cfg.threads);
  if (name == "equivalence_triangle")
    return check_equivalence_triangle(emp, cc);
  throw std::invalid_argument("unknown check name: " + name);
}

}  // namespace detail

inline RunReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  for (const auto& name : cfg.checks) {
    const auto& known = known_check_names();
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw std::invalid_argument("unknown check name: " + name);
  }
  auto t0 = std::chrono::steady_clock::now();
  RunReport report;
  report.config = cfg;
  std::vector<double> p_list =
      cfg.p_list.empty() ? std::vector<double>{2, 4, 8, 16} : cfg.p_list;
  for (const auto& key : cfg.keys) {
    FunctionSpec spec = resolve_key(key);
    KeyRunResult res;
    res.key = key;
    auto emp = sample_values(spec, cfg.samples, cfg.seed, cfg.threads);
    res.stats = estimate_stats(emp, p_list);
    res.constants = concentration_constants(spec, cfg.samples, cfg.seed,
                                            cfg.threads);
    std::vector<std::string> checks =
        cfg.checks.empty() ? default_checks_for(spec) : cfg.checks;
    for (const auto& name : checks) {
      InequalityVerdict v = detail::dispatch_check(name, spec, emp, res.stats,
                                                   res.constants, cfg);
      if (!v.passed) report.all_passed = false;
      res.verdicts.push_back(std::move(v));
    }
    report.results.push_back(std::move(res));
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (!cfg.out_dir.empty()) {
    write_text_file(cfg.out_dir + "/report.json", report.to_json_text());
    std::vector<InequalityVerdict> all;
    for (const auto& r : report.results)
      all.insert(all.end(), r.verdicts.begin(), r.verdicts.end());
    emit_verdict_rollup_csv(all, cfg.out_dir + "/verdicts.csv");
  }
  return report;
}

}  // namespace gcl
