// Command-line front end for the concentration laboratory.
//
//   gcl estimate  <key>                  summary statistics and ov/s constants
//   gcl tails     <key>                  tail profile CSV/JSON
//   gcl rearrange <key>                  rearrangement curve and property report
//   gcl check     <key> --suite a,b,...  inequality verdicts (exit 0 iff all pass)
//   gcl dvoretzky <key> --eps g1,g2,...  spherical-section estimates
//   gcl catalog                          list registered function keys

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcl/catalog.hpp"
#include "gcl/dvoretzky.hpp"
#include "gcl/empirical.hpp"
#include "gcl/inequalities.hpp"
#include "gcl/rearrangement.hpp"
#include "gcl/report.hpp"

namespace {

struct CommonOpts {
  std::string key;
  std::size_t n = 0;  // dimension override, 0 = keep key's
  std::size_t samples = 200000;
  std::uint64_t seed = 1;
  std::string out;
  unsigned threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_key = true) {
  if (with_key) cmd->add_option("key", o.key, "catalog key")->required();
  cmd->add_option("--n", o.n, "dimension override for the key's family");
  cmd->add_option("--samples", o.samples, "Monte Carlo sample count");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--out", o.out, "output directory for CSV/JSON files");
  cmd->add_option("--threads", o.threads, "worker thread count");
}

gcl::FunctionSpec resolve(const CommonOpts& o) {
  std::string key = o.key;
  if (o.n > 0) {
    auto pos = key.find("n=");
    if (pos == std::string::npos)
      throw std::invalid_argument("--n given but key has no n= field");
    auto end = key.find(':', pos);
    key = key.substr(0, pos + 2) + std::to_string(o.n) +
          (end == std::string::npos ? "" : key.substr(end));
  }
  return gcl::resolve_key(key);
}

void ensure_out(const std::string& dir) {
  if (!dir.empty()) std::filesystem::create_directories(dir);
}

int cmd_estimate(const CommonOpts& o) {
  auto spec = resolve(o);
  auto emp = gcl::sample_values(spec, o.samples, o.seed, o.threads);
  std::vector<double> p_list = {2, 4, 8, 16};
  auto st = gcl::estimate_stats(emp, p_list);
  auto cc = gcl::concentration_constants(spec, o.samples, o.seed, o.threads);
  gcl::Json out = gcl::Json::object()
                      .set("key", spec.key)
                      .set("samples", o.samples)
                      .set("seed", std::int64_t(o.seed))
                      .set("stats", gcl::to_json(st))
                      .set("constants", gcl::to_json(cc));
  std::string text = out.dump();
  std::fputs(text.c_str(), stdout);
  if (!o.out.empty()) {
    ensure_out(o.out);
    gcl::write_text_file(o.out + "/estimate.json", text);
  }
  return 0;
}

int cmd_tails(const CommonOpts& o) {
  auto spec = resolve(o);
  auto emp = gcl::sample_values(spec, o.samples, o.seed, o.threads);
  auto st = gcl::estimate_stats(emp);
  double scale = spec.has_lipschitz
                     ? spec.lipschitz
                     : std::sqrt(std::max(1e-300, st.variance.value));
  auto grid = gcl::default_tail_grid();
  auto prof = gcl::tail_curve(emp, st.median.value, scale, grid, "median",
                              spec.has_lipschitz ? "lipschitz" : "sqrt_var");
  std::string text = gcl::to_json(prof).dump();
  std::fputs(text.c_str(), stdout);
  if (!o.out.empty()) {
    ensure_out(o.out);
    gcl::write_text_file(o.out + "/tails.json", text);
    gcl::emit_profile_csv(prof, o.out + "/tails.csv");
    gcl::emit_tail_plot_csv(prof, o.out + "/tails_plot.csv");
  }
  return 0;
}

int cmd_rearrange(const CommonOpts& o) {
  auto spec = resolve(o);
  auto emp = gcl::sample_values(spec, o.samples, o.seed, o.threads);
  auto curve = gcl::gaussian_rearrangement(emp);
  auto rep = gcl::check_rearrangement_properties(curve, emp, spec, o.seed);
  std::string text = gcl::to_json(rep).dump();
  std::fputs(text.c_str(), stdout);
  if (!o.out.empty()) {
    ensure_out(o.out);
    gcl::write_text_file(o.out + "/rearrange.json", text);
    gcl::emit_rearrangement_csv(curve, o.out + "/rearrange.csv");
  }
  bool ok = rep.monotone_ok && rep.pushforward_ok && rep.lipschitz_ok &&
            (!spec.convex || rep.convexity_ok);
  return ok ? 0 : 1;
}

int cmd_check(const CommonOpts& o, const std::string& suite) {
  gcl::ExperimentConfig cfg;
  cfg.keys = {o.key};
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.out_dir = o.out;
  if (!suite.empty())
    for (const auto& name : gcl::detail::split(suite, ','))
      if (!name.empty()) cfg.checks.push_back(name);
  if (o.n > 0) cfg.keys[0] = resolve(o).key;
  ensure_out(o.out);
  auto report = gcl::run_experiment(cfg);
  std::string text = report.to_json_text();
  std::fputs(text.c_str(), stdout);
  return report.all_passed ? 0 : 1;
}

int cmd_dvoretzky(const CommonOpts& o, const std::string& eps_csv,
                  std::size_t trials) {
  auto spec = resolve(o);
  std::vector<double> eps = gcl::detail::parse_reals(eps_csv);
  if (eps.empty()) eps = {0.08, 0.12, 0.2, 0.3};
  std::vector<gcl::DvoretzkyEstimate> ests;
  gcl::Json arr = gcl::Json::array();
  bool all_ok = true;
  for (double e : eps) {
    auto est = gcl::estimate_k_eps(spec, e, trials, o.seed, o.threads);
    all_ok = all_ok && est.k_estimate >= 1;
    arr.push(gcl::to_json(est));
    ests.push_back(std::move(est));
  }
  gcl::Json out = gcl::Json::object()
                      .set("key", spec.key)
                      .set("trials", trials)
                      .set("estimates", std::move(arr));
  std::string text = out.dump();
  std::fputs(text.c_str(), stdout);
  if (!o.out.empty()) {
    ensure_out(o.out);
    gcl::write_text_file(o.out + "/dvoretzky.json", text);
    gcl::emit_dvoretzky_csv(ests, o.out + "/dvoretzky.csv");
  }
  return all_ok ? 0 : 1;
}

int cmd_catalog() {
  std::printf("%-28s %-12s %6s %12s %7s\n", "key", "family", "n", "lipschitz",
              "convex");
  for (const auto& key : gcl::default_catalog_keys()) {
    auto spec = gcl::resolve_key(key);
    const char* family = "";
    switch (spec.family) {
      case gcl::Family::linear: family = "linear"; break;
      case gcl::Family::lp_norm: family = "lp_norm"; break;
      case gcl::Family::sup_norm: family = "sup_norm"; break;
      case gcl::Family::ellipsoidal: family = "ellipsoidal"; break;
      case gcl::Family::tilted: family = "tilted"; break;
      case gcl::Family::g_alpha: family = "g_alpha"; break;
      case gcl::Family::monomial_odd: family = "monomial"; break;
      case gcl::Family::custom: family = "custom"; break;
    }
    if (spec.has_lipschitz)
      std::printf("%-28s %-12s %6zu %12.6g %7s\n", key.c_str(), family,
                  spec.dim, spec.lipschitz, spec.convex ? "yes" : "no");
    else
      std::printf("%-28s %-12s %6zu %12s %7s\n", key.c_str(), family, spec.dim,
                  "-", spec.convex ? "yes" : "no");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for Gaussian concentration of convex "
               "functions"};
  app.require_subcommand(1);

  CommonOpts est_o, tails_o, rearr_o, check_o, dvo_o;
  std::string suite, eps_csv;
  std::size_t trials = 60;

  auto* est = app.add_subcommand("estimate", "summary statistics and ov/s");
  add_common(est, est_o);
  auto* tails = app.add_subcommand("tails", "tail profile");
  add_common(tails, tails_o);
  auto* rearr = app.add_subcommand("rearrange", "rearrangement curve report");
  add_common(rearr, rearr_o);
  auto* check = app.add_subcommand("check", "inequality verdicts");
  add_common(check, check_o);
  check->add_option("--suite", suite, "comma-separated check names");
  auto* dvo = app.add_subcommand("dvoretzky", "spherical section estimates");
  add_common(dvo, dvo_o);
  dvo->add_option("--eps", eps_csv, "comma-separated epsilon grid");
  dvo->add_option("--trials", trials, "section trials per candidate k");
  auto* cat = app.add_subcommand("catalog", "list registered keys");
  (void)cat;

  CLI11_PARSE(app, argc, argv);

  try {
    if (est->parsed()) return cmd_estimate(est_o);
    if (tails->parsed()) return cmd_tails(tails_o);
    if (rearr->parsed()) return cmd_rearrange(rearr_o);
    if (check->parsed()) return cmd_check(check_o, suite);
    if (dvo->parsed()) return cmd_dvoretzky(dvo_o, eps_csv, trials);
    return cmd_catalog();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
