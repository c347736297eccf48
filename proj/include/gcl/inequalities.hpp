#pragma once

// The inequality suite: theoretical bounds evaluated against empirical
// profiles, with exact-constant checks where the constant is explicit and
// existence-of-constants fits elsewhere. CI slack convention: an
// inequality A <= B between empirical quantities passes if A_lo <= B_hi
// at matched 95% confidence; exact bounds enter with zero-width intervals.
// Tail grid points with fewer than 10 exceedances are excluded from both
// sides of every verdict.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gcl/empirical.hpp"
#include "gcl/function_spec.hpp"
#include "gcl/gaussian.hpp"
#include "gcl/rearrangement.hpp"
#include "gcl/rng.hpp"
#include "gcl/stats.hpp"
#include "gcl/verdict.hpp"

namespace gcl {

inline std::vector<double> default_tail_grid() {
  return {0.125, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
}

// ---------------------------------------------------------------------
// Classical upper bound: both one-sided tails of a profile centered at
// the median and scaled by the Lipschitz constant obey (1/2) e^{-t^2/2}.
// Exact constants, no fitting.
inline InequalityVerdict check_upper_gaussian(const ConcentrationProfile& prof) {
  InequalityVerdict v;
  v.name = "upper_gaussian";
  for (std::size_t i = 0; i < prof.t_grid.size(); ++i) {
    double t = prof.t_grid[i];
    double bound = 0.5 * std::exp(-0.5 * t * t);
    for (const TailPoint* tp : {&prof.upper[i], &prof.lower[i]}) {
      GridDiagnostic g;
      g.t = t;
      g.lhs = tp->lo;
      g.rhs = bound;
      g.resolved = tp->resolved || tp->count == 0;
      g.ok = g.lhs <= g.rhs;
      v.grid.push_back(g);
    }
  }
  v.finish_from_grid();
  return v;
}

// ---------------------------------------------------------------------
// Variance-sensitive lower deviation: P(f <= med - 20 t sqrt(Var))
// <= (1/2) e^{-t^2}. The constant 20 is explicit and used as-is.
inline InequalityVerdict check_lower_deviation_var(
    const EmpiricalDistribution& emp, double median, double sqrt_var,
    std::span<const double> t_grid) {
  InequalityVerdict v;
  v.name = "lower_deviation_var";
  const auto& vals = emp.values;
  for (double t : t_grid) {
    double x = median - 20.0 * t * sqrt_var;
    auto it = std::upper_bound(vals.begin(), vals.end(), x);
    std::size_t count = std::size_t(it - vals.begin());
    Interval w = wilson_interval(count, emp.count);
    GridDiagnostic g;
    g.t = t;
    g.lhs = w.lo;
    g.rhs = 0.5 * std::exp(-t * t);
    g.resolved = count >= 10 || count == 0;
    g.ok = g.lhs <= g.rhs;
    v.grid.push_back(g);
  }
  v.finish_from_grid();
  return v;
}

// ---------------------------------------------------------------------
// Reversal with tau = ov(f) s(f): two-sided tail of the profile (median
// center, Lipschitz scale) admits the lower bound
// c tau^4 exp(-C (t/tau)^2 log(e/tau)) for some (c, C) in the boxes.
inline InequalityVerdict check_reversal(const ConcentrationProfile& prof,
                                        const ConcConstants& cc,
                                        ConstantBox c_box = {1.0 / 1024, 1.0},
                                        ConstantBox C_box = {1.0 / 64, 64.0}) {
  InequalityVerdict v;
  v.name = "reversal_theorem2";
  double tau = cc.ov.value * cc.s.value;
  if (!(tau > 0)) throw std::invalid_argument("check_reversal: tau <= 0");
  v.constants["tau"] = tau;
  v.boxes["c"] = c_box;
  v.boxes["C"] = C_box;
  double tau4 = tau * tau * tau * tau;
  double logterm = std::log(std::exp(1.0) / tau);
  std::vector<double> exponents, p_upper;
  for (std::size_t i = 0; i < prof.t_grid.size(); ++i) {
    const TailPoint& tp = prof.two_sided[i];
    if (!tp.resolved) continue;
    double t = prof.t_grid[i];
    exponents.push_back((t * t) / (tau * tau) * logterm);
    // bound uses c * tau^4, fold tau^4 into the probability side
    p_upper.push_back(tp.hi / tau4);
  }
  auto fit = fit_exponential_lower_bound(exponents, p_upper, c_box, C_box);
  v.passed = fit.feasible;
  if (fit.feasible) {
    v.constants["c"] = fit.c;
    v.constants["C"] = fit.C;
  }
  for (std::size_t i = 0; i < prof.t_grid.size(); ++i) {
    const TailPoint& tp = prof.two_sided[i];
    GridDiagnostic g;
    g.t = prof.t_grid[i];
    double e = (g.t * g.t) / (tau * tau) * logterm;
    g.lhs = fit.feasible
                ? fit.c * tau4 * std::exp(-std::min(700.0, fit.C * e))
                : 0.0;
    g.rhs = tp.hi;
    g.resolved = tp.resolved;
    g.ok = !fit.feasible || g.lhs <= g.rhs;
    v.grid.push_back(g);
  }
  return v;
}

// ---------------------------------------------------------------------
// Main theorem form: under the hypothesis sqrt(Var) >= alpha L
// (CI-adjusted), the two-sided tail admits c(alpha) exp(-C(alpha) t^2).
inline InequalityVerdict check_conditional_reversal(const ConcentrationProfile& prof,
                                            double alpha,
                                            const ConcConstants& cc,
                                            ConstantBox c_box = {1.0 / 1024,
                                                                 1.0},
                                            ConstantBox C_box = {1.0 / 64,
                                                                 64.0}) {
  InequalityVerdict v;
  v.name = "conditional_reversal";
  v.constants["alpha"] = alpha;
  v.boxes["c_alpha"] = c_box;
  v.boxes["C_alpha"] = C_box;
  if (!(std::sqrt(std::max(0.0, cc.variance.hi)) >= alpha * cc.lipschitz)) {
    v.passed = true;
    v.note = "hypothesis not met: sqrt(Var) < alpha * Lip (CI-adjusted); "
             "inequality not asserted";
    return v;
  }
  std::vector<double> exponents, p_upper;
  for (std::size_t i = 0; i < prof.t_grid.size(); ++i) {
    const TailPoint& tp = prof.two_sided[i];
    if (!tp.resolved) continue;
    exponents.push_back(prof.t_grid[i] * prof.t_grid[i]);
    p_upper.push_back(tp.hi);
  }
  auto fit = fit_exponential_lower_bound(exponents, p_upper, c_box, C_box);
  v.passed = fit.feasible;
  if (fit.feasible) {
    v.constants["c_alpha"] = fit.c;
    v.constants["C_alpha"] = fit.C;
  }
  return v;
}

// ---------------------------------------------------------------------
// Centered-moment lower bounds about the median. Fits c1, c2 and the
// regime-threshold constant C such that
//   (E|f - M|^p)^{1/p} >= c1 sqrt(p) sqrt(Var)          for p >= C/s^2,
//   (E|f - M|^p)^{1/p} >= c2 s sqrt(p) sqrt(Var)        for 2 <= p <= C/s^2,
// and reports the Lipschitz form constant c2' = min_p m_p/(ov s sqrt(p) L).
inline InequalityVerdict check_moment_bounds(
    const EmpiricalDistribution& emp, const ConcConstants& cc,
    std::span<const double> p_list_in = {},
    ConstantBox c_box = {1.0 / 256, 1.0}, ConstantBox C_box = {1.0, 64.0}) {
  static const std::vector<double> kDefaultP = {2, 4, 8, 16};
  std::vector<double> p_list(p_list_in.begin(), p_list_in.end());
  if (p_list.empty()) p_list = kDefaultP;
  auto st = estimate_stats(emp, p_list);
  InequalityVerdict v;
  v.name = "moment_bounds";
  v.boxes["c1"] = c_box;
  v.boxes["c2"] = c_box;
  v.boxes["C"] = C_box;
  double sqrt_var = std::sqrt(std::max(0.0, cc.variance.value));
  double s = cc.s.value;
  std::vector<double> mp;  // (E|f-M|^p)^{1/p}, CI upper for the slack side
  std::vector<double> mp_hi;
  for (double p : p_list) {
    mp.push_back(std::pow(st.centered_moments[p].value, 1.0 / p));
    mp_hi.push_back(std::pow(std::max(0.0, st.centered_moments[p].hi), 1.0 / p));
  }
  bool feasible = false;
  double best_C = 0, best_c1 = 0, best_c2 = 0;
  for (double C : detail::log_grid(C_box)) {
    double thresh = C / (s * s);
    double c1 = c_box.hi, c2 = c_box.hi;
    for (std::size_t i = 0; i < p_list.size(); ++i) {
      double p = p_list[i];
      double base = std::sqrt(p) * sqrt_var;
      if (p >= thresh) c1 = std::min(c1, mp_hi[i] / base);
      if (p >= 2.0 && p <= thresh) c2 = std::min(c2, mp_hi[i] / (s * base));
    }
    if (c1 >= c_box.lo && c2 >= c_box.lo) {
      feasible = true;
      best_C = C;
      best_c1 = c1;
      best_c2 = c2;
      break;
    }
  }
  v.passed = feasible;
  if (feasible) {
    v.constants["C"] = best_C;
    v.constants["c1"] = best_c1;
    v.constants["c2"] = best_c2;
  }
  if (cc.has_lipschitz && cc.lipschitz > 0 && cc.ov.value > 0) {
    double c2p = 1e300;
    for (std::size_t i = 0; i < p_list.size(); ++i) {
      c2p = std::min(c2p, mp_hi[i] / (cc.ov.value * s * std::sqrt(p_list[i]) *
                                      cc.lipschitz));
    }
    v.constants["c2_lip"] = c2p;
  }
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    GridDiagnostic g;
    g.t = p_list[i];
    g.lhs = feasible ? best_c1 * std::sqrt(p_list[i]) * sqrt_var : 0.0;
    g.rhs = mp_hi[i];
    g.ok = !feasible || p_list[i] < best_C / (s * s) || g.lhs <= g.rhs;
    v.grid.push_back(g);
  }
  return v;
}

// ---------------------------------------------------------------------
// Right-skewness of convex images: lower tail <= upper tail at every t,
// with joint CI slack. Points where the upper tail is below the
// resolution floor are excluded.
inline InequalityVerdict check_skewness(const EmpiricalDistribution& emp,
                                        double median,
                                        std::span<const double> t_grid) {
  InequalityVerdict v;
  v.name = "skewness";
  const auto& vals = emp.values;
  for (double t : t_grid) {
    auto il = std::upper_bound(vals.begin(), vals.end(), median - t);
    std::size_t lo_count = std::size_t(il - vals.begin());
    auto iu = std::lower_bound(vals.begin(), vals.end(), median + t);
    std::size_t up_count = std::size_t(vals.end() - iu);
    Interval wl = wilson_interval(lo_count, emp.count);
    Interval wu = wilson_interval(up_count, emp.count);
    GridDiagnostic g;
    g.t = t;
    g.lhs = wl.lo;
    g.rhs = wu.hi;
    g.resolved = up_count >= 10 || (up_count == 0 && lo_count == 0);
    g.ok = g.lhs <= g.rhs;
    v.grid.push_back(g);
  }
  v.finish_from_grid();
  return v;
}

// ---------------------------------------------------------------------
// Small-deviation bound: P(f - med < -t ||(f - med)_+||_1) <= Phi(-t/sqrt(2 pi)),
// with two-sided equality verified for affine specs.
inline InequalityVerdict check_small_deviation(
    const EmpiricalDistribution& emp, bool affine = false,
    std::span<const double> t_grid_in = {}) {
  // upper grid values cover t sqrt(2 pi) for t up to ~2 in the
  // Phi(-t)-normalized reading, where the non-convex counterexample bites
  static const std::vector<double> kDefaultT = {0.5, 1.0, 1.5, 2.0, 2.5,
                                                3.0, 4.0, 5.0132565492620005};
  std::span<const double> t_grid =
      t_grid_in.empty() ? std::span<const double>(kDefaultT) : t_grid_in;
  InequalityVerdict v;
  v.name = "small_deviation";
  const auto& vals = emp.values;
  double med = median_with_ci(vals).value;
  double l1plus = 0;
  for (double x : vals) l1plus += std::max(0.0, x - med);
  l1plus /= double(emp.count);
  v.constants["l1_plus"] = l1plus;
  bool equality_ok = true;
  for (double t : t_grid) {
    double x = med - t * l1plus;
    auto it = std::lower_bound(vals.begin(), vals.end(), x);
    std::size_t count = std::size_t(it - vals.begin());  // strict lower tail
    Interval w = wilson_interval(count, emp.count);
    double bound = std_normal_cdf(-t / kSqrt2Pi);
    GridDiagnostic g;
    g.t = t;
    g.lhs = w.lo;
    g.rhs = bound;
    g.resolved = count >= 10 || count == 0;
    g.ok = g.lhs <= g.rhs;
    v.grid.push_back(g);
    if (affine && g.resolved && !(w.lo <= bound && bound <= w.hi))
      equality_ok = false;
  }
  v.finish_from_grid();
  if (affine) {
    v.note = equality_ok ? "affine equality within CI" : "affine equality FAILED";
    if (!equality_ok) v.passed = false;
  }
  return v;
}

// ---------------------------------------------------------------------
// Reversal of the upper tail in sqrt(Var) units:
// P(f >= M + t sqrt(Var)) >= 1 - Phi(C (t + 1/s)) for some C in the box.
// For the ramp family the matching upper-bound direction
// P(f - M > t sqrt(Var)) <= 1 - Phi(alpha + c t / (alpha c_alpha)) is
// checked as well, confirming the 1/s offset is not removable.
inline InequalityVerdict check_sd_reversal_tail(
    const EmpiricalDistribution& emp, const ConcConstants& cc,
    const FunctionSpec* ramp = nullptr,
    ConstantBox C_box = {0.25, 64.0},
    std::span<const double> t_grid_in = {}) {
  static const std::vector<double> kDefaultT = {0.25, 0.5, 1.0, 1.5, 2.0};
  std::span<const double> t_grid =
      t_grid_in.empty() ? std::span<const double>(kDefaultT) : t_grid_in;
  InequalityVerdict v;
  v.name = "sd_reversal_tail";
  v.boxes["C"] = C_box;
  double s = cc.s.value;
  if (!(s > 0)) throw std::invalid_argument("check_sd_reversal_tail: s <= 0");
  double med = median_with_ci(emp.values).value;
  double sqrt_var = std::sqrt(std::max(0.0, cc.variance.value));
  const auto& vals = emp.values;
  struct Pt {
    double t;
    Interval w;
    bool resolved;
  };
  std::vector<Pt> pts;
  for (double t : t_grid) {
    auto iu = std::lower_bound(vals.begin(), vals.end(), med + t * sqrt_var);
    std::size_t count = std::size_t(vals.end() - iu);
    pts.push_back({t, wilson_interval(count, emp.count), count >= 10});
  }
  // smallest C in the box with 1 - Phi(C (t + 1/s)) <= p_hi at all points
  bool feasible = false;
  double fitted_C = 0;
  for (double C : detail::log_grid(C_box)) {
    bool ok = true;
    for (const auto& pt : pts) {
      if (!pt.resolved) continue;
      if (std_normal_sf(C * (pt.t + 1.0 / s)) > pt.w.hi) {
        ok = false;
        break;
      }
    }
    if (ok) {
      feasible = true;
      fitted_C = C;
      break;
    }
  }
  v.passed = feasible;
  if (feasible) {
    v.constants["C"] = fitted_C;
    v.constants["offset"] = 1.0 / s;
  }
  for (const auto& pt : pts) {
    GridDiagnostic g;
    g.t = pt.t;
    g.lhs = feasible ? std_normal_sf(fitted_C * (pt.t + 1.0 / s)) : 0.0;
    g.rhs = pt.w.hi;
    g.resolved = pt.resolved;
    g.ok = !feasible || g.lhs <= g.rhs;
    v.grid.push_back(g);
  }
  if (ramp != nullptr && ramp->family == Family::g_alpha) {
    // upper direction: largest feasible c in [1/64, 64]
    ConstantBox c_box{1.0 / 64, 64.0};
    auto grid = detail::log_grid(c_box);
    double fitted_c = 0;
    bool up_ok = false;
    for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
      double c = *it;
      bool ok = true;
      for (const auto& pt : pts) {
        if (!pt.resolved) continue;
        double bound =
            std_normal_sf(ramp->alpha + c * pt.t / (ramp->alpha * ramp->c_alpha));
        if (pt.w.lo > bound) {
          ok = false;
          break;
        }
      }
      if (ok) {
        up_ok = true;
        fitted_c = c;
        break;
      }
    }
    v.constants["ramp_upper_c"] = fitted_c;
    if (!up_ok) {
      v.passed = false;
      v.note = "ramp upper-bound direction infeasible";
    }
  }
  return v;
}

// ---------------------------------------------------------------------
// Two-sided multi-level rates: sandwich c e^{-C a(t)} <= P <= C e^{-c a(t)}
// for the profile's two-sided tail (mean center, absolute scale).
inline InequalityVerdict check_two_sided_rates(const ConcentrationProfile& prof,
                                               const RateFunction& rate,
                                               ConstantBox box = {1.0 / 256,
                                                                  256.0}) {
  InequalityVerdict v;
  v.name = "two_sided_rates";
  v.boxes["c"] = {box.lo, box.hi};
  v.boxes["C"] = {box.lo, box.hi};
  std::vector<double> exponents, p_lower, p_upper;
  for (std::size_t i = 0; i < prof.t_grid.size(); ++i) {
    const TailPoint& tp = prof.two_sided[i];
    if (!tp.resolved) continue;
    exponents.push_back(rate_value(rate, prof.t_grid[i] * prof.scale));
    p_lower.push_back(tp.lo);
    p_upper.push_back(tp.hi);
  }
  auto fit = fit_exponential_sandwich(exponents, p_lower, p_upper, box);
  v.passed = fit.feasible;
  if (fit.feasible) {
    v.constants["c"] = fit.c;
    v.constants["C"] = fit.C;
  }
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    GridDiagnostic g;
    g.t = exponents[i];
    g.lhs = p_lower[i];
    g.rhs = fit.feasible
                ? fit.C * std::exp(-std::min(700.0, fit.c * exponents[i]))
                : 0.0;
    g.ok = !fit.feasible || g.lhs <= g.rhs;
    v.grid.push_back(g);
  }
  return v;
}

// ---------------------------------------------------------------------
// Talagrand: Var(f) <= C sum_i ||d_i f||_phi^2. For coordinate-symmetric
// families one representative coordinate is estimated and multiplied by n;
// for linear maps the sum collapses to ||1||_phi^2 sum u_i^2.
inline InequalityVerdict check_talagrand(const FunctionSpec& spec,
                                         std::size_t N, std::uint64_t seed,
                                         unsigned threads = 1,
                                         ConstantBox C_box = {0.25, 64.0}) {
  InequalityVerdict v;
  v.name = "talagrand";
  v.boxes["C"] = C_box;
  YoungFunction phi = young_talagrand_phi();
  double sum_norms_sq = 0;
  if (spec.family == Family::linear) {
    std::vector<double> one = {1.0};
    double n1 = orlicz_norm(one, phi);
    double u2 = 0;
    for (double ui : spec.u) u2 += ui * ui;
    sum_norms_sq = n1 * n1 * u2;
  } else if (spec.family == Family::sup_norm ||
             spec.family == Family::lp_norm) {
    // representative coordinate 0, multiplied by n
    std::size_t nchunks = (N + kChunkSize - 1) / kChunkSize;
    std::vector<double> d1(N);
    detail::parallel_chunks(nchunks, threads, [&](std::size_t c) {
      RngStream stream(seed, kGradStreamBase + c);
      std::size_t lo = c * kChunkSize, hi = std::min(N, lo + kChunkSize);
      std::vector<double> z(spec.dim), g(spec.dim);
      for (std::size_t i = lo; i < hi; ++i) {
        stream.fill_gaussian(z.data(), z.size());
        spec.subgradient(z, g);
        d1[i] = g[0];
      }
    });
    double n1 = orlicz_norm(d1, phi);
    sum_norms_sq = double(spec.dim) * n1 * n1;
  } else {
    throw std::invalid_argument(
        "check_talagrand: implemented for linear and coordinate-symmetric "
        "lp/sup families");
  }
  auto emp = sample_values(spec, N, seed, threads);
  auto st = estimate_stats(emp);
  v.constants["sum_partials_phi_sq"] = sum_norms_sq;
  v.constants["variance"] = st.variance.value;
  double needed = st.variance.lo / sum_norms_sq;
  v.passed = needed <= C_box.hi;
  v.constants["C"] = C_box.clamp(st.variance.value / sum_norms_sq);
  GridDiagnostic g;
  g.t = 0;
  g.lhs = st.variance.lo;
  g.rhs = C_box.hi * sum_norms_sq;
  g.ok = v.passed;
  v.grid.push_back(g);
  v.worst_margin = g.rhs - g.lhs;
  return v;
}

// ---------------------------------------------------------------------
// Bobkov-Houdre chain on the line for convex g:
//   c1 I <= Var(g) <= c2 ||g'||_phi^2 <= c3 I,  I = int g'^2/(1+t^2) dgamma.
inline InequalityVerdict check_bobkov_houdre(const FunctionSpec& g,
                                             std::size_t N, std::uint64_t seed,
                                             ConstantBox box = {1.0 / 64,
                                                                64.0}) {
  if (g.dim != 1 || !g.convex)
    throw std::invalid_argument("check_bobkov_houdre: needs a convex 1-D spec");
  InequalityVerdict v;
  v.name = "bobkov_houdre";
  v.boxes["c1"] = box;
  v.boxes["c2"] = box;
  v.boxes["c3"] = box;
  double I = weighted_derivative_integral(g);
  auto emp = sample_values(g, N, seed);
  auto st = estimate_stats(emp);
  double V = st.variance.value;
  // Orlicz norm of g'(zeta) by Monte Carlo on gamma
  std::vector<double> deriv(N);
  RngStream stream(seed, kGradStreamBase);
  for (auto& d : deriv) d = g.deriv1d(stream.next_gaussian());
  double O = orlicz_norm(deriv, young_talagrand_phi());
  double O2 = O * O;
  v.constants["dirichlet_weighted"] = I;
  v.constants["variance"] = V;
  v.constants["orlicz_sq"] = O2;
  // c1 I <= V, V <= c2 O2, c2 O2 <= c3 I with all in the box
  double c1 = box.clamp(V / I);
  double c2_min = std::max(box.lo, V / O2);
  double c2_cap = std::min(box.hi, box.hi * I / O2);
  bool feasible = (V / I >= box.lo) && (c2_min <= c2_cap);
  double c2 = feasible ? c2_min : 0.0;
  double c3 = feasible ? box.clamp(c2 * O2 / I) : 0.0;
  feasible = feasible && c1 * I <= V * 1.0000001 && c2 * O2 <= c3 * I * 1.0000001;
  v.passed = feasible;
  v.constants["c1"] = c1;
  v.constants["c2"] = c2;
  v.constants["c3"] = c3;
  return v;
}

// ---------------------------------------------------------------------
// Key lemma for non-decreasing convex g on the line:
//  (1)  ||(g - med g)_+||_p^p >= sigma_p^p g'(0+)^p    (exact, no fitting)
//  (2)  Var(g) <= C1 g'(C1/s -)^2
//  (3)  P(g - g(0) >= t sqrt(Var)) >= 1 - Phi(C1 (1/s + t))
// A single C1 in the box must satisfy (2) and (3).
inline InequalityVerdict check_convex_increasing_1d(const FunctionSpec& g, std::size_t N,
                                         std::uint64_t seed,
                                         ConstantBox C1_box = {0.25, 64.0}) {
  if (g.dim != 1)
    throw std::invalid_argument("check_convex_increasing_1d: needs a 1-D spec");
  InequalityVerdict v;
  v.name = "convex_increasing_1d";
  v.boxes["C1"] = C1_box;
  auto emp = sample_values(g, N, seed);
  double med = median_with_ci(emp.values).value;
  auto st = estimate_stats(emp);
  double var = st.variance.value;
  double sqrt_var = std::sqrt(std::max(0.0, var));
  Estimate grad_sq = estimate_grad_sq(g, N, seed);
  double s = std::sqrt(var / grad_sq.value);
  v.constants["s"] = s;
  double gprime0 = g.deriv1d(1e-9);
  v.constants["gprime_0plus"] = gprime0;
  // part (1): exact sigma_p constants against Monte Carlo moments with CI
  static const double kP[] = {1.0, 2.0, 4.0};
  for (double p : kP) {
    double m1 = 0, m2 = 0;
    for (double x : emp.values) {
      double a = std::pow(std::max(0.0, x - med), p);
      m1 += a;
      m2 += a * a;
    }
    m1 /= double(emp.count);
    m2 /= double(emp.count);
    double se = std::sqrt(std::max(0.0, m2 - m1 * m1) / double(emp.count));
    double bound = 0.5 * abs_moment(p) * std::pow(gprime0, p);
    GridDiagnostic d;
    d.t = p;
    d.lhs = bound;
    d.rhs = m1 + 1.96 * se;
    d.ok = d.lhs <= d.rhs;
    v.grid.push_back(d);
  }
  // parts (2) + (3): one C1 for both
  double g0 = g.eval1d(0.0);
  static const double kT[] = {0.5, 1.0, 2.0};
  bool feasible = false;
  double fitted = 0;
  for (double C1 : detail::log_grid(C1_box)) {
    double dleft = g.deriv1d(C1 / s - 1e-9);
    if (!(st.variance.lo <= C1 * dleft * dleft)) continue;
    bool ok = true;
    for (double t : kT) {
      auto iu = std::lower_bound(emp.values.begin(), emp.values.end(),
                                 g0 + t * sqrt_var);
      std::size_t count = std::size_t(emp.values.end() - iu);
      Interval w = wilson_interval(count, emp.count);
      if (std_normal_sf(C1 * (1.0 / s + t)) > w.hi) {
        ok = false;
        break;
      }
    }
    if (ok) {
      feasible = true;
      fitted = C1;
      break;
    }
  }
  v.finish_from_grid();  // part (1) points
  if (!feasible) v.passed = false;
  if (feasible) v.constants["C1"] = fitted;
  return v;
}

// ---------------------------------------------------------------------
// chi-square Ehrhard consequence: for coordinatewise non-decreasing convex
// f on R_+^n and W with iid chi^2(k) coordinates (k >= 2), the map
// t -> Phi^{-1} P(f(W) <= t) is concave. Checked as discrete concavity on
// a quantile grid against a bootstrap tolerance.
inline InequalityVerdict check_chi2_concavity(const FunctionSpec& f, int k,
                                              std::size_t N,
                                              std::uint64_t seed,
                                              unsigned threads = 1,
                                              std::size_t bootstrap = 200) {
  if (k < 2)
    throw std::invalid_argument("check_chi2_concavity: k must be >= 2");
  InequalityVerdict v;
  v.name = "chi2_concavity";
  std::size_t n = f.dim;
  std::vector<double> out(N);
  std::size_t nchunks = (N + kChunkSize - 1) / kChunkSize;
  detail::parallel_chunks(nchunks, threads, [&](std::size_t c) {
    RngStream stream(seed, c);
    std::size_t lo = c * kChunkSize, hi = std::min(N, lo + kChunkSize);
    std::vector<double> w(n);
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double sum = 0;
        for (int r = 0; r < k; ++r) {
          double zc = stream.next_gaussian();
          sum += zc * zc;
        }
        w[j] = sum;
      }
      out[i] = f.eval(w);
    }
  });
  std::sort(out.begin(), out.end());
  // quantile grid p in [0.01, 0.99]
  std::vector<double> p_grid, tq, y;
  for (int i = 1; i <= 99; ++i) p_grid.push_back(0.01 * i);
  for (double p : p_grid) {
    tq.push_back(sorted_quantile(out, p));
    y.push_back(std_normal_quantile(p));
  }
  auto max_second_diff = [&](const std::vector<double>& t) {
    double m = -1e300;
    for (std::size_t j = 1; j + 1 < t.size(); ++j) {
      double s1 = (y[j] - y[j - 1]) / (t[j] - t[j - 1]);
      double s2 = (y[j + 1] - y[j]) / (t[j + 1] - t[j]);
      m = std::max(m, s2 - s1);
    }
    return m;
  };
  double stat = max_second_diff(tq);
  // bootstrap SD via the Brownian-bridge quantile process
  RngStream bs(seed, kAuxStreamBase + 13);
  double sqrtN = std::sqrt(double(N));
  std::vector<double> reps(bootstrap);
  std::vector<double> trep(p_grid.size());
  for (std::size_t r = 0; r < bootstrap; ++r) {
    double b = 0, prev = 0;
    for (std::size_t j = 0; j < p_grid.size(); ++j) {
      double p = p_grid[j];
      double mean = b * (1.0 - p) / (1.0 - prev);
      double varb = (p - prev) * (1.0 - p) / (1.0 - prev);
      b = mean + std::sqrt(std::max(0.0, varb)) * bs.next_gaussian();
      prev = p;
      double level = std::clamp(p + b / sqrtN, 1e-6, 1.0 - 1e-6);
      trep[j] = sorted_quantile(out, level);
    }
    std::sort(trep.begin(), trep.end());
    reps[r] = max_second_diff(trep);
  }
  double mean = 0;
  for (double x : reps) mean += x;
  mean /= double(bootstrap);
  double ss = 0;
  for (double x : reps) ss += (x - mean) * (x - mean);
  double sd = std::sqrt(ss / double(bootstrap - 1));
  v.constants["max_second_diff"] = stat;
  v.constants["bootstrap_sd"] = sd;
  v.passed = stat <= 3.0 * sd;
  v.worst_margin = 3.0 * sd - stat;
  return v;
}

// ---------------------------------------------------------------------
// Equivalence triangle (tail / moment / variance lower bounds). The
// variance condition (c) is operationalized through tau = ov(f) s(f)
// against the explicit 1/8 threshold of the tilted-norm lemma; when (c)
// fails, (a) and (b) are reported but not asserted.
inline InequalityVerdict check_equivalence_triangle(
    const EmpiricalDistribution& emp, const ConcConstants& cc,
    std::span<const double> t_grid_in = {}) {
  static const std::vector<double> kDefaultT = {0.25, 0.5, 1.0, 1.5, 2.0};
  std::span<const double> t_grid =
      t_grid_in.empty() ? std::span<const double>(kDefaultT) : t_grid_in;
  InequalityVerdict v;
  v.name = "equivalence_triangle";
  double tau_hi = cc.ov.hi * cc.s.hi;
  bool cond_c = tau_hi >= 0.125;
  v.constants["tau"] = cc.ov.value * cc.s.value;
  v.constants["A3"] = cc.ov.value;
  // (a): tail lower bound a1 exp(-t^2/A1^2) over the Lipschitz-scaled grid
  double med = median_with_ci(emp.values).value;
  double L = cc.lipschitz;
  std::vector<double> exponents, p_upper;
  for (double t : t_grid) {
    auto iu = std::lower_bound(emp.values.begin(), emp.values.end(), med + t * L);
    auto il = std::upper_bound(emp.values.begin(), emp.values.end(), med - t * L);
    std::size_t count = std::size_t(emp.values.end() - iu) +
                        std::size_t(il - emp.values.begin());
    if (count < 10) continue;
    exponents.push_back(t * t);
    p_upper.push_back(wilson_interval(count, emp.count).hi);
  }
  auto fit_a = fit_exponential_lower_bound(exponents, p_upper,
                                           {1.0 / 1024, 1.0}, {1.0 / 64, 64.0});
  // (b): moment lower bound A2 = min_p m_p / (sqrt(p) L) over p in {2,...,16}
  static const std::vector<double> kP = {2, 4, 8, 16};
  auto st = estimate_stats(emp, kP);
  double A2 = 1e300;
  for (double p : kP)
    A2 = std::min(A2, std::pow(std::max(0.0, st.centered_moments[p].hi), 1.0 / p) /
                          (std::sqrt(p) * L));
  bool cond_a = fit_a.feasible;
  bool cond_b = A2 >= 1.0 / 64;
  v.constants["A2"] = A2;
  if (fit_a.feasible) {
    v.constants["a1"] = fit_a.c;
    v.constants["A1_sq_inv"] = fit_a.C;
  }
  if (cond_c) {
    v.passed = cond_a && cond_b;
    v.note = "(c) holds; asserting (a) and (b)";
  } else {
    v.passed = true;
    v.note = "(c) fails (tau below 1/8); (a), (b) reported but not asserted";
  }
  v.constants["cond_a"] = cond_a ? 1.0 : 0.0;
  v.constants["cond_b"] = cond_b ? 1.0 : 0.0;
  v.constants["cond_c"] = cond_c ? 1.0 : 0.0;
  return v;
}

}  // namespace gcl
