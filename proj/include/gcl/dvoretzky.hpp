#pragma once

// Random almost-spherical sections: Haar frame sampling, sphericity of a
// norm restricted to a random subspace, the critical dimension k(X) and
// the dimension k(X, eps) of (1+eps)-spherical sections, plus the tilted
// instability and two-sided sandwich experiments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcl/empirical.hpp"
#include "gcl/function_spec.hpp"
#include "gcl/gaussian.hpp"
#include "gcl/linalg.hpp"
#include "gcl/rng.hpp"
#include "gcl/stats.hpp"
#include "gcl/verdict.hpp"

namespace gcl {

inline constexpr std::uint64_t kFrameStreamBase = 1ull << 34;

struct SubspaceSample {
  std::size_t n = 0, k = 0;
  std::vector<double> basis;  // row-major k x n, orthonormal rows
  std::uint64_t master_seed = 0, stream_id = 0;

  // point on the subspace sphere from k coefficients (not necessarily unit)
  void embed(std::span<const double> coef, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t r = 0; r < k; ++r) {
      double c = coef[r];
      const double* row = basis.data() + r * n;
      for (std::size_t j = 0; j < n; ++j) out[j] += c * row[j];
    }
  }
};

// Haar-distributed k-frame: Gaussian k x n rows orthonormalized by
// modified Gram-Schmidt; the probability-zero rank deficiency resamples
// with the stream advanced.
inline SubspaceSample sample_subspace(std::size_t n, std::size_t k,
                                      RngStream& stream) {
  if (k < 1 || k > n)
    throw std::invalid_argument("sample_subspace: need 1 <= k <= n");
  SubspaceSample s;
  s.n = n;
  s.k = k;
  s.master_seed = stream.master_seed();
  s.stream_id = stream.stream_id();
  s.basis.resize(k * n);
  for (;;) {
    stream.fill_gaussian(s.basis.data(), s.basis.size());
    if (orthonormalize_rows(s.basis.data(), k, n)) break;
  }
  return s;
}

// k(X) = (E||Z||_X / b(X))^2, Monte Carlo with a delta-method interval.
inline Estimate critical_dimension(const FunctionSpec& spec, std::size_t N,
                                   std::uint64_t seed, unsigned threads = 1) {
  if (!spec.is_norm() || !spec.has_lipschitz)
    throw std::invalid_argument(
        "critical_dimension: spec must be a norm with a known Lipschitz "
        "constant");
  auto emp = sample_values(spec, N, seed, threads);
  auto st = estimate_stats(emp);
  double b = spec.lipschitz;
  auto k_of = [b](double mean) { return (mean / b) * (mean / b); };
  return {k_of(st.mean.value), k_of(std::max(0.0, st.mean.lo)),
          k_of(st.mean.hi)};
}

// Closed form for the critical dimension of a tilted norm from the base
// dimension: k_t = (1+t)^{-2} (sqrt(k) + t sqrt(2/pi))^2.
inline double tilted_critical_dimension(double k_base, double t) {
  double r = std::sqrt(k_base) + t * kSqrt2 / kSqrtPi;  // t sqrt(2/pi)
  return r * r / ((1.0 + t) * (1.0 + t));
}

struct SectionStats {
  double max_ratio = 0, min_ratio = 0;
  double m_f = 0;  // spherical mean of the norm on the section
  double sphericity = 1;
  std::size_t direction_count = 0;
};

namespace detail {

// Coordinate-wise golden-section polish of the norm on the subspace
// sphere around a starting coefficient vector. sign = +1 maximizes,
// sign = -1 minimizes. Never worsens the starting value.
inline double polish_extremum(const FunctionSpec& spec,
                              const SubspaceSample& sub,
                              std::vector<double>& coef, double start,
                              double sign, int passes = 2) {
  constexpr double kGolden = 0.6180339887498949;
  std::size_t k = sub.k;
  std::vector<double> x(sub.n), trial(k);
  auto value_at = [&](const std::vector<double>& c) {
    double nrm = 0;
    for (double v : c) nrm += v * v;
    nrm = std::sqrt(nrm);
    sub.embed(c, x);
    for (double& v : x) v /= nrm;
    return spec.eval(x);
  };
  double best = start;
  for (int pass = 0; pass < passes; ++pass) {
    for (std::size_t j = 0; j < k; ++j) {
      // rotate towards +-e_j by angle theta, golden-section on theta
      auto rotated_value = [&](double theta) {
        double c = std::cos(theta), s = std::sin(theta);
        trial = coef;
        for (double& v : trial) v *= c;
        trial[j] += s;
        return value_at(trial);
      };
      double a = -0.4, b = 0.4;
      double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
      double f1 = sign * rotated_value(x1), f2 = sign * rotated_value(x2);
      for (int it = 0; it < 18; ++it) {
        if (f1 < f2) {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + kGolden * (b - a);
          f2 = sign * rotated_value(x2);
        } else {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - kGolden * (b - a);
          f1 = sign * rotated_value(x1);
        }
      }
      double theta = 0.5 * (a + b);
      double v = rotated_value(theta);
      if (sign * v > sign * best) {
        best = v;
        double c = std::cos(theta), s = std::sin(theta);
        for (double& w : coef) w *= c;
        coef[j] += s;
        double nrm = 0;
        for (double w : coef) nrm += w * w;
        nrm = std::sqrt(nrm);
        for (double& w : coef) w /= nrm;
      }
    }
  }
  return best;
}

}  // namespace detail

// Norm extrema on the section sphere from M random directions plus a
// local polish around the running extrema. The estimator is a lower
// bound on the true sphericity and is monotone in M on a fixed seed.
inline SectionStats section_sphericity(const FunctionSpec& spec,
                                       const SubspaceSample& sub,
                                       std::size_t M, RngStream& stream,
                                       bool polish = true) {
  if (M < 2) throw std::invalid_argument("section_sphericity: M must be >= 2");
  std::size_t k = sub.k;
  std::vector<double> coef(k), x(sub.n);
  std::vector<double> best_max_coef(k), best_min_coef(k);
  double vmax = 0, vmin = 0, sum = 0;
  for (std::size_t m = 0; m < M; ++m) {
    double nrm = 0;
    do {
      stream.fill_gaussian(coef.data(), k);
      nrm = 0;
      for (double v : coef) nrm += v * v;
    } while (nrm == 0.0);
    nrm = std::sqrt(nrm);
    for (double& v : coef) v /= nrm;
    sub.embed(coef, x);
    double v = spec.eval(x);
    sum += v;
    if (m == 0 || v > vmax) {
      vmax = v;
      best_max_coef = coef;
    }
    if (m == 0 || v < vmin) {
      vmin = v;
      best_min_coef = coef;
    }
  }
  if (polish && k >= 2) {
    vmax = detail::polish_extremum(spec, sub, best_max_coef, vmax, +1.0);
    vmin = detail::polish_extremum(spec, sub, best_min_coef, vmin, -1.0);
  }
  SectionStats st;
  st.max_ratio = vmax;
  st.min_ratio = vmin;
  st.m_f = sum / double(M);
  st.sphericity = vmax / vmin;
  st.direction_count = M;
  return st;
}

inline std::size_t default_direction_count(std::size_t k) {
  return std::max<std::size_t>(10000, 200 * k);
}

struct KTracePoint {
  std::size_t k = 0;
  std::size_t successes = 0, trials = 0;
  double wilson_lo = 0, wilson_hi = 0;
  bool good = false;
};

struct DvoretzkyEstimate {
  double epsilon = 0;
  std::size_t k_estimate = 0;
  std::vector<KTracePoint> trace;  // in evaluation order
};

namespace detail {

// T independent section trials at dimension k; success when the section
// is (1+eps)-spherical. Trials parallelize over streams; the reduction
// is an ordered count, so the result is thread-count independent.
inline KTracePoint k_success_trace(const FunctionSpec& spec, std::size_t k,
                                   double epsilon, std::size_t T,
                                   std::uint64_t seed, unsigned threads) {
  std::vector<char> success(T, 0);
  std::size_t M = default_direction_count(k);
  parallel_chunks(T, threads, [&](std::size_t trial) {
    RngStream stream(seed, kFrameStreamBase + k * 4096 + trial);
    SubspaceSample sub = sample_subspace(spec.dim, k, stream);
    SectionStats st = section_sphericity(spec, sub, M, stream);
    success[trial] = st.sphericity < 1.0 + epsilon ? 1 : 0;
  });
  KTracePoint pt;
  pt.k = k;
  pt.trials = T;
  for (char c : success) pt.successes += std::size_t(c);
  Interval w = wilson_interval(pt.successes, T);
  pt.wilson_lo = w.lo;
  pt.wilson_hi = w.hi;
  pt.good = w.lo >= 2.0 / 3.0;
  return pt;
}

}  // namespace detail

// Largest k at which random k-sections are (1+eps)-spherical with
// probability at least 2/3, decided by the Wilson lower bound over T
// trials and located by bisection between k = 1 and k = min(n, ceil(8 k(X))).
inline DvoretzkyEstimate estimate_k_eps(const FunctionSpec& spec,
                                        double epsilon, std::size_t T,
                                        std::uint64_t seed,
                                        unsigned threads = 1,
                                        std::size_t k_hi_seed = 0) {
  if (!(epsilon > 0 && epsilon < 1))
    throw std::invalid_argument("estimate_k_eps: epsilon must be in (0, 1)");
  if (T < 40) throw std::invalid_argument("estimate_k_eps: T must be >= 40");
  DvoretzkyEstimate est;
  est.epsilon = epsilon;
  std::size_t n = spec.dim;
  if (k_hi_seed == 0) {
    double kx = critical_dimension(spec, 200000, seed, threads).value;
    k_hi_seed = std::min<double>(double(n), std::ceil(8.0 * kx));
  }
  k_hi_seed = std::min(std::max<std::size_t>(1, k_hi_seed), n);
  auto run = [&](std::size_t k) {
    KTracePoint pt = detail::k_success_trace(spec, k, epsilon, T, seed, threads);
    est.trace.push_back(pt);
    return pt.good;
  };
  if (!run(1)) {
    est.k_estimate = 0;
    return est;
  }
  std::size_t lo = 1;  // known good
  std::size_t hi = k_hi_seed;
  if (hi == lo || run(hi)) {
    est.k_estimate = hi;
    return est;
  }
  // invariant: lo good, hi bad
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (run(mid))
      lo = mid;
    else
      hi = mid;
  }
  est.k_estimate = lo;
  return est;
}

struct InstabilityPoint {
  double epsilon = 0;
  std::size_t k_eps = 0;
  double predicted = 0;  // eps^2 * k_t
  double ratio = 0;      // k_eps / predicted
};

struct InstabilityReport {
  std::string base_key, tilted_key;
  double t = 0;
  double k_base = 0, k_t = 0, k_t_closed_form = 0;
  std::vector<InstabilityPoint> points;
  std::vector<DvoretzkyEstimate> estimates;
  double band = 0;  // max ratio / min ratio over the grid
  bool passed = false;
};

// Instability of the tilted norm: k(X_t, eps) should track eps^2 k_t.
// Hypothesis range 4 <= t <= sqrt(k(X)) enforced with CI slack.
inline InstabilityReport tilted_instability_experiment(
    const FunctionSpec& base, double t, std::span<const double> epsilon_grid,
    std::uint64_t seed, unsigned threads = 1, std::size_t T = 60,
    std::size_t N_crit = 200000) {
  InstabilityReport rep;
  rep.base_key = base.key;
  rep.t = t;
  Estimate k_base = critical_dimension(base, N_crit, seed, threads);
  rep.k_base = k_base.value;
  if (!(t >= 4.0 && t <= std::sqrt(k_base.hi)))
    throw std::invalid_argument(
        "tilted_instability_experiment: t outside [4, sqrt(k(X))]");
  FunctionSpec tilted = make_tilted(base, t);
  rep.tilted_key = tilted.key;
  rep.k_t = critical_dimension(tilted, N_crit, seed, threads).value;
  rep.k_t_closed_form = tilted_critical_dimension(k_base.value, t);
  double rmin = 0, rmax = 0;
  bool first = true;
  for (double eps : epsilon_grid) {
    DvoretzkyEstimate est = estimate_k_eps(tilted, eps, T, seed, threads);
    InstabilityPoint pt;
    pt.epsilon = eps;
    pt.k_eps = est.k_estimate;
    pt.predicted = eps * eps * rep.k_t;
    pt.ratio = double(std::max<std::size_t>(1, pt.k_eps)) / pt.predicted;
    rep.points.push_back(pt);
    rep.estimates.push_back(std::move(est));
    if (first || pt.ratio < rmin) rmin = pt.ratio;
    if (first || pt.ratio > rmax) rmax = pt.ratio;
    first = false;
  }
  rep.band = rmax / rmin;
  rep.passed = rep.band <= 4.0;
  return rep;
}

struct SandwichPoint {
  double delta = 0;
  std::size_t count = 0;
  double p = 0, lo = 0, hi = 0;
};

struct SandwichReport {
  std::string tilted_key;
  double k_t = 0;
  double mean_ratio = 0;  // E f_t(Z) / E ||Z||_2
  std::vector<SandwichPoint> points;
  double c4 = 0, C4 = 0;
  bool feasible = false;
};

// Two-sided deviation of f_t(Z) from its radial prediction:
// P( f_t(Z) <= (1-d) r ||Z||_2  or  f_t(Z) >= (1+d) r ||Z||_2 ),
// r = E f_t(Z) / E ||Z||_2, sandwiched by c4 e^{-C4 d^2 k_t} and
// C4 e^{-c4 d^2 k_t} with (c4, C4) fitted in [2^-8, 2^8].
inline SandwichReport radial_sandwich_experiment(const FunctionSpec& base,
                                              double t,
                                              std::span<const double> delta_grid,
                                              std::size_t N, std::uint64_t seed,
                                              unsigned threads = 1) {
  if (!(t >= 4.0))
    throw std::invalid_argument("radial_sandwich_experiment: t must be >= 4");
  for (double d : delta_grid)
    if (!(d > 0 && d < 1.0 / 3.0))
      throw std::invalid_argument(
          "radial_sandwich_experiment: delta grid must lie in (0, 1/3)");
  FunctionSpec tilted = make_tilted(base, t);
  SandwichReport rep;
  rep.tilted_key = tilted.key;
  std::size_t n = base.dim;
  // one pass: accumulate means and per-delta exceedance counts
  std::size_t nchunks = (N + kChunkSize - 1) / kChunkSize;
  std::vector<double> ft(N), r2(N);
  detail::parallel_chunks(nchunks, threads, [&](std::size_t c) {
    RngStream stream(seed, c);
    std::size_t lo = c * kChunkSize, hi = std::min(N, lo + kChunkSize);
    std::vector<double> z(n);
    for (std::size_t i = lo; i < hi; ++i) {
      stream.fill_gaussian(z.data(), n);
      ft[i] = tilted.eval(z);
      double s = 0;
      for (double v : z) s += v * v;
      r2[i] = std::sqrt(s);
    }
  });
  double mean_ft = 0, mean_r = 0;
  for (std::size_t i = 0; i < N; ++i) {
    mean_ft += ft[i];
    mean_r += r2[i];
  }
  mean_ft /= double(N);
  mean_r /= double(N);
  double ratio = mean_ft / mean_r;
  rep.mean_ratio = ratio;
  rep.k_t = (mean_ft / tilted.lipschitz) * (mean_ft / tilted.lipschitz);
  std::vector<double> exponents, p_lower, p_upper;
  for (double d : delta_grid) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < N; ++i) {
      double pred = ratio * r2[i];
      if (ft[i] <= (1.0 - d) * pred || ft[i] >= (1.0 + d) * pred) ++count;
    }
    Interval w = wilson_interval(count, N);
    rep.points.push_back({d, count, double(count) / double(N), w.lo, w.hi});
    if (count >= 10) {
      exponents.push_back(d * d * rep.k_t);
      p_lower.push_back(w.lo);
      p_upper.push_back(w.hi);
    }
  }
  ConstantBox box{1.0 / 256, 256.0};
  auto fit = fit_exponential_sandwich(exponents, p_lower, p_upper, box);
  rep.feasible = fit.feasible;
  rep.c4 = fit.c;
  rep.C4 = fit.C;
  return rep;
}

}  // namespace gcl
