#pragma once

// Reproducible Monte Carlo estimation of distributional quantities of f(Z):
// empirical distributions, summary statistics, tail curves with Wilson
// intervals, E||grad f||^2 and the constants ov(f), s(f).
//
// Sampling is chunked: chunk c of 2^14 samples is produced by the stream
// (master_seed, stream_base + c), so the result is a pure function of the
// seed and is identical for any thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gcl/function_spec.hpp"
#include "gcl/rng.hpp"
#include "gcl/stats.hpp"

namespace gcl {

inline constexpr std::size_t kChunkSize = 1u << 14;
inline constexpr std::size_t kJackknifeBlocks = 100;
inline constexpr std::uint64_t kGradStreamBase = 1ull << 32;
inline constexpr std::uint64_t kAuxStreamBase = 1ull << 33;

namespace detail {

// Run fn(c) for c in [0, nchunks) across `threads` workers. Each chunk's
// work writes disjoint output, so the result does not depend on `threads`.
template <class Fn>
void parallel_chunks(std::size_t nchunks, unsigned threads, const Fn& fn) {
  if (threads <= 1 || nchunks <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c) fn(c);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t c = t; c < nchunks; c += threads) fn(c);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

struct MomentBlock {
  std::size_t n = 0;
  double sum = 0, sum2 = 0;
};

struct EmpiricalDistribution {
  std::vector<double> values;  // sorted ascending
  std::size_t count = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t stream_lo = 0, stream_hi = 0;  // stream id range used
  std::string function_key;
  std::vector<MomentBlock> blocks;  // generation-order blocks for jackknife

  double quantile(double p) const { return sorted_quantile(values, p); }
  double cdf(double x) const { return sorted_cdf(values, x); }
  double min() const { return values.front(); }
  double max() const { return values.back(); }
};

namespace detail {

inline std::vector<MomentBlock> block_accumulators(
    std::span<const double> generation_order, std::size_t nblocks) {
  std::size_t n = generation_order.size();
  nblocks = std::min(nblocks, n);
  std::vector<MomentBlock> blocks(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b) {
    std::size_t lo = b * n / nblocks, hi = (b + 1) * n / nblocks;
    MomentBlock& blk = blocks[b];
    blk.n = hi - lo;
    for (std::size_t i = lo; i < hi; ++i) {
      double v = generation_order[i];
      blk.sum += v;
      blk.sum2 += v * v;
    }
  }
  return blocks;
}

inline double blocks_variance(std::span<const MomentBlock> blocks,
                              std::size_t skip) {
  double n = 0, s1 = 0, s2 = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (b == skip) continue;
    n += double(blocks[b].n);
    s1 += blocks[b].sum;
    s2 += blocks[b].sum2;
  }
  if (n < 2) return 0;
  return (s2 - s1 * s1 / n) / (n - 1.0);
}

}  // namespace detail

// N evaluations of f on independent standard Gaussian vectors.
// Deterministic in (seed, stream_base) for any thread count.
inline EmpiricalDistribution sample_values(const FunctionSpec& spec,
                                           std::size_t N, std::uint64_t seed,
                                           unsigned threads = 1,
                                           std::uint64_t stream_base = 0) {
  if (N < 100) throw std::invalid_argument("sample_values: N must be >= 100");
  std::size_t nchunks = (N + kChunkSize - 1) / kChunkSize;
  std::vector<double> out(N);
  std::vector<std::size_t> bad_chunk(nchunks, std::size_t(-1));
  detail::parallel_chunks(nchunks, threads, [&](std::size_t c) {
    RngStream stream(seed, stream_base + c);
    std::size_t lo = c * kChunkSize, hi = std::min(N, lo + kChunkSize);
    std::vector<double> z(spec.dim);
    for (std::size_t i = lo; i < hi; ++i) {
      stream.fill_gaussian(z.data(), z.size());
      double v = spec.eval(z);
      if (!std::isfinite(v)) {
        bad_chunk[c] = i;
        return;
      }
      out[i] = v;
    }
  });
  for (std::size_t c = 0; c < nchunks; ++c) {
    if (bad_chunk[c] != std::size_t(-1))
      throw std::runtime_error("sample_values: non-finite evaluation at sample " +
                               std::to_string(bad_chunk[c]) + " of " +
                               spec.key);
  }
  EmpiricalDistribution emp;
  emp.count = N;
  emp.master_seed = seed;
  emp.stream_lo = stream_base;
  emp.stream_hi = stream_base + nchunks;
  emp.function_key = spec.key;
  emp.blocks = detail::block_accumulators(out, kJackknifeBlocks);
  std::sort(out.begin(), out.end());
  emp.values = std::move(out);
  return emp;
}

struct SummaryStats {
  Estimate mean, median, variance;
  std::map<double, Estimate> centered_moments;  // p -> E|f - med|^p, about median
};

// Sample mean (CLT interval), median (order statistics), variance
// (delete-block jackknife) and centered p-th moments about the median.
inline SummaryStats estimate_stats(const EmpiricalDistribution& emp,
                                   std::span<const double> p_list = {}) {
  SummaryStats st;
  std::size_t n = emp.count;
  double s1 = 0, s2 = 0;
  for (const auto& b : emp.blocks) {
    s1 += b.sum;
    s2 += b.sum2;
  }
  double mean = s1 / double(n);
  double var = (s2 - s1 * s1 / double(n)) / double(n - 1);
  double se_mean = std::sqrt(std::max(0.0, var) / double(n));
  st.mean = {mean, mean - 1.96 * se_mean, mean + 1.96 * se_mean};
  st.median = median_with_ci(emp.values);
  double se_var = jackknife_se(emp.blocks.size(), [&](std::size_t skip) {
    return detail::blocks_variance(emp.blocks, skip);
  });
  st.variance = {var, var - 1.96 * se_var, var + 1.96 * se_var};
  double med = st.median.value;
  for (double p : p_list) {
    double m1 = 0, m2 = 0;
    for (double v : emp.values) {
      double a = std::pow(std::fabs(v - med), p);
      m1 += a;
      m2 += a * a;
    }
    m1 /= double(n);
    m2 /= double(n);
    double se = std::sqrt(std::max(0.0, m2 - m1 * m1) / double(n));
    st.centered_moments[p] = {m1, m1 - 1.96 * se, m1 + 1.96 * se};
  }
  return st;
}

struct TailPoint {
  double t = 0;
  std::size_t count = 0;
  double p = 0, lo = 0, hi = 0;
  bool resolved = false;  // at least 10 exceedances
};

struct ConcentrationProfile {
  double center = 0, scale = 1;
  std::string center_label, scale_label;
  std::vector<double> t_grid;
  std::vector<TailPoint> upper, lower, two_sided;
};

// Empirical P(f >= center + t*scale), P(f <= center - t*scale) and their
// union, with 95% Wilson intervals; points with fewer than 10 exceedances
// are flagged unresolved rather than reported as zero.
inline ConcentrationProfile tail_curve(const EmpiricalDistribution& emp,
                                       double center, double scale,
                                       std::span<const double> t_grid,
                                       const std::string& center_label = "",
                                       const std::string& scale_label = "",
                                       double z = 1.959963984540054) {
  if (!(scale > 0)) throw std::invalid_argument("tail_curve: scale must be > 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("tail_curve: grid must be ascending");
  ConcentrationProfile prof;
  prof.center = center;
  prof.scale = scale;
  prof.center_label = center_label;
  prof.scale_label = scale_label;
  prof.t_grid.assign(t_grid.begin(), t_grid.end());
  const auto& v = emp.values;
  std::size_t n = emp.count;
  auto mk = [&](std::size_t count) {
    TailPoint tp;
    tp.count = count;
    tp.p = double(count) / double(n);
    Interval w = wilson_interval(count, n, z);
    tp.lo = w.lo;
    tp.hi = w.hi;
    tp.resolved = count >= 10;
    return tp;
  };
  for (double t : t_grid) {
    // upper: # { v >= center + t*scale }
    auto iu = std::lower_bound(v.begin(), v.end(), center + t * scale);
    TailPoint up = mk(std::size_t(v.end() - iu));
    up.t = t;
    // lower: # { v <= center - t*scale }
    auto il = std::upper_bound(v.begin(), v.end(), center - t * scale);
    TailPoint lo = mk(std::size_t(il - v.begin()));
    lo.t = t;
    TailPoint both = mk(up.count + lo.count);
    both.t = t;
    prof.upper.push_back(up);
    prof.lower.push_back(lo);
    prof.two_sided.push_back(both);
  }
  return prof;
}

// Monte Carlo mean of ||grad f(Z)||_2^2 with a jackknife interval.
inline Estimate estimate_grad_sq(const FunctionSpec& spec, std::size_t N,
                                 std::uint64_t seed, unsigned threads = 1,
                                 std::uint64_t stream_base = kGradStreamBase) {
  std::size_t nchunks = (N + kChunkSize - 1) / kChunkSize;
  std::vector<double> gsq(N);
  detail::parallel_chunks(nchunks, threads, [&](std::size_t c) {
    RngStream stream(seed, stream_base + c);
    std::size_t lo = c * kChunkSize, hi = std::min(N, lo + kChunkSize);
    std::vector<double> z(spec.dim), g(spec.dim);
    for (std::size_t i = lo; i < hi; ++i) {
      stream.fill_gaussian(z.data(), z.size());
      spec.subgradient(z, g);
      double s = 0;
      for (double gi : g) s += gi * gi;
      gsq[i] = s;
    }
  });
  auto blocks = detail::block_accumulators(gsq, kJackknifeBlocks);
  double s1 = 0, n = 0;
  for (const auto& b : blocks) {
    s1 += b.sum;
    n += double(b.n);
  }
  double mean = s1 / n;
  double se = jackknife_se(blocks.size(), [&](std::size_t skip) {
    double sum = 0, cnt = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (b == skip) continue;
      sum += blocks[b].sum;
      cnt += double(blocks[b].n);
    }
    return sum / cnt;
  });
  return {mean, mean - 1.96 * se, mean + 1.96 * se};
}

struct ConcConstants {
  Estimate variance;
  Estimate grad_sq_mean;
  double lipschitz = 0;
  bool has_lipschitz = false;
  Estimate ov;  // sqrt(Var)/Lip
  Estimate s;   // sqrt(Var / E||grad f||^2)
};

inline ConcConstants concentration_constants(const FunctionSpec& spec,
                                             std::size_t N, std::uint64_t seed,
                                             unsigned threads = 1) {
  auto emp = sample_values(spec, N, seed, threads);
  auto st = estimate_stats(emp);
  ConcConstants cc;
  cc.variance = st.variance;
  cc.grad_sq_mean = estimate_grad_sq(spec, N, seed, threads);
  cc.has_lipschitz = spec.has_lipschitz;
  cc.lipschitz = spec.lipschitz;
  auto sq = [](double v) { return std::sqrt(std::max(0.0, v)); };
  if (spec.has_lipschitz && spec.lipschitz > 0) {
    cc.ov = {sq(cc.variance.value) / spec.lipschitz,
             sq(cc.variance.lo) / spec.lipschitz,
             sq(cc.variance.hi) / spec.lipschitz};
  }
  double g = cc.grad_sq_mean.value, glo = std::max(1e-300, cc.grad_sq_mean.lo),
         ghi = cc.grad_sq_mean.hi;
  cc.s = {sq(cc.variance.value / g), sq(cc.variance.lo / ghi),
          sq(cc.variance.hi / glo)};
  return cc;
}

}  // namespace gcl
