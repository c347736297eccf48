#pragma once

// Distribution-free statistical helpers: Wilson score intervals,
// Kolmogorov-Smirnov distances, order-statistic quantiles and
// delete-block jackknife standard errors.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace gcl {

// A point estimate with a confidence interval.
struct Estimate {
  double value = 0, lo = 0, hi = 0;
};

struct Interval {
  double lo = 0, hi = 0;
};

// Wilson score interval for a binomial proportion, z = 1.96 for 95%.
inline Interval wilson_interval(std::size_t successes, std::size_t trials,
                                double z = 1.959963984540054) {
  if (trials == 0) return {0.0, 1.0};
  double n = double(trials), k = double(successes);
  double phat = k / n, z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (phat + z2 / (2.0 * n)) / denom;
  double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

// Empirical quantile of a sorted sample (nearest order statistic).
inline double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("sorted_quantile: empty");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  double idx = p * double(sorted.size()) - 0.5;
  if (idx <= 0.0) return sorted.front();
  if (idx >= double(sorted.size() - 1)) return sorted.back();
  std::size_t lo = static_cast<std::size_t>(idx);
  double w = idx - double(lo);
  return sorted[lo] * (1.0 - w) + sorted[lo + 1] * w;
}

// Empirical CDF value P(X <= x) of a sorted sample.
inline double sorted_cdf(std::span<const double> sorted, double x) {
  auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
  return double(it - sorted.begin()) / double(sorted.size());
}

// One-sample KS distance against a reference CDF.
template <class Cdf>
double ks_distance(std::span<const double> sorted, const Cdf& cdf) {
  double d = 0;
  std::size_t n = sorted.size();
  for (std::size_t i = 0; i < n; ++i) {
    double f = cdf(sorted[i]);
    d = std::max(d, std::fabs(f - double(i) / n));
    d = std::max(d, std::fabs(double(i + 1) / n - f));
  }
  return d;
}

// Two-sample KS distance between sorted samples.
inline double ks_distance_two_sample(std::span<const double> a,
                                     std::span<const double> b) {
  double d = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

// Median with a distribution-free 95% order-statistic interval.
inline Estimate median_with_ci(std::span<const double> sorted,
                               double z = 1.959963984540054) {
  std::size_t n = sorted.size();
  if (n == 0) throw std::invalid_argument("median_with_ci: empty");
  double med = (n % 2 == 1) ? sorted[n / 2]
                            : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  double half = z * 0.5 * std::sqrt(double(n));
  auto clampi = [&](double v) {
    return std::min(n - 1.0, std::max(0.0, v));
  };
  std::size_t jlo = static_cast<std::size_t>(clampi(0.5 * n - half - 1.0));
  std::size_t jhi = static_cast<std::size_t>(clampi(0.5 * n + half));
  return {med, sorted[jlo], sorted[jhi]};
}

// Delete-block jackknife standard error of a statistic computed from
// per-block accumulators. `stat(skip)` must return the statistic with
// block `skip` removed (skip == nblocks means use all blocks).
inline double jackknife_se(std::size_t nblocks,
                           const std::function<double(std::size_t)>& stat) {
  if (nblocks < 2) return 0.0;
  std::vector<double> theta(nblocks);
  double mean = 0;
  for (std::size_t b = 0; b < nblocks; ++b) {
    theta[b] = stat(b);
    mean += theta[b];
  }
  mean /= double(nblocks);
  double ss = 0;
  for (double t : theta) ss += (t - mean) * (t - mean);
  return std::sqrt(ss * double(nblocks - 1) / double(nblocks));
}

}  // namespace gcl
