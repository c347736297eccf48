#pragma once

// Scalar standard-Gaussian primitives: CDF, quantile, absolute moments.
//
// The CDF/quantile pair exchanges probabilities in quad precision. A double
// cannot hold Phi(x) losslessly once 1 - Phi(x) nears the spacing of doubles
// below 1: any double-valued inverse then errs by ~ulp(1)/pdf(x), which
// exceeds 1e-9 for x beyond ~5.6 and reaches ~1e-2 at x = 8. The quad channel
// keeps the 1e-9 round-trip on all of [-8, 8].

#include <quadmath.h>

#include <cmath>
#include <stdexcept>

namespace gcl {

inline constexpr double kSqrt2 = 1.4142135623730951;
inline constexpr double kSqrt2Pi = 2.5066282746310002;
inline constexpr double kSqrtPi = 1.7724538509055160;

// Probability channel of the CDF/quantile pair.
using prob_t = __float128;

// Standard normal density.
inline double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / kSqrt2Pi;
}

// Φ(x); saturates beyond ±40. Narrowing the result to double costs nothing
// for |x| ≤ 8 on the lower side but discards the upper tail.
inline prob_t std_normal_cdf(double x) {
  if (x <= -40.0) return 0.0;
  if (x >= 40.0) return 1.0;
  return prob_t(0.5) * erfcq(-prob_t(x) / sqrtq(prob_t(2)));
}

// Upper tail 1 - Φ(x), accurate deep into the tail.
inline prob_t std_normal_sf(double x) { return std_normal_cdf(-x); }

// Φ⁻¹(p). Rational initial guess (Acklam) on the smaller of {p, 1-p},
// polished by quad Newton iterations against the matching tail so every
// residual keeps full relative precision. p with min(p, 1-p) < 1e-300 is a
// domain error: silent clamping would corrupt tail studies.
inline double std_normal_quantile(prob_t p) {
  if (!(p > 0 && p < 1))
    throw std::domain_error("std_normal_quantile: p must be in (0,1)");
  const bool upper = p > prob_t(0.5);
  const prob_t q = upper ? prob_t(1) - p : p;
  if (q < prob_t(1e-300))
    throw std::domain_error("std_normal_quantile: p out of supported range");

  // Acklam's rational approximation, |error| < 1.15e-9 before polishing.
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  const double qd = double(q);
  double x;
  if (qd < 0.02425) {
    double r = std::sqrt(-2.0 * std::log(qd));
    x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  } else {
    double s = qd - 0.5, r = s * s;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        s /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  // Newton on the lower tail: both Phi(x) and q are small, no cancellation.
  const prob_t inv_sqrt2 = prob_t(1) / sqrtq(prob_t(2));
  const prob_t sqrt_2pi = sqrtq(4 * acosq(prob_t(0)));  // sqrt(2 pi)
  prob_t xq = x;
  for (int it = 0; it < 4; ++it) {
    prob_t e = prob_t(0.5) * erfcq(-xq * inv_sqrt2) - q;
    prob_t pdf = expq(prob_t(-0.5) * xq * xq) / sqrt_2pi;
    xq -= e / pdf;
  }
  double out = double(xq);
  return upper ? -out : out;
}

// 𝔼|ζ|^p for ζ ~ N(0,1), via the closed Gamma-function formula
// 2^{p/2} Γ((p+1)/2) / √π.
inline double abs_moment(double p) {
  if (p < 0.0) throw std::domain_error("abs_moment: p must be >= 0");
  return std::exp(0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0))) /
         kSqrtPi;
}

// σ_p = (½ 𝔼|ζ|^p)^{1/p}, the one-sided moment scale of the half-Gaussian.
inline double sigma_p(double p) {
  return std::pow(0.5 * abs_moment(p), 1.0 / p);
}

}  // namespace gcl
