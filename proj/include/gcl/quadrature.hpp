#pragma once

// Adaptive Simpson quadrature, used for Gaussian-weighted 1-D integrals.

#include <cmath>
#include <functional>
#include <vector>

#include "gcl/gaussian.hpp"

namespace gcl {

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// ∫_a^b f(t) dt with absolute tolerance scaled from rel_tol. The tolerance
// is seeded from a 64-panel composite estimate: a 3-point rule can miss all
// the mass of a peaked integrand and collapse the tolerance to noise level.
template <class F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-10,
                 int max_depth = 40) {
  constexpr int kPanels = 64;
  const double h = (b - a) / kPanels;
  std::vector<double> fs(2 * kPanels + 1);
  for (int i = 0; i <= 2 * kPanels; ++i) fs[std::size_t(i)] = f(a + 0.5 * h * i);
  double rough = 0;
  for (int i = 0; i < kPanels; ++i)
    rough += h / 6.0 *
             (fs[std::size_t(2 * i)] + 4.0 * fs[std::size_t(2 * i + 1)] +
              fs[std::size_t(2 * i + 2)]);
  const double tol = rel_tol * (std::fabs(rough) + 1e-30) / kPanels;
  double total = 0;
  for (int i = 0; i < kPanels; ++i) {
    double x0 = a + i * h;
    double fa = fs[std::size_t(2 * i)], fm = fs[std::size_t(2 * i + 1)],
           fb = fs[std::size_t(2 * i + 2)];
    double whole = h / 6.0 * (fa + 4.0 * fm + fb);
    total +=
        detail::simpson_step(f, x0, x0 + h, fa, fm, fb, whole, tol, max_depth);
  }
  return total;
}

// ∫ h(t) dγ(t) over [a, b] (defaults cover the mass to ~1e-23).
template <class H>
double integrate_gauss(const H& h, double a = -10.0, double b = 10.0,
                       double rel_tol = 1e-10) {
  return integrate([&](double t) { return h(t) * std_normal_pdf(t); }, a, b,
                   rel_tol);
}

}  // namespace gcl
