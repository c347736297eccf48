#pragma once

// The catalog of convex (and flagged non-convex) Lipschitz functions under
// study: lp / sup / ellipsoidal / tilted norms, linear functionals, the
// one-dimensional ramp family g_alpha and odd monomials. Each spec carries
// evaluation, an a.e. subgradient with a deterministic tie-break, and
// closed-form metadata (Lipschitz constant, matrix norms).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcl/gaussian.hpp"
#include "gcl/linalg.hpp"

namespace gcl {

enum class Family {
  linear,
  lp_norm,
  sup_norm,
  ellipsoidal,
  tilted,
  g_alpha,
  monomial_odd,
  custom
};

struct MatrixParams {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;  // column-major
  std::vector<double> singular_values;
  double hs_norm = 0, schatten4_norm = 0, op_norm = 0;
};

struct FunctionSpec {
  Family family = Family::custom;
  std::size_t dim = 0;
  bool convex = true;
  bool has_lipschitz = false;
  double lipschitz = 0;
  std::string key;

  double p = 0;                              // lp_norm exponent
  std::vector<double> u;                     // linear coefficients
  double alpha = 0, c_alpha = 0;             // g_alpha
  int monomial_k = 0;                        // odd monomial t^{2k+1}
  double pos_part_mean = 0;                  // E (g_k)_+ for the monomial
  std::shared_ptr<const MatrixParams> mat;   // ellipsoidal
  std::shared_ptr<const FunctionSpec> tilt_base;
  double tilt_t = 0;
  std::vector<double> x0_star;               // dual-extremal functional
  double tilt_b = 0;                         // b(X) of the base norm

  bool is_norm() const {
    return family == Family::lp_norm || family == Family::sup_norm ||
           family == Family::ellipsoidal || family == Family::tilted;
  }
  bool is_one_dim() const { return dim == 1; }

  double eval(std::span<const double> z) const;
  double operator()(std::span<const double> z) const { return eval(z); }
  double eval1d(double t) const { return eval(std::span<const double>(&t, 1)); }

  void subgradient(std::span<const double> z, std::span<double> out) const;
  std::vector<double> subgradient(std::span<const double> z) const {
    std::vector<double> g(dim);
    subgradient(z, g);
    return g;
  }
  // Derivative of a 1-D spec (a.e.; fixed selection at kinks).
  double deriv1d(double t) const {
    double g;
    subgradient(std::span<const double>(&t, 1), std::span<double>(&g, 1));
    return g;
  }
};

namespace detail {

inline std::size_t argmax_abs(std::span<const double> z) {
  std::size_t best = 0;
  double bv = std::fabs(z[0]);
  for (std::size_t i = 1; i < z.size(); ++i) {
    double v = std::fabs(z[i]);
    if (v > bv) {  // ties resolved by lowest index
      bv = v;
      best = i;
    }
  }
  return best;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline std::string format_scalar(double v) {
  if (v == std::floor(v) && std::fabs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace detail

inline double FunctionSpec::eval(std::span<const double> z) const {
  switch (family) {
    case Family::linear:
      return detail::dot(z, u);
    case Family::sup_norm: {
      double m = 0;
      for (double v : z) m = std::max(m, std::fabs(v));
      return m;
    }
    case Family::lp_norm: {
      if (p == 2.0) {
        double s = 0;
        for (double v : z) s += v * v;
        return std::sqrt(s);
      }
      if (p == 1.0) {
        double s = 0;
        for (double v : z) s += std::fabs(v);
        return s;
      }
      if (p == 4.0) {
        double s = 0;
        for (double v : z) {
          double v2 = v * v;
          s += v2 * v2;
        }
        return std::sqrt(std::sqrt(s));
      }
      double s = 0;
      for (double v : z) s += std::pow(std::fabs(v), p);
      return std::pow(s, 1.0 / p);
    }
    case Family::ellipsoidal: {
      double s = 0;
      const std::size_t m = mat->rows, n = mat->cols;
      for (std::size_t i = 0; i < m; ++i) {
        double w = 0;
        for (std::size_t j = 0; j < n; ++j) w += mat->a[j * m + i] * z[j];
        s += w * w;
      }
      return std::sqrt(s);
    }
    case Family::tilted:
      return tilt_base->eval(z) + tilt_t * std::fabs(detail::dot(z, x0_star));
    case Family::g_alpha: {
      double t = z[0];
      return t > alpha ? c_alpha * (t - alpha) : 0.0;
    }
    case Family::monomial_odd: {
      double t = z[0];
      return std::pow(t, 2 * monomial_k + 1);
    }
    case Family::custom:
      throw std::logic_error("custom specs must override eval");
  }
  return 0;
}

inline void FunctionSpec::subgradient(std::span<const double> z,
                                      std::span<double> out) const {
  switch (family) {
    case Family::linear:
      std::copy(u.begin(), u.end(), out.begin());
      return;
    case Family::sup_norm: {
      std::fill(out.begin(), out.end(), 0.0);
      std::size_t i = detail::argmax_abs(z);
      out[i] = z[i] > 0 ? 1.0 : (z[i] < 0 ? -1.0 : 0.0);
      return;
    }
    case Family::lp_norm: {
      double norm = eval(z);
      if (norm == 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
      }
      if (p == 1.0) {
        for (std::size_t i = 0; i < z.size(); ++i)
          out[i] = z[i] > 0 ? 1.0 : (z[i] < 0 ? -1.0 : 0.0);
        return;
      }
      if (p == 2.0) {
        for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] / norm;
        return;
      }
      if (p == 4.0) {
        double n3 = norm * norm * norm;
        for (std::size_t i = 0; i < z.size(); ++i) {
          out[i] = z[i] * z[i] * z[i] / n3;
        }
        return;
      }
      for (std::size_t i = 0; i < z.size(); ++i) {
        double a = std::fabs(z[i]);
        out[i] = a == 0.0 ? 0.0
                          : std::copysign(std::pow(a / norm, p - 1.0), z[i]);
      }
      return;
    }
    case Family::ellipsoidal: {
      const std::size_t m = mat->rows, n = mat->cols;
      std::vector<double> w(m, 0.0);
      double s = 0;
      for (std::size_t i = 0; i < m; ++i) {
        double wi = 0;
        for (std::size_t j = 0; j < n; ++j) wi += mat->a[j * m + i] * z[j];
        w[i] = wi;
        s += wi * wi;
      }
      double norm = std::sqrt(s);
      if (norm == 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
      }
      for (std::size_t j = 0; j < n; ++j) {
        double g = 0;
        for (std::size_t i = 0; i < m; ++i) g += mat->a[j * m + i] * w[i];
        out[j] = g / norm;
      }
      return;
    }
    case Family::tilted: {
      tilt_base->subgradient(z, out);
      double ip = detail::dot(z, x0_star);
      double sgn = ip > 0 ? 1.0 : (ip < 0 ? -1.0 : 0.0);
      for (std::size_t i = 0; i < z.size(); ++i)
        out[i] += tilt_t * sgn * x0_star[i];
      return;
    }
    case Family::g_alpha:
      out[0] = z[0] > alpha ? c_alpha : 0.0;
      return;
    case Family::monomial_odd: {
      double t = z[0];
      out[0] = (2 * monomial_k + 1) * std::pow(t, 2 * monomial_k);
      return;
    }
    case Family::custom:
      throw std::logic_error("custom specs must override subgradient");
  }
}

// -------- factories --------

inline FunctionSpec make_linear(std::vector<double> u) {
  double n2 = 0;
  for (double v : u) n2 += v * v;
  if (n2 == 0.0) throw std::invalid_argument("make_linear: zero vector");
  FunctionSpec f;
  f.family = Family::linear;
  f.dim = u.size();
  f.convex = true;
  f.has_lipschitz = true;
  f.lipschitz = std::sqrt(n2);
  f.key = "linear:n=" + std::to_string(u.size());
  f.u = std::move(u);
  return f;
}

inline FunctionSpec make_lp_norm(std::size_t n, double p) {
  if (n == 0) throw std::invalid_argument("make_lp_norm: n must be positive");
  if (std::isinf(p)) {
    FunctionSpec f;
    f.family = Family::sup_norm;
    f.dim = n;
    f.convex = true;
    f.has_lipschitz = true;
    f.lipschitz = 1.0;
    f.key = "linf:n=" + std::to_string(n);
    return f;
  }
  if (p < 1.0) throw std::invalid_argument("make_lp_norm: p < 1 is not a norm");
  FunctionSpec f;
  f.family = Family::lp_norm;
  f.dim = n;
  f.convex = true;
  f.p = p;
  f.has_lipschitz = true;
  // Euclidean operator bound: 1 for p >= 2, n^{1/p - 1/2} below.
  f.lipschitz = p >= 2.0 ? 1.0 : std::pow(double(n), 1.0 / p - 0.5);
  f.key = "l" + detail::format_scalar(p) + ":n=" + std::to_string(n);
  return f;
}

inline FunctionSpec make_sup_norm(std::size_t n) {
  return make_lp_norm(n, std::numeric_limits<double>::infinity());
}

// Ellipsoidal norm z -> ||Az||_2, A given column-major.
inline FunctionSpec make_ellipsoidal(std::size_t m, std::size_t n,
                                     std::vector<double> a,
                                     const std::string& tag = "") {
  auto mp = std::make_shared<MatrixParams>();
  mp->rows = m;
  mp->cols = n;
  mp->a = std::move(a);
  mp->singular_values = jacobi_singular_values(m, n, mp->a);
  double hs2 = 0, s4 = 0;
  for (double s : mp->singular_values) {
    hs2 += s * s;
    s4 += s * s * s * s;
  }
  mp->hs_norm = std::sqrt(hs2);
  mp->schatten4_norm = std::pow(s4, 0.25);
  mp->op_norm = mp->singular_values.empty() ? 0.0 : mp->singular_values[0];
  if (mp->op_norm <= 0.0)
    throw std::invalid_argument("make_ellipsoidal: zero matrix");
  FunctionSpec f;
  f.family = Family::ellipsoidal;
  f.dim = n;
  f.convex = true;
  f.has_lipschitz = true;
  f.lipschitz = mp->op_norm;
  f.mat = std::move(mp);
  f.key = "ellipsoidal:" + (tag.empty() ? "custom" : tag) +
          ":n=" + std::to_string(n);
  return f;
}

// Tilted norm f_t(x) = ||x|| + t |<x, x0*>| with the dual-extremal x0*
// supplied per base family (sup -> e_1, lp with p >= 2 -> e_1, lp with
// p < 2 -> the diagonal dual point).
inline FunctionSpec make_tilted(FunctionSpec base, double t) {
  if (!(t > 0)) throw std::invalid_argument("make_tilted: t must be > 0");
  if (base.family != Family::sup_norm && base.family != Family::lp_norm)
    throw std::invalid_argument(
        "make_tilted: base must be an lp or sup norm family");
  std::size_t n = base.dim;
  std::vector<double> x0(n, 0.0);
  double b = base.lipschitz;
  if (base.family == Family::sup_norm || base.p >= 2.0) {
    x0[0] = 1.0;
  } else {
    double v = std::pow(double(n), 1.0 / base.p - 1.0);
    std::fill(x0.begin(), x0.end(), v);
  }
  FunctionSpec f;
  f.family = Family::tilted;
  f.dim = n;
  f.convex = true;
  f.has_lipschitz = true;
  f.lipschitz = (1.0 + t) * b;  // b_t = (1+t) b
  f.tilt_t = t;
  f.tilt_b = b;
  f.x0_star = std::move(x0);
  f.key = "tilted:" + base.key + ":t=" + detail::format_scalar(t);
  f.tilt_base = std::make_shared<const FunctionSpec>(std::move(base));
  return f;
}

// g_alpha(t) = c_alpha (t - alpha)_+ with c_alpha = (1 - Phi(alpha))^{-1/2}.
inline FunctionSpec make_galpha(double alpha) {
  if (alpha < 2.0) throw std::invalid_argument("make_galpha: alpha must be >= 2");
  FunctionSpec f;
  f.family = Family::g_alpha;
  f.dim = 1;
  f.convex = true;
  f.alpha = alpha;
  f.c_alpha = 1.0 / std::sqrt(double(std_normal_sf(alpha)));
  f.has_lipschitz = true;
  f.lipschitz = f.c_alpha;
  f.key = "galpha:a=" + detail::format_scalar(alpha);
  return f;
}

// g_k(t) = t^{2k+1}: non-convex, non-Lipschitz negative control.
inline FunctionSpec make_odd_monomial(int k) {
  if (k < 1) throw std::invalid_argument("make_odd_monomial: k must be >= 1");
  FunctionSpec f;
  f.family = Family::monomial_odd;
  f.dim = 1;
  f.convex = false;
  f.has_lipschitz = false;
  f.monomial_k = k;
  double fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;
  f.pos_part_mean = std::pow(2.0, k) * fact / kSqrt2Pi;  // 2^k k! / sqrt(2 pi)
  f.key = "monomial:k=" + std::to_string(k);
  return f;
}

// -------- two-sided rate functions --------

enum class RateKind { alpha_inf, alpha_4, alpha_ellipsoidal };

struct RateFunction {
  RateKind kind;
  std::size_t n = 0;
  std::shared_ptr<const MatrixParams> mat;
};

inline double rate_value(const RateFunction& r, double t) {
  if (t < 0) throw std::invalid_argument("rate_value: t must be >= 0");
  switch (r.kind) {
    case RateKind::alpha_inf:
      return std::max(t * t, t * std::sqrt(std::log(double(r.n))));
    case RateKind::alpha_4: {
      double n = double(r.n);
      return std::max(
          std::min(t * t * std::sqrt(n), std::sqrt(t) * std::pow(n, 0.375)),
          t * t);
    }
    case RateKind::alpha_ellipsoidal: {
      double hs = r.mat->hs_norm, s4 = r.mat->schatten4_norm,
             op = r.mat->op_norm;
      double s44 = s4 * s4 * s4 * s4;
      return std::max(std::min(t * t * hs * hs / s44, t * hs / (op * op)),
                      t * t / (op * op));
    }
  }
  return 0;
}

}  // namespace gcl
