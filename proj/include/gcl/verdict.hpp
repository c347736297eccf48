#pragma once

// Verdict records for inequality checks, with admissible constant boxes
// and feasibility-search helpers. Bounds that hold up to unspecified
// universal constants are checked as existence-of-constants inside a
// declared box; the fitted values are reported for regression tracking.

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace gcl {

struct ConstantBox {
  double lo = 0, hi = 0;
  bool contains(double v) const { return v >= lo && v <= hi; }
  double clamp(double v) const { return std::min(hi, std::max(lo, v)); }
};

struct GridDiagnostic {
  double t = 0;
  double lhs = 0, rhs = 0;  // inequality lhs <= rhs after CI slack
  bool resolved = true;
  bool ok = true;
};

struct InequalityVerdict {
  std::string name;
  bool passed = false;
  std::map<std::string, double> constants;
  std::map<std::string, ConstantBox> boxes;
  double worst_margin = 0;  // min over resolved grid points of rhs - lhs
  std::vector<GridDiagnostic> grid;
  std::string note;

  void finish_from_grid() {
    bool first = true;
    passed = true;
    for (const auto& g : grid) {
      if (!g.resolved) continue;
      double m = g.rhs - g.lhs;
      if (first || m < worst_margin) {
        worst_margin = m;
        first = false;
      }
      if (!g.ok) passed = false;
    }
  }
};

namespace detail {

inline std::vector<double> log_grid(const ConstantBox& box, int points = 161) {
  std::vector<double> g(points);
  double llo = std::log(box.lo), lhi = std::log(box.hi);
  for (int i = 0; i < points; ++i)
    g[i] = std::exp(llo + (lhi - llo) * double(i) / double(points - 1));
  g.front() = box.lo;
  g.back() = box.hi;
  return g;
}

}  // namespace detail

// Feasibility search for a lower bound  c * exp(-C * e_i) <= p_i  over a
// set of resolved points, with (c, C) constrained to boxes. Enlarging a
// box can only enlarge the feasible set. Returns the pair with the
// smallest feasible C (reported c is the largest admissible at that C).
struct LowerBoundFit {
  bool feasible = false;
  double c = 0, C = 0;
};

inline LowerBoundFit fit_exponential_lower_bound(
    const std::vector<double>& exponents, const std::vector<double>& p_upper,
    const ConstantBox& c_box, const ConstantBox& C_box) {
  LowerBoundFit fit;
  for (double C : detail::log_grid(C_box)) {
    double c_max = c_box.hi;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
      // need c <= p_i * exp(C * e_i)
      double cap = p_upper[i] * std::exp(std::min(700.0, C * exponents[i]));
      c_max = std::min(c_max, cap);
    }
    if (c_max >= c_box.lo) {
      fit.feasible = true;
      fit.C = C;
      fit.c = c_max;
      return fit;
    }
  }
  return fit;
}

// Feasibility for a two-sided sandwich with a shared constant pair:
//   c * exp(-C * e_i) <= p_hi_i   and   p_lo_i <= C * exp(-c * e_i).
// Reports the largest feasible c with the smallest C admissible for it.
struct SandwichFit {
  bool feasible = false;
  double c = 0, C = 0;
};

inline SandwichFit fit_exponential_sandwich(const std::vector<double>& exponents,
                                            const std::vector<double>& p_lower,
                                            const std::vector<double>& p_upper,
                                            const ConstantBox& box) {
  SandwichFit fit;
  auto grid = detail::log_grid(box);
  for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
    double c = *it;
    double C_needed = box.lo;
    bool ok = true;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
      double e = exponents[i];
      // upper side: C >= p_lo_i * exp(c * e_i)
      C_needed = std::max(C_needed, p_lower[i] * std::exp(std::min(700.0, c * e)));
      // lower side: C >= ln(c / p_hi_i) / e_i  (when binding)
      if (p_upper[i] <= 0.0) {
        ok = false;
        break;
      }
      if (c > p_upper[i] && e > 0.0)
        C_needed = std::max(C_needed, std::log(c / p_upper[i]) / e);
      else if (c > p_upper[i] && e <= 0.0) {
        ok = false;
        break;
      }
    }
    if (ok && C_needed <= box.hi) {
      fit.feasible = true;
      fit.c = c;
      fit.C = C_needed;
      return fit;
    }
  }
  return fit;
}

}  // namespace gcl
