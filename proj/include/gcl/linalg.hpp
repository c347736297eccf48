#pragma once

// Small dense linear algebra: one-sided Jacobi singular values and
// modified Gram-Schmidt orthonormalization. Sized for matrices with
// m, n up to a few thousand; robustness over speed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gcl {

// Singular values of an m x n matrix stored column-major, descending.
// One-sided Jacobi on the columns: rotate column pairs until all are
// mutually orthogonal to relative 1e-12, singular values are the final
// column norms.
inline std::vector<double> jacobi_singular_values(std::size_t m, std::size_t n,
                                                  std::vector<double> a) {
  if (a.size() != m * n)
    throw std::invalid_argument("jacobi_singular_values: size mismatch");
  auto col = [&](std::size_t j) { return a.data() + j * m; };
  const double tol = 1e-12;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double* cp = col(p);
        double* cq = col(q);
        double app = 0, aqq = 0, apq = 0;
        for (std::size_t i = 0; i < m; ++i) {
          app += cp[i] * cp[i];
          aqq += cq[i] * cq[i];
          apq += cp[i] * cq[i];
        }
        if (std::fabs(apq) <= tol * std::sqrt(app * aqq) || apq == 0.0)
          continue;
        converged = false;
        double zeta = (aqq - app) / (2.0 * apq);
        double t = std::copysign(1.0, zeta) /
                   (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          double vp = cp[i], vq = cq[i];
          cp[i] = c * vp - s * vq;
          cq[i] = s * vp + c * vq;
        }
      }
    }
    if (converged) break;
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s2 = 0;
    const double* cj = col(j);
    for (std::size_t i = 0; i < m; ++i) s2 += cj[i] * cj[i];
    sv[j] = std::sqrt(s2);
  }
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

// Orthonormalize k rows of length n in place (row-major) by modified
// Gram-Schmidt with one re-orthogonalization pass. Returns false on
// numerical rank deficiency.
inline bool orthonormalize_rows(double* rows, std::size_t k, std::size_t n) {
  auto row = [&](std::size_t i) { return rows + i * n; };
  for (std::size_t i = 0; i < k; ++i) {
    double* ri = row(i);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < i; ++j) {
        const double* rj = row(j);
        double dot = 0;
        for (std::size_t t = 0; t < n; ++t) dot += ri[t] * rj[t];
        for (std::size_t t = 0; t < n; ++t) ri[t] -= dot * rj[t];
      }
    }
    double norm2 = 0;
    for (std::size_t t = 0; t < n; ++t) norm2 += ri[t] * ri[t];
    double norm = std::sqrt(norm2);
    if (norm < 1e-12) return false;
    for (std::size_t t = 0; t < n; ++t) ri[t] /= norm;
  }
  return true;
}

}  // namespace gcl
