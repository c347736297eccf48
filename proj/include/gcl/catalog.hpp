#pragma once

// String-keyed access to the function catalog. Keys follow the factory
// naming ("linf:n=1024", "tilted:linf:n=256:t=4", "galpha:a=3") so that a
// spec's own key re-resolves to an equivalent spec. Matrices for
// ellipsoidal norms load from plain text: a two-integer header (m n)
// followed by m*n reals in column-major order.

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcl/function_spec.hpp"

namespace gcl {

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(s.substr(pos));
      break;
    }
    parts.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

inline double parse_field(const std::string& part, const std::string& name,
                          const std::string& key) {
  std::string prefix = name + "=";
  if (part.rfind(prefix, 0) != 0)
    throw std::invalid_argument("catalog: expected '" + prefix + "...' in key '" +
                                key + "', got '" + part + "'");
  std::size_t used = 0;
  double v = std::stod(part.substr(prefix.size()), &used);
  if (used != part.size() - prefix.size())
    throw std::invalid_argument("catalog: bad number in key '" + key + "'");
  return v;
}

}  // namespace detail

inline std::vector<double> load_matrix_file(const std::string& path,
                                            std::size_t& m, std::size_t& n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("catalog: cannot open matrix file " + path);
  long long mm = 0, nn = 0;
  if (!(in >> mm >> nn) || mm <= 0 || nn <= 0)
    throw std::runtime_error("catalog: bad matrix header in " + path);
  m = std::size_t(mm);
  n = std::size_t(nn);
  std::vector<double> a(m * n);
  for (auto& v : a)
    if (!(in >> v))
      throw std::runtime_error("catalog: truncated matrix data in " + path);
  return a;
}

// Resolve a catalog key to a FunctionSpec. Throws std::invalid_argument
// with the offending key on any parse failure.
inline FunctionSpec resolve_key(const std::string& key) {
  auto parts = detail::split(key, ':');
  if (parts.empty() || parts[0].empty())
    throw std::invalid_argument("catalog: empty key");
  const std::string& family = parts[0];
  auto need = [&](std::size_t count) {
    if (parts.size() != count)
      throw std::invalid_argument("catalog: malformed key '" + key + "'");
  };
  if (family == "linear") {
    need(2);
    std::size_t n = std::size_t(detail::parse_field(parts[1], "n", key));
    if (n == 0) throw std::invalid_argument("catalog: n=0 in '" + key + "'");
    // unit-Lipschitz diagonal functional
    return make_linear(std::vector<double>(n, 1.0 / std::sqrt(double(n))));
  }
  if (family == "linf") {
    need(2);
    return make_sup_norm(std::size_t(detail::parse_field(parts[1], "n", key)));
  }
  if (family.size() > 1 && family[0] == 'l' &&
      (std::isdigit(static_cast<unsigned char>(family[1])) ||
       family[1] == '.')) {
    need(2);
    double p = std::stod(family.substr(1));
    return make_lp_norm(std::size_t(detail::parse_field(parts[1], "n", key)), p);
  }
  if (family == "galpha") {
    need(2);
    return make_galpha(detail::parse_field(parts[1], "a", key));
  }
  if (family == "monomial") {
    need(2);
    return make_odd_monomial(int(detail::parse_field(parts[1], "k", key)));
  }
  if (family == "ellipsoidal") {
    need(3);
    const std::string& tag = parts[1];
    if (tag.rfind("file=", 0) == 0) {
      std::size_t m = 0, n = 0;
      auto a = load_matrix_file(tag.substr(5), m, n);
      std::size_t n_check = std::size_t(detail::parse_field(parts[2], "n", key));
      if (n_check != n)
        throw std::invalid_argument("catalog: matrix columns disagree with key '" +
                                    key + "'");
      return make_ellipsoidal(m, n, std::move(a), tag);
    }
    std::size_t n = std::size_t(detail::parse_field(parts[2], "n", key));
    if (tag == "identity") {
      std::vector<double> a(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i) a[i * n + i] = 1.0;
      return make_ellipsoidal(n, n, std::move(a), tag);
    }
    if (tag == "diag2") {
      // spectral gap: diag(2, 1, ..., 1)
      std::vector<double> a(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i) a[i * n + i] = i == 0 ? 2.0 : 1.0;
      return make_ellipsoidal(n, n, std::move(a), tag);
    }
    if (tag == "decay") {
      // diag(1, 1/2, 1/3, ...)
      std::vector<double> a(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i) a[i * n + i] = 1.0 / double(i + 1);
      return make_ellipsoidal(n, n, std::move(a), tag);
    }
    throw std::invalid_argument("catalog: unknown ellipsoidal tag in '" + key +
                                "'");
  }
  if (family == "tilted") {
    // tilted:<base key>:t=T, base key may itself contain ':'
    if (parts.size() < 3 || parts.back().rfind("t=", 0) != 0)
      throw std::invalid_argument("catalog: malformed tilted key '" + key + "'");
    double t = detail::parse_field(parts.back(), "t", key);
    std::string base_key = key.substr(7, key.size() - 7 - parts.back().size() - 1);
    return make_tilted(resolve_key(base_key), t);
  }
  throw std::invalid_argument("catalog: unknown family in key '" + key + "'");
}

// The default registry backing `catalog` listings and the acceptance runs.
inline const std::vector<std::string>& default_catalog_keys() {
  static const std::vector<std::string> keys = {
      "linear:n=2",
      "linear:n=50",
      "l2:n=100",
      "l4:n=64",
      "l4:n=256",
      "l4:n=1024",
      "linf:n=16",
      "linf:n=64",
      "linf:n=256",
      "linf:n=1024",
      "linf:n=4096",
      "ellipsoidal:identity:n=32",
      "ellipsoidal:diag2:n=64",
      "tilted:linf:n=256:t=4",
      "tilted:l2:n=128:t=4",
      "galpha:a=2",
      "galpha:a=3",
      "galpha:a=4",
      "monomial:k=1",
      "monomial:k=2",
  };
  return keys;
}

inline std::vector<FunctionSpec> default_catalog() {
  std::vector<FunctionSpec> specs;
  for (const auto& k : default_catalog_keys()) specs.push_back(resolve_key(k));
  return specs;
}

}  // namespace gcl
