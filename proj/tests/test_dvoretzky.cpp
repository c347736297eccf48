// Random sections: Haar frames, sphericity, critical dimensions and the
// tilted-norm experiments.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gcl/catalog.hpp"
#include "gcl/dvoretzky.hpp"
#include "gcl/rng.hpp"

using namespace gcl;

TEST_CASE("sampled frames are orthonormal") {
  RngStream stream(1, kFrameStreamBase);
  for (std::size_t k : {std::size_t(1), std::size_t(4), std::size_t(16)}) {
    auto sub = sample_subspace(16, k, stream);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double dot = 0;
        for (std::size_t t = 0; t < 16; ++t)
          dot += sub.basis[i * 16 + t] * sub.basis[j * 16 + t];
        CHECK(std::fabs(dot - (i == j ? 1.0 : 0.0)) < 1e-10);
      }
    }
  }
  CHECK_THROWS_AS(sample_subspace(4, 5, stream), std::invalid_argument);
  CHECK_THROWS_AS(sample_subspace(4, 0, stream), std::invalid_argument);
}

TEST_CASE("embed is the linear combination of the rows") {
  RngStream stream(2, kFrameStreamBase);
  auto sub = sample_subspace(8, 3, stream);
  std::vector<double> coef = {1.0, -2.0, 0.5}, x(8);
  sub.embed(coef, x);
  for (std::size_t j = 0; j < 8; ++j) {
    double want = sub.basis[j] - 2.0 * sub.basis[8 + j] + 0.5 * sub.basis[16 + j];
    CHECK(x[j] == Catch::Approx(want).margin(1e-14));
  }
}

TEST_CASE("critical dimension of the euclidean ball") {
  auto spec = resolve_key("l2:n=100");
  auto k = critical_dimension(spec, 200000, 1);
  // (E chi_100)^2 = 99.5013 in closed form
  CHECK(k.value == Catch::Approx(99.501256210044526).margin(0.5));
  CHECK(k.lo <= 99.501256210044526);
  CHECK(k.hi >= 99.501256210044526);
  CHECK_THROWS_AS(critical_dimension(resolve_key("linear:n=4"), 1000, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(critical_dimension(resolve_key("galpha:a=2"), 1000, 1),
                  std::invalid_argument);
}

TEST_CASE("tilted critical dimension closed form") {
  CHECK(tilted_critical_dimension(100.0, 4.0) ==
        Catch::Approx(6.960667248884421).epsilon(1e-12));
  // t = 0 leaves the dimension unchanged
  CHECK(tilted_critical_dimension(25.0, 0.0) == Catch::Approx(25.0));
}

TEST_CASE("euclidean sections are exactly spherical") {
  auto spec = resolve_key("l2:n=32");
  RngStream stream(3, kFrameStreamBase);
  auto sub = sample_subspace(32, 8, stream);
  auto st = section_sphericity(spec, sub, 2000, stream);
  CHECK(st.sphericity == Catch::Approx(1.0).margin(1e-10));
  CHECK(st.m_f == Catch::Approx(1.0).margin(1e-10));
  CHECK(st.direction_count == 2000);
  CHECK_THROWS_AS(section_sphericity(spec, sub, 1, stream),
                  std::invalid_argument);
}

TEST_CASE("sphericity estimate is monotone in the direction count") {
  auto spec = resolve_key("linf:n=32");
  RngStream frame_stream(5, kFrameStreamBase);
  auto sub = sample_subspace(32, 4, frame_stream);
  RngStream s1(7, 0), s2(7, 0);
  auto a = section_sphericity(spec, sub, 2000, s1, false);
  auto b = section_sphericity(spec, sub, 10000, s2, false);
  CHECK(a.max_ratio <= b.max_ratio + 1e-14);
  CHECK(a.min_ratio >= b.min_ratio - 1e-14);
  CHECK(b.sphericity >= a.sphericity - 1e-14);
}

TEST_CASE("polish never shrinks the spread") {
  auto spec = resolve_key("linf:n=32");
  RngStream frame_stream(9, kFrameStreamBase);
  auto sub = sample_subspace(32, 4, frame_stream);
  RngStream s1(11, 0), s2(11, 0);
  auto raw = section_sphericity(spec, sub, 5000, s1, false);
  auto pol = section_sphericity(spec, sub, 5000, s2, true);
  CHECK(pol.max_ratio >= raw.max_ratio - 1e-14);
  CHECK(pol.min_ratio <= raw.min_ratio + 1e-14);
}

TEST_CASE("spherical section dimension of the euclidean ball is n") {
  auto spec = resolve_key("l2:n=16");
  auto est = estimate_k_eps(spec, 0.1, 40, 1);
  CHECK(est.k_estimate == 16);
  for (const auto& pt : est.trace) CHECK(pt.successes == pt.trials);
}

TEST_CASE("section dimension argument guards") {
  auto spec = resolve_key("l2:n=16");
  CHECK_THROWS_AS(estimate_k_eps(spec, 0.0, 40, 1), std::invalid_argument);
  CHECK_THROWS_AS(estimate_k_eps(spec, 1.5, 40, 1), std::invalid_argument);
  CHECK_THROWS_AS(estimate_k_eps(spec, 0.1, 10, 1), std::invalid_argument);
}

TEST_CASE("instability experiment enforces the tilt range") {
  auto base = resolve_key("linf:n=16");  // sqrt(k(X)) is about 2, below 4
  std::vector<double> eps = {0.2};
  CHECK_THROWS_AS(tilted_instability_experiment(base, 4.0, eps, 1),
                  std::invalid_argument);
  auto l2 = resolve_key("l2:n=64");
  CHECK_THROWS_AS(tilted_instability_experiment(l2, 2.0, eps, 1),
                  std::invalid_argument);
}

TEST_CASE("radial sandwich of the tilted norm") {
  auto base = resolve_key("l2:n=32");
  std::vector<double> deltas = {0.05, 0.1, 0.2, 0.3};
  auto rep = radial_sandwich_experiment(base, 4.0, deltas, 200000, 1);
  INFO("k_t=" << rep.k_t << " c4=" << rep.c4 << " C4=" << rep.C4);
  CHECK(rep.feasible);
  CHECK(rep.c4 >= 1.0 / 256);
  CHECK(rep.C4 <= 256.0);
  // exceedance probability decreases with the window width
  for (std::size_t i = 1; i < rep.points.size(); ++i)
    CHECK(rep.points[i].p <= rep.points[i - 1].p);
  // measured critical dimension tracks the closed form
  double k_base = 31.5;  // (E chi_32 / 1)^2
  double want = tilted_critical_dimension(k_base, 4.0);
  CHECK(rep.k_t == Catch::Approx(want).epsilon(0.1));
}

TEST_CASE("radial sandwich argument guards") {
  auto base = resolve_key("l2:n=32");
  std::vector<double> ok = {0.1};
  std::vector<double> bad = {0.5};
  CHECK_THROWS_AS(radial_sandwich_experiment(base, 2.0, ok, 10000, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(radial_sandwich_experiment(base, 4.0, bad, 10000, 1),
                  std::invalid_argument);
}
