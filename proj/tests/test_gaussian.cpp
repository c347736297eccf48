// Scalar Gaussian primitives and the counter-based stream.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gcl/gaussian.hpp"
#include "gcl/quadrature.hpp"
#include "gcl/rng.hpp"

using namespace gcl;

TEST_CASE("normal cdf matches reference values") {
  // high-precision reference points
  CHECK(double(std_normal_cdf(0.0)) == Catch::Approx(0.5).margin(1e-16));
  CHECK(double(std_normal_cdf(1.0)) ==
        Catch::Approx(0.84134474606854295).margin(1e-15));
  CHECK(double(std_normal_cdf(3.0)) ==
        Catch::Approx(0.99865010196836991).margin(1e-15));
  CHECK(double(std_normal_sf(3.0)) ==
        Catch::Approx(0.0013498980316300945).epsilon(1e-12));
  CHECK(double(std_normal_cdf(-2.0)) ==
        Catch::Approx(0.022750131948179207).epsilon(1e-12));
}

TEST_CASE("normal cdf symmetry") {
  for (double x = 0.0; x <= 8.0; x += 0.25) {
    CHECK(double(fabsq(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0)) < 1e-14);
  }
}

TEST_CASE("quantile inverts the cdf on [-8, 8]") {
  for (double x = -8.0; x <= 8.0 + 1e-12; x += 0.01) {
    double back = std_normal_quantile(std_normal_cdf(x));
    CHECK(std::fabs(back - x) <= 1e-9);
  }
}

TEST_CASE("quantile reference value") {
  CHECK(std_normal_quantile(0.975) ==
        Catch::Approx(1.9599639845400542).margin(1e-12));
  CHECK(std_normal_quantile(0.5) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("quantile domain errors") {
  CHECK_THROWS_AS(std_normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(1.0), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(-0.1), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(1.5), std::domain_error);
}

TEST_CASE("absolute moments match closed forms") {
  // E|zeta|^p via the Gamma formula, references from arbitrary precision
  CHECK(abs_moment(0.5) == Catch::Approx(0.82217895866245855).epsilon(1e-14));
  CHECK(abs_moment(1.0) == Catch::Approx(0.79788456080286536).epsilon(1e-14));
  CHECK(abs_moment(2.0) == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(abs_moment(3.0) == Catch::Approx(1.5957691216057307).epsilon(1e-14));
  CHECK(abs_moment(4.0) == Catch::Approx(3.0).epsilon(1e-14));
  CHECK(abs_moment(6.0) == Catch::Approx(15.0).epsilon(1e-13));
  CHECK_THROWS_AS(abs_moment(-1.0), std::domain_error);
}

TEST_CASE("absolute moments agree with quadrature") {
  for (double p : {0.5, 1.0, 2.0, 3.0, 4.0, 6.0}) {
    double quad =
        integrate_gauss([p](double t) { return std::pow(std::fabs(t), p); },
                        -12.0, 12.0, 1e-12);
    CHECK(abs_moment(p) == Catch::Approx(quad).epsilon(1e-8));
  }
}

TEST_CASE("sigma_p of the half gaussian") {
  // sigma_2^2 = E|zeta|^2 / 2 = 1/2
  double s2 = sigma_p(2.0);
  CHECK(s2 * s2 == Catch::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("stream replay is deterministic") {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  RngStream c(42, 8);
  bool all_equal = true;
  RngStream a2(42, 7);
  for (int i = 0; i < 100; ++i)
    if (a2.next_u64() != c.next_u64()) all_equal = false;
  CHECK_FALSE(all_equal);
}

TEST_CASE("seek restarts the counter") {
  RngStream a(1, 2);
  std::vector<std::uint64_t> first;
  for (int i = 0; i < 16; ++i) first.push_back(a.next_u64());
  a.seek(0, 0);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == first[std::size_t(i)]);
}

TEST_CASE("gaussian draws have the right moments") {
  RngStream s(2024, 0);
  const std::size_t n = 1000000;
  double sum = 0, sum2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double g = s.next_gaussian();
    sum += g;
    sum2 += g * g;
  }
  double mean = sum / double(n);
  double var = sum2 / double(n) - mean * mean;
  CHECK(std::fabs(mean) < 4e-3);
  CHECK(std::fabs(var - 1.0) < 6e-3);
}

TEST_CASE("uniform draws stay inside the open interval") {
  RngStream s(5, 5);
  for (int i = 0; i < 10000; ++i) {
    double u = s.next_uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}
