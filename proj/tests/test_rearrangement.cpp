// Gaussian rearrangement: curve construction, property checks, Orlicz
// norms and the weighted derivative integrals.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gcl/catalog.hpp"
#include "gcl/empirical.hpp"
#include "gcl/rearrangement.hpp"

using namespace gcl;

namespace {

RearrangementCurve curve_for(const FunctionSpec& spec, std::size_t N,
                             std::uint64_t seed,
                             EmpiricalDistribution* emp_out = nullptr) {
  auto emp = sample_values(spec, N, seed);
  auto curve = gaussian_rearrangement(emp);
  if (emp_out) *emp_out = std::move(emp);
  return curve;
}

}  // namespace

TEST_CASE("rearrangement of a linear functional is the identity") {
  auto f = make_linear({1.0});
  auto curve = curve_for(f, 400000, 3);
  for (double s = -2.0; s <= 2.0; s += 0.25) {
    CHECK(curve(s) == Catch::Approx(s).margin(0.02));
  }
}

TEST_CASE("rearrangement of a monotone 1-D map reproduces the map") {
  auto g = make_galpha(2.0);
  auto curve = curve_for(g, 400000, 5);
  for (double s = -1.0; s <= 3.0; s += 0.5) {
    CHECK(curve(s) == Catch::Approx(g.eval1d(s)).margin(0.05 * (1 + g.eval1d(s))));
  }
}

TEST_CASE("curve at zero approximates the median") {
  auto spec = resolve_key("linf:n=64");
  EmpiricalDistribution emp;
  auto curve = curve_for(spec, 200000, 1, &emp);
  auto st = estimate_stats(emp);
  CHECK(curve(0.0) == Catch::Approx(st.median.value).margin(0.01));
  CHECK(std::is_sorted(curve.values.begin(), curve.values.end()));
}

TEST_CASE("grid outside the resolvable range is rejected") {
  auto f = make_linear({1.0});
  auto emp = sample_values(f, 1000, 1);
  std::vector<double> wide = {-5.0, 0.0, 5.0};
  CHECK_THROWS_AS(gaussian_rearrangement(emp, wide), std::invalid_argument);
}

TEST_CASE("property checks pass for convex specs") {
  for (const char* key : {"linear:n=2", "linf:n=64", "galpha:a=2"}) {
    auto spec = resolve_key(key);
    EmpiricalDistribution emp;
    auto curve = curve_for(spec, 100000, 1, &emp);
    auto rep = check_rearrangement_properties(curve, emp, spec, 1);
    INFO(key << " margin=" << rep.convexity_margin
             << " tol=" << rep.convexity_tol << " lip=" << rep.lip_estimate
             << " ks=" << rep.ks_distance);
    CHECK(rep.monotone_ok);
    CHECK(rep.convexity_ok);
    CHECK(rep.lipschitz_ok);
    CHECK(rep.lip_estimate <= spec.lipschitz * 1.02);
    CHECK(rep.pushforward_ok);
    CHECK(rep.ks_distance <= 0.01);
  }
}

TEST_CASE("property checks reject the cubic negative control") {
  auto spec = resolve_key("monomial:k=1");
  EmpiricalDistribution emp;
  auto curve = curve_for(spec, 100000, 1, &emp);
  auto rep = check_rearrangement_properties(curve, emp, spec, 1);
  CHECK(rep.monotone_ok);  // still a quantile curve
  CHECK_FALSE(rep.convexity_ok);
  CHECK(rep.convexity_margin < -rep.convexity_tol);
}

TEST_CASE("dirichlet energy of the rearrangement is dominated") {
  // gradient contraction: energy of f* <= E||grad f||^2 (up to noise)
  for (const char* key : {"linear:n=2", "linf:n=64", "l2:n=100"}) {
    auto spec = resolve_key(key);
    auto emp = sample_values(spec, 200000, 1);
    double energy = rearranged_dirichlet_energy(emp);
    double grad = estimate_grad_sq(spec, 200000, 1).value;
    INFO(key << " energy=" << energy << " grad=" << grad);
    CHECK(energy <= 1.05 * grad);
  }
}

TEST_CASE("curve dirichlet energy approximates variance-side identity for id") {
  auto f = make_linear({1.0});
  EmpiricalDistribution emp;
  auto curve = curve_for(f, 400000, 3, &emp);
  // identity curve has slope 1, energy about the mass of the grid range
  CHECK(curve_dirichlet_energy(curve) == Catch::Approx(1.0).margin(0.1));
  CHECK(curve_right_slope_at_zero(curve) == Catch::Approx(1.0).margin(0.2));
}

TEST_CASE("orlicz norm of the constant function") {
  // ||1||_phi solves E phi(1/lambda) = 1 for phi(t) = t^2/log(e+t)
  std::vector<double> ones(100, 1.0);
  double n = orlicz_norm(ones, young_talagrand_phi());
  CHECK(n == Catch::Approx(0.85856269945367646).epsilon(1e-7));
}

TEST_CASE("orlicz norm with the square young function is the rms") {
  std::vector<double> v = {1.0, 2.0, 2.0, 5.0};
  double rms = std::sqrt((1.0 + 4.0 + 4.0 + 25.0) / 4.0);
  CHECK(orlicz_norm(v, young_power(2.0)) == Catch::Approx(rms).epsilon(1e-7));
}

TEST_CASE("orlicz norm scales linearly and respects domination") {
  std::vector<double> v = {0.5, -1.5, 2.5, -3.5};
  std::vector<double> v2 = v;
  for (auto& x : v2) x *= 3.0;
  auto phi = young_talagrand_phi();
  CHECK(orlicz_norm(v2, phi) == Catch::Approx(3.0 * orlicz_norm(v, phi)).epsilon(1e-6));
  std::vector<double> w = {0.5, -1.0, 2.0, -3.0};  // |w| <= |v| pointwise
  CHECK(orlicz_norm(w, phi) <= orlicz_norm(v, phi) + 1e-9);
  std::vector<double> zeros(4, 0.0);
  CHECK(orlicz_norm(zeros, phi) == 0.0);
}

TEST_CASE("weighted derivative integral closed forms") {
  // identity: integral of 1/(1+t^2) dgamma
  auto id = make_linear({1.0});
  CHECK(weighted_derivative_integral(id) ==
        Catch::Approx(0.65567954241879847).epsilon(1e-5));
  // ramp at alpha = 3: c_3^2 * integral over (3, inf)
  auto g3 = make_galpha(3.0);
  CHECK(weighted_derivative_integral(g3) ==
        Catch::Approx(0.086096552943057327).epsilon(1e-5));
  auto flat = make_sup_norm(2);
  CHECK_THROWS_AS(weighted_derivative_integral(flat), std::invalid_argument);
}
