#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lcgs/experiments.hpp"
#include "lcgs/fiber.hpp"
#include "lcgs/functionals.hpp"

using namespace lcgs;

namespace {

StatePair random_state(const GridSpec& g, std::mt19937_64& eng, double p) {
  Field u = detail::random_bump_field(g, eng, false);
  Field v = detail::random_bump_field(g, eng, false);
  for (double& x : u.values) x = std::max(x, 0.0);
  for (double& x : v.values) x = std::max(x, 0.0);
  return make_state(std::move(u), std::move(v), p, 2.0);
}

}  // namespace

TEST_CASE("report identities on random states") {
  const GridSpec g = make_grid(6.0, 32);
  const KernelTable k = build_kernel(g);
  std::mt19937_64 eng(99);
  for (double p : {2.0, 2.5, 3.0}) {
    for (double beta : {0.0, 1.0, 3.0}) {
      const StatePair s = random_state(g, eng, p);
      const EnergyReport r = energy_report(s, beta, p, k);
      const double sc = r.scale();

      // J = 2 nehari - P, exactly as assembled
      REQUIRE(std::fabs(r.J - (2.0 * r.nehari - r.P)) <= 1e-12 * sc);

      // report values against the fiber map at t = 1
      const FiberCoefficients c = fiber_coeffs(s, beta, p, k);
      REQUIRE(r.I == Catch::Approx(fiber_value(c, 1.0)).margin(1e-12 * sc));
      REQUIRE(r.J == Catch::Approx(fiber_derivative(c, 1.0)).margin(1e-12 * sc));

      // assembled pieces
      REQUIRE(r.I ==
              Catch::Approx(0.5 * r.kinetic + 0.25 * r.V - r.psi / (2.0 * p)).margin(1e-12 * sc));
      REQUIRE(r.P == Catch::Approx(r.V + 0.25 * r.mass_sq_sum * r.mass_sq_sum - r.psi / p)
                         .margin(1e-12 * sc));
      REQUIRE(r.nehari ==
              Catch::Approx(r.kinetic + r.V - r.psi).margin(1e-12 * sc));
    }
  }
}

TEST_CASE("psi is symmetric in the components") {
  const GridSpec g = make_grid(6.0, 32);
  std::mt19937_64 eng(3);
  const StatePair s = random_state(g, eng, 2.0);
  const double a = psi_beta(s.u, s.v, 1.7, 2.0);
  const double b = psi_beta(s.v, s.u, 1.7, 2.0);
  REQUIRE(a == Catch::Approx(b).epsilon(1e-14));
}

TEST_CASE("gradient matches directional finite differences") {
  const GridSpec g = make_grid(6.0, 32);
  const KernelTable k = build_kernel(g);
  std::mt19937_64 eng(17);
  for (double p : {2.0, 3.0}) {
    const double beta = 1.5;
    const StatePair s = random_state(g, eng, p);
    auto [gu, gv] = gradient(s, beta, p, k);

    Field wu = detail::random_bump_field(g, eng, true);
    Field wv = detail::random_bump_field(g, eng, true);
    const double nrm = std::sqrt(l2_norm_sq(wu) + l2_norm_sq(wv));
    for (double& x : wu.values) x /= nrm;
    for (double& x : wv.values) x /= nrm;

    const double pairing = inner(gu, wu) + inner(gv, wv);

    const double eps = 1e-5;
    auto shifted = [&](double sgn) {
      Field u = s.u, v = s.v;
      for (size_t i = 0; i < u.values.size(); ++i) {
        u.values[i] += sgn * eps * wu.values[i];
        v.values[i] += sgn * eps * wv.values[i];
      }
      return energy_report(make_state(std::move(u), std::move(v), p, 2.0), beta, p, k).I;
    };
    const double fd = (shifted(1.0) - shifted(-1.0)) / (2.0 * eps);
    REQUIRE(pairing == Catch::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("parameter validation") {
  REQUIRE_THROWS_AS(check_params(-0.1, 2.0, "test"), std::invalid_argument);
  REQUIRE_THROWS_AS(check_params(1.0, 1.5, "test"), std::invalid_argument);
  REQUIRE_NOTHROW(check_params(0.0, 2.0, "test"));

  const GridSpec g = make_grid(6.0, 32);
  Field a(g), b(make_grid(6.0, 64));
  REQUIRE_THROWS_AS(StatePair(a, b), std::invalid_argument);
}

TEST_CASE("scale is max of kinetic and psi") {
  EnergyReport r;
  r.kinetic = 2.0;
  r.psi = 3.0;
  REQUIRE(r.scale() == 3.0);
}
