#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lcgs/grid.hpp"

using namespace lcgs;

namespace {

Field gaussian(const GridSpec& g, double width) {
  Field f(g);
  const double inv2w2 = 1.0 / (2.0 * width * width);
  for (int iy = 0; iy < g.n; ++iy) {
    const double y = node_coord(g, iy);
    for (int ix = 0; ix < g.n; ++ix) {
      const double x = node_coord(g, ix);
      f.at(ix, iy) = std::exp(-(x * x + y * y) * inv2w2);
    }
  }
  return f;
}

}  // namespace

TEST_CASE("grid construction and validation") {
  const GridSpec g = make_grid(8.0, 64);
  REQUIRE(g.h == 0.25);
  // cell-centered nodes: first at -L + h/2, last at L - h/2, symmetric
  REQUIRE(node_coord(g, 0) == -8.0 + 0.125);
  REQUIRE(node_coord(g, 63) == 8.0 - 0.125);
  REQUIRE(node_coord(g, 31) == -node_coord(g, 32));

  REQUIRE_THROWS_AS(make_grid(0.0, 64), std::invalid_argument);
  REQUIRE_THROWS_AS(make_grid(8.0, 48), std::invalid_argument);  // not a power of two
  REQUIRE_THROWS_AS(make_grid(8.0, 8), std::invalid_argument);   // below minimum
}

TEST_CASE("gaussian integral oracles") {
  // For u = exp(-r^2/2): ||u||_2^2 = pi, ||grad u||_2^2 = pi, ||u||_4^4 = pi/2.
  // Truncation at L = 8 and midpoint quadrature of an analytic integrand are
  // both far below the tolerance.
  const GridSpec g = make_grid(8.0, 128);
  const Field u = gaussian(g, 1.0);
  const double pi = M_PI;
  REQUIRE(l2_norm_sq(u) == Catch::Approx(pi).epsilon(1e-10));
  REQUIRE(grad_norm_sq(u) == Catch::Approx(pi).epsilon(1e-10));
  REQUIRE(lp_norm_pow(u, 4.0) == Catch::Approx(pi / 2.0).epsilon(1e-10));
}

TEST_CASE("spectral derivatives are exact on band-limited fields") {
  const GridSpec g = make_grid(8.0, 64);
  const double k1 = wavenumber(g, 3);   // 3 pi / L
  const double k2 = wavenumber(g, 5);   // 5 pi / L
  Field u(g);
  for (int iy = 0; iy < g.n; ++iy)
    for (int ix = 0; ix < g.n; ++ix)
      u.at(ix, iy) = std::sin(k1 * node_coord(g, ix)) * std::cos(k2 * node_coord(g, iy));
  // int sin^2(k1 x) cos^2(k2 y) over the box = area / 4 for these modes
  const double area = 4.0 * g.L * g.L;
  REQUIRE(l2_norm_sq(u) == Catch::Approx(area / 4.0).epsilon(1e-12));
  REQUIRE(grad_norm_sq(u) ==
          Catch::Approx((k1 * k1 + k2 * k2) * area / 4.0).epsilon(1e-12));

  // laplacian of the mode is -(k1^2 + k2^2) times the mode
  const Field lap = spectral_laplacian(u);
  double worst = 0.0;
  for (size_t i = 0; i < u.values.size(); ++i)
    worst = std::max(worst,
                     std::fabs(lap.values[i] + (k1 * k1 + k2 * k2) * u.values[i]));
  REQUIRE(worst <= 1e-10);
}

TEST_CASE("radial derivative matches x . grad on a gaussian") {
  // For u = exp(-r^2/2): x . grad u = -r^2 u.
  const GridSpec g = make_grid(8.0, 128);
  const Field u = gaussian(g, 1.0);
  const Field ru = radial_derivative(u);
  double worst = 0.0;
  for (int iy = 0; iy < g.n; ++iy) {
    const double y = node_coord(g, iy);
    for (int ix = 0; ix < g.n; ++ix) {
      const double x = node_coord(g, ix);
      const double r2 = x * x + y * y;
      worst = std::max(worst, std::fabs(ru.at(ix, iy) + r2 * u.at(ix, iy)));
    }
  }
  REQUIRE(worst <= 1e-9);
}

TEST_CASE("rescale is the identity at t = 1 and contracts mass as t^2") {
  const GridSpec g = make_grid(8.0, 64);
  const Field u = gaussian(g, 1.2);
  const Field same = rescale(u, 1.0);
  for (size_t i = 0; i < u.values.size(); ++i) REQUIRE(same.values[i] == u.values[i]);

  // ||t^2 u(t .)||_2^2 = t^2 ||u||_2^2 up to bilinear interpolation error,
  // O(h^2) with an O(1) curvature constant at this resolution
  const double t = 0.75;
  const Field ut = rescale(u, t);
  REQUIRE(l2_norm_sq(ut) == Catch::Approx(t * t * l2_norm_sq(u)).epsilon(2e-2));

  REQUIRE_THROWS_AS(rescale(u, 0.0), std::invalid_argument);
}

TEST_CASE("field invariants") {
  const GridSpec g = make_grid(6.0, 32);
  Field a(g), b(make_grid(6.0, 64));
  REQUIRE_THROWS_AS(require_same_grid(a, b, "test"), std::invalid_argument);
  a.values[7] = std::nan("");
  REQUIRE_THROWS_AS(require_finite(a, "test"), std::invalid_argument);
}
