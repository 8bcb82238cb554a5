#pragma once
// Free-space convolution with the planar logarithmic kernel.
//
// The potential phi(x) = integral log|x - y| rho(y) dy is evaluated as an
// exact linear (non-circular) discrete convolution: the kernel log|d| is
// tabulated on the (2n) x (2n) lattice of displacement vectors (wrap-indexed,
// so every difference of two grid indices lands on a distinct table entry) and
// the product is formed by zero-padded FFT. Zero padding is what prevents the
// long-range, sign-changing kernel from wrapping around the box.
//
// The kernel's log|0| singularity is replaced by the mean of log|z| over one
// grid cell centered at the origin, computed at table-build time by adaptive
// quadrature; this preserves second-order accuracy of the singular integral.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lcgs/fft.hpp"
#include "lcgs/grid.hpp"

namespace lcgs {

namespace detail {

// Recursive adaptive Simpson on [a, b] with absolute tolerance.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, fa, fm, fb, tol, 48);
}

// Mean of log|z| over the cell [-h/2, h/2]^2. By symmetry, 4x the integral
// over the first quadrant [0, h/2]^2. The inner (y) integral is done in closed
// form — int_0^b log sqrt(x^2+y^2) dy = b log sqrt(x^2+b^2) - b + x atan(b/x)
// — which keeps every outer evaluation finite despite the corner singularity;
// the outer (x) integral is adaptive Simpson.
inline double cell_mean_log(double h) {
  const double b = 0.5 * h;
  auto inner = [b](double x) {
    if (x == 0.0) return b * (std::log(b) - 1.0);  // limit value at the corner
    return b * 0.5 * std::log(x * x + b * b) - b + x * std::atan(b / x);
  };
  const double quadrant = integrate(inner, 0.0, b, 1e-15 * (1.0 + std::fabs(std::log(h))));
  return 4.0 * quadrant / (h * h);
}

// Mean of a smooth radial function g(|z|) over the same cell (used for the
// split kernel log(lambda + |z|), which has no singularity).
inline double cell_mean_smooth(double h, const std::function<double(double)>& g) {
  const double b = 0.5 * h;
  auto inner = [&](double x) {
    auto fy = [&](double y) { return g(std::hypot(x, y)); };
    return integrate(fy, 0.0, b, 1e-14);
  };
  const double quadrant = integrate(inner, 0.0, b, 1e-13);
  return 4.0 * quadrant / (h * h);
}

}  // namespace detail

// Tabulated kernel samples over displacement vectors, with the FFT of the
// table cached for repeated convolutions. Entry (a, b) of the (2n) x (2n)
// table holds the kernel at displacement ((a<n ? a : a-2n) h, (b<n ? b : b-2n) h).
struct KernelTable {
  GridSpec spec;
  std::vector<double> samples;              // (2n)^2, wrap-indexed displacements
  std::vector<std::complex<double>> khat;   // half-spectrum of samples

  double origin() const { return samples[0]; }
  double at_displacement(int mx, int my) const {
    const int m2 = 2 * spec.n;
    const int a = (mx % m2 + m2) % m2;
    const int b = (my % m2 + m2) % m2;
    return samples[static_cast<size_t>(b) * m2 + a];
  }
};

namespace detail {

// Build a displacement table for kernel(r) with a prescribed origin value.
inline KernelTable tabulate(const GridSpec& g, const std::function<double(double)>& kernel,
                            double origin_value) {
  const int m = 2 * g.n;
  KernelTable table;
  table.spec = g;
  table.samples.assign(static_cast<size_t>(m) * m, 0.0);
  for (int b = 0; b < m; ++b) {
    const int my = (b < g.n) ? b : b - m;
    for (int a = 0; a < m; ++a) {
      const int mx = (a < g.n) ? a : a - m;
      const double r = g.h * std::hypot(static_cast<double>(mx), static_cast<double>(my));
      table.samples[static_cast<size_t>(b) * m + a] = (mx == 0 && my == 0) ? origin_value : kernel(r);
    }
  }
  cached_fft(m).forward(table.samples, table.khat);
  return table;
}

}  // namespace detail

inline KernelTable build_kernel(const GridSpec& g) {
  return detail::tabulate(
      g, [](double r) { return std::log(r); }, detail::cell_mean_log(g.h));
}

// Density rho = u^2 + v^2 as a Field on the same grid.
inline Field density_of(const Field& u, const Field& v) {
  require_same_grid(u, v, "density_of");
  Field rho(u.spec);
  for (size_t i = 0; i < rho.values.size(); ++i)
    rho.values[i] = u.values[i] * u.values[i] + v.values[i] * v.values[i];
  return rho;
}

// phi(x_i) = h^2 * sum_j kernel(x_i - x_j) rho(x_j): zero-padded FFT
// convolution on the doubled lattice, exact linear convolution by construction.
inline Field convolve(const Field& rho, const KernelTable& kernel) {
  if (rho.spec != kernel.spec) throw std::invalid_argument("convolve: grid mismatch");
  const int n = rho.spec.n;
  const int m = 2 * n;
  Fft2D& fft = cached_fft(m);
  thread_local std::vector<double> padded;
  thread_local std::vector<std::complex<double>> rhat;
  thread_local std::vector<double> full;
  padded.assign(static_cast<size_t>(m) * m, 0.0);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      padded[static_cast<size_t>(iy) * m + ix] = rho.values[static_cast<size_t>(iy) * n + ix];
  fft.forward(padded, rhat);
  for (size_t i = 0; i < rhat.size(); ++i) rhat[i] *= kernel.khat[i];
  fft.backward(rhat, full);
  Field phi(rho.spec);
  const double h2 = rho.spec.h * rho.spec.h;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      phi.values[static_cast<size_t>(iy) * n + ix] = h2 * full[static_cast<size_t>(iy) * m + ix];
  return phi;
}

inline Field log_potential(const Field& rho, const KernelTable& kernel) {
  require_finite(rho, "log_potential");
  return convolve(rho, kernel);
}

// V(u,v) = integral integral log|x-y| rho(y) rho(x) = <phi_rho, rho>
inline double V_form(const Field& u, const Field& v, const KernelTable& kernel) {
  require_same_grid(u, v, "V_form");
  const Field rho = density_of(u, v);
  return inner(log_potential(rho, kernel), rho);
}

// Split V = V1 - V2 using log r = log(lambda + r) - log(1 + lambda/r).
// V1 uses the kernel log(lambda + |d|); V2's table is defined as the exact
// pointwise difference K1 - K, which makes V1 - V2 = V an identity of tables.
inline std::pair<double, double> V_split(const Field& u, const Field& v, double lambda,
                                         const KernelTable& kernel) {
  if (!(lambda > std::exp(0.25)))
    throw std::invalid_argument("V_split: lambda must exceed e^{1/4}");
  require_same_grid(u, v, "V_split");
  const GridSpec& g = kernel.spec;
  const double origin1 =
      detail::cell_mean_smooth(g.h, [lambda](double r) { return std::log(lambda + r); });
  KernelTable k1 = detail::tabulate(
      g, [lambda](double r) { return std::log(lambda + r); }, origin1);
  KernelTable k2 = k1;
  for (size_t i = 0; i < k2.samples.size(); ++i) k2.samples[i] -= kernel.samples[i];
  cached_fft(2 * g.n).forward(k2.samples, k2.khat);
  const Field rho = density_of(u, v);
  const double v1 = inner(convolve(rho, k1), rho);
  const double v2 = inner(convolve(rho, k2), rho);
  return {v1, v2};
}

}  // namespace lcgs
