#pragma once
// Truncated uniform discretization of R^2 and all single-field operations:
// quadrature norms, spectral differentiation, and the dilation map
// u(x) -> t^2 u(t x).
//
// The domain is [-L, L]^2 sampled at n x n cell centers
//   x_i = -L + (i + 1/2) h,   h = 2L/n,
// stored row-major (index = iy * n + ix). Quadrature is plain midpoint h^2*sum,
// derivatives are Fourier multipliers on the periodic extension (wavenumber
// k_m = pi*m/L, m = -n/2 .. n/2-1).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcgs/fft.hpp"

namespace lcgs {

struct GridSpec {
  double L = 0.0;  // half-width: domain [-L, L]^2
  int n = 0;       // points per axis, power of two, >= 16
  double h = 0.0;  // spacing, 2L/n

  bool operator==(const GridSpec& o) const { return L == o.L && n == o.n; }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline GridSpec make_grid(double L, int n) {
  if (!(L > 0.0)) throw std::invalid_argument("make_grid: L must be positive");
  if (!is_power_of_two(n)) throw std::invalid_argument("make_grid: n must be a power of two");
  if (n < 16) throw std::invalid_argument("make_grid: n must be at least 16");
  return GridSpec{L, n, 2.0 * L / n};
}

// Coordinate of cell center i along one axis.
inline double node_coord(const GridSpec& g, int i) { return -g.L + (i + 0.5) * g.h; }

// One real scalar field sampled on the grid, row-major.
struct Field {
  GridSpec spec;
  std::vector<double> values;

  Field() = default;
  explicit Field(const GridSpec& s) : spec(s), values(static_cast<size_t>(s.n) * s.n, 0.0) {}
  Field(const GridSpec& s, std::vector<double> v) : spec(s), values(std::move(v)) {
    if (values.size() != static_cast<size_t>(s.n) * s.n)
      throw std::invalid_argument("Field: value count does not match grid");
  }

  double& at(int ix, int iy) { return values[static_cast<size_t>(iy) * spec.n + ix]; }
  double at(int ix, int iy) const { return values[static_cast<size_t>(iy) * spec.n + ix]; }
};

inline void require_same_grid(const Field& a, const Field& b, const char* where) {
  if (a.spec != b.spec) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

inline void require_finite(const Field& u, const char* where) {
  for (double x : u.values)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(where) + ": non-finite value");
}

// ---------------------------------------------------------------- quadrature

// ||u||_2^2 = h^2 * sum u^2
inline double l2_norm_sq(const Field& u) {
  double s = 0.0;
  for (double x : u.values) s += x * x;
  return u.spec.h * u.spec.h * s;
}

// h^2 * sum |u|^s, s >= 2 (the 2p-norm to the 2p-th power and friends)
inline double lp_norm_pow(const Field& u, double s) {
  if (!(s >= 2.0)) throw std::invalid_argument("lp_norm_pow: exponent must be >= 2");
  double acc = 0.0;
  if (s == 2.0) {
    for (double x : u.values) acc += x * x;
  } else if (s == 4.0) {
    for (double x : u.values) acc += (x * x) * (x * x);
  } else {
    for (double x : u.values) acc += std::pow(std::fabs(x), s);
  }
  return u.spec.h * u.spec.h * acc;
}

// h^2 * sum log(lambda + |x|) u^2, lambda > e^{1/4}; diagnostic weighted norm
inline double weighted_norm_sq(const Field& u, double lambda) {
  if (!(lambda > std::exp(0.25)))
    throw std::invalid_argument("weighted_norm_sq: lambda must exceed e^{1/4}");
  const int n = u.spec.n;
  double acc = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    const double y = node_coord(u.spec, iy);
    for (int ix = 0; ix < n; ++ix) {
      const double x = node_coord(u.spec, ix);
      const double w = std::log(lambda + std::hypot(x, y));
      const double val = u.at(ix, iy);
      acc += w * val * val;
    }
  }
  return u.spec.h * u.spec.h * acc;
}

// inner product h^2 * sum u v
inline double inner(const Field& a, const Field& b) {
  require_same_grid(a, b, "inner");
  double s = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
  return a.spec.h * a.spec.h * s;
}

// ------------------------------------------------------------- spectral ops

// signed mode index -> wavenumber pi*m/L
inline double wavenumber(const GridSpec& g, int i) {
  const int m = (i <= g.n / 2) ? i : i - g.n;
  return M_PI * m / g.L;
}

// ||grad u||_2^2 via Parseval over Fourier multipliers:
//   h^2/n^2 * sum_k |k|^2 |u_hat(k)|^2,
// with the half-spectrum columns weighted 2 except j = 0 and j = n/2.
inline double grad_norm_sq(const Field& u) {
  const int n = u.spec.n;
  Fft2D& fft = cached_fft(n);
  thread_local std::vector<std::complex<double>> uhat;
  fft.forward(u.values, uhat);
  const int ncol = n / 2 + 1;
  double acc = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    const double ky = wavenumber(u.spec, iy);
    for (int jx = 0; jx < ncol; ++jx) {
      const double kx = wavenumber(u.spec, jx);
      const double w = (jx == 0 || jx == n / 2) ? 1.0 : 2.0;
      acc += w * (kx * kx + ky * ky) * std::norm(uhat[static_cast<size_t>(iy) * ncol + jx]);
    }
  }
  const double h = u.spec.h;
  return acc * h * h / (static_cast<double>(n) * n);
}

// spectral Laplacian: multiply u_hat by -|k|^2 and invert
inline Field spectral_laplacian(const Field& u) {
  const int n = u.spec.n;
  Fft2D& fft = cached_fft(n);
  thread_local std::vector<std::complex<double>> uhat;
  fft.forward(u.values, uhat);
  const int ncol = n / 2 + 1;
  for (int iy = 0; iy < n; ++iy) {
    const double ky = wavenumber(u.spec, iy);
    for (int jx = 0; jx < ncol; ++jx) {
      const double kx = wavenumber(u.spec, jx);
      uhat[static_cast<size_t>(iy) * ncol + jx] *= -(kx * kx + ky * ky);
    }
  }
  Field out(u.spec);
  fft.backward(uhat, out.values);
  return out;
}

// x·∇u via spectral first derivatives. The Nyquist column/row is zeroed in a
// first derivative (its sign is ambiguous on the real lattice). Used to build
// the dilation-fiber tangent 2u + x·∇u.
inline Field radial_derivative(const Field& u) {
  const int n = u.spec.n;
  Fft2D& fft = cached_fft(n);
  thread_local std::vector<std::complex<double>> uhat, dhat;
  thread_local std::vector<double> tmp;
  fft.forward(u.values, uhat);
  const int ncol = n / 2 + 1;
  const std::complex<double> imag(0.0, 1.0);

  Field out(u.spec);
  dhat = uhat;
  for (int iy = 0; iy < n; ++iy)
    for (int jx = 0; jx < ncol; ++jx) {
      const double kx = (jx == n / 2) ? 0.0 : wavenumber(u.spec, jx);
      dhat[static_cast<size_t>(iy) * ncol + jx] *= imag * kx;
    }
  fft.backward(dhat, tmp);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      out.at(ix, iy) = node_coord(u.spec, ix) * tmp[static_cast<size_t>(iy) * n + ix];

  dhat = uhat;
  for (int iy = 0; iy < n; ++iy) {
    const double ky = (iy == n / 2) ? 0.0 : wavenumber(u.spec, iy);
    for (int jx = 0; jx < ncol; ++jx) dhat[static_cast<size_t>(iy) * ncol + jx] *= imag * ky;
  }
  fft.backward(dhat, tmp);
  for (int iy = 0; iy < n; ++iy) {
    const double y = node_coord(u.spec, iy);
    for (int ix = 0; ix < n; ++ix) out.at(ix, iy) += y * tmp[static_cast<size_t>(iy) * n + ix];
  }
  return out;
}

// -------------------------------------------------------------------- dilation

// Dilation u -> t^2 u(t x): sample u at t*x_i by bilinear interpolation with
// zero extension outside [-L, L]^2, then scale by t^2. Exact identity at t = 1.
inline Field rescale(const Field& u, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("rescale: t must be positive");
  if (t == 1.0) return u;
  const int n = u.spec.n;
  const double L = u.spec.L;
  const double h = u.spec.h;
  const double t2 = t * t;
  Field out(u.spec);
  for (int iy = 0; iy < n; ++iy) {
    const double gy = (t * node_coord(u.spec, iy) + L) / h - 0.5;
    const int jy = static_cast<int>(std::floor(gy));
    const double wy = gy - jy;
    for (int ix = 0; ix < n; ++ix) {
      const double gx = (t * node_coord(u.spec, ix) + L) / h - 0.5;
      const int jx = static_cast<int>(std::floor(gx));
      const double wx = gx - jx;
      double acc = 0.0;
      for (int dy = 0; dy <= 1; ++dy) {
        const int sy = jy + dy;
        if (sy < 0 || sy >= n) continue;
        const double fy = dy ? wy : 1.0 - wy;
        for (int dx = 0; dx <= 1; ++dx) {
          const int sx = jx + dx;
          if (sx < 0 || sx >= n) continue;
          const double fx = dx ? wx : 1.0 - wx;
          acc += fy * fx * u.at(sx, sy);
        }
      }
      out.at(ix, iy) = t2 * acc;
    }
  }
  return out;
}

// ------------------------------------------------------------------ caching

// Cached norms of one component; lp and weighted entries depend on the (p,
// lambda) they were built with.
struct NormCache {
  double l2_sq = 0.0;
  double grad_sq = 0.0;
  double l2p = 0.0;          // ||u||_{2p}^{2p}
  double weighted_sq = 0.0;  // log-weighted L^2, diagnostic
};

inline NormCache make_norm_cache(const Field& u, double p, double lambda) {
  NormCache c;
  c.l2_sq = l2_norm_sq(u);
  c.grad_sq = grad_norm_sq(u);
  c.l2p = lp_norm_pow(u, 2.0 * p);
  c.weighted_sq = weighted_norm_sq(u, lambda);
  return c;
}

}  // namespace lcgs
