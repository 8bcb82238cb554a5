#pragma once
// Exact fiber-map machinery. Along the dilation curve t -> (t^2 u(t.), t^2 v(t.))
// the energy is an explicit function of four scalars of the base state,
//
//   A = ||grad u||^2 + ||grad v||^2,  B = (||u||_2^2 + ||v||_2^2)^2,
//   C = V(u, v),                      D = psi(u, v),
//
//   f(t)  = (t^4/2) A + (t^4 log(1/t)/4) B + (t^4/4) C - (t^{4p-2}/(2p)) D,
//   f'(t) = 2t^3 A + (t^3 (4 log(1/t) - 1)/4) B + t^3 C - (2 - 1/p) t^{4p-3} D,
//
// with t f'(t) equal to the manifold functional J evaluated at the dilated
// state. Since g(t) = f'(t)/t^3 is strictly decreasing for p >= 2 (and D > 0),
// f' has a unique positive root t0: the projection of the state onto the
// constraint set {J = 0}. Bisection on g is therefore globally convergent.

#include <cmath>
#include <stdexcept>
#include <utility>

#include "lcgs/functionals.hpp"

namespace lcgs {

struct FiberCoefficients {
  double A = 0.0;  // kinetic sum, >= 0
  double B = 0.0;  // squared mass sum, >= 0
  double C = 0.0;  // nonlocal form, sign-indefinite
  double D = 0.0;  // psi, > 0 for nonzero states
  double p = 2.0;
  double beta = 0.0;
};

inline FiberCoefficients fiber_coeffs(const StatePair& s, double beta, double p,
                                      const KernelTable& kernel) {
  check_params(beta, p, "fiber_coeffs");
  const double mu = l2_norm_sq(s.u);
  const double mv = l2_norm_sq(s.v);
  if (mu + mv == 0.0) throw std::invalid_argument("fiber_coeffs: zero state");
  FiberCoefficients c;
  c.A = grad_norm_sq(s.u) + grad_norm_sq(s.v);
  c.B = (mu + mv) * (mu + mv);
  c.C = V_form(s.u, s.v, kernel);
  c.D = psi_beta(s, beta, p);
  c.p = p;
  c.beta = beta;
  return c;
}

// Assemble coefficients from already-known scalars (solver hot path).
inline FiberCoefficients make_coeffs(double A, double B, double C, double D, double beta,
                                     double p) {
  return FiberCoefficients{A, B, C, D, p, beta};
}

inline double fiber_value(const FiberCoefficients& c, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("fiber_value: t must be positive");
  const double t4 = t * t * t * t;
  return 0.5 * t4 * c.A - 0.25 * t4 * std::log(t) * c.B + 0.25 * t4 * c.C -
         std::pow(t, 4.0 * c.p - 2.0) / (2.0 * c.p) * c.D;
}

inline double fiber_derivative(const FiberCoefficients& c, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("fiber_derivative: t must be positive");
  const double t3 = t * t * t;
  return 2.0 * t3 * c.A - 0.25 * t3 * (4.0 * std::log(t) + 1.0) * c.B + t3 * c.C -
         (2.0 - 1.0 / c.p) * std::pow(t, 4.0 * c.p - 3.0) * c.D;
}

inline double fiber_second_derivative(const FiberCoefficients& c, double t) {
  const double t2 = t * t;
  return 6.0 * t2 * c.A - 0.25 * t2 * (12.0 * std::log(t) + 7.0) * c.B + 3.0 * t2 * c.C -
         (2.0 - 1.0 / c.p) * (4.0 * c.p - 3.0) * std::pow(t, 4.0 * c.p - 4.0) * c.D;
}

// g(t) = f'(t)/t^3, strictly decreasing in t; the bisection target.
inline double fiber_g(const FiberCoefficients& c, double t) {
  return 2.0 * c.A - 0.25 * (4.0 * std::log(t) + 1.0) * c.B + c.C -
         (2.0 - 1.0 / c.p) * std::pow(t, 4.0 * c.p - 6.0) * c.D;
}

// floor below which the projection scalar is treated as a collapse failure
inline constexpr double kProjectionFloor = 1e-8;

// Unique positive root of f': bracket by doubling/halving from t = 1, bisect
// on the monotone g to 1e-15 relative, then polish with one guarded Newton
// step on f'.
inline double project_t0(const FiberCoefficients& c) {
  if (!(c.D > 0.0))
    throw std::domain_error("project_t0: D = 0, state does not meet the constraint fiber");
  double lo = 1.0, hi = 1.0;
  if (fiber_g(c, 1.0) > 0.0) {
    do {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e9) throw std::runtime_error("project_t0: failed to bracket root above");
    } while (fiber_g(c, hi) > 0.0);
  } else {
    do {
      hi = lo;
      lo *= 0.5;
      if (lo < kProjectionFloor)
        throw std::runtime_error("project_t0: root below floor 1e-8 (state collapse)");
    } while (fiber_g(c, lo) < 0.0);
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (fiber_g(c, mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double t0 = 0.5 * (lo + hi);
  const double fp = fiber_derivative(c, t0);
  const double fpp = fiber_second_derivative(c, t0);
  if (fpp != 0.0) {
    const double tn = t0 - fp / fpp;
    if (tn > 0.0 && std::isfinite(tn) && std::fabs(fiber_derivative(c, tn)) < std::fabs(fp))
      t0 = tn;
  }
  return t0;
}

// Project a state onto the constraint set: the scalar t0 plus the dilated
// fields materialized on the grid by bilinear resampling. Downstream value
// bookkeeping should use the exact fiber_value(c, t0), not the energy of the
// materialized pair, which carries interpolation error.
inline std::pair<double, StatePair> project(const StatePair& s, double beta, double p,
                                            const KernelTable& kernel) {
  const FiberCoefficients c = fiber_coeffs(s, beta, p, kernel);
  const double t0 = project_t0(c);
  return {t0, StatePair(rescale(s.u, t0), rescale(s.v, t0))};
}

}  // namespace lcgs
