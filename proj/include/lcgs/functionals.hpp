#pragma once
// Scalar functionals of a state pair (u, v) and the L^2 gradient of the
// energy. With rho = u^2 + v^2 and phi = log|.| * rho:
//
//   psi    = ||u||_{2p}^{2p} + ||v||_{2p}^{2p} + 2 beta int |uv|^p
//   I      = (||grad u||^2 + ||grad v||^2)/2 + V/4 - psi/(2p)
//   nehari = kinetic + V - psi                       (= I'(u,v)(u,v))
//   J      = 2 kinetic - mass^2/4 + V - (2 - 1/p) psi
//   P      = V + mass^2/4 - psi/p                    (Pohozaev value)
//
// where kinetic = ||grad u||^2 + ||grad v||^2, mass = ||u||_2^2 + ||v||_2^2,
// V = <phi, rho>. The identity J = 2*nehari - P holds for every state, since
// (4p-2)/(2p) = 2 - 1/p; it is exposed as a consistency diagnostic.

#include <cmath>
#include <stdexcept>
#include <utility>

#include "lcgs/grid.hpp"
#include "lcgs/kernel.hpp"

namespace lcgs {

struct StatePair {
  Field u, v;
  NormCache cu, cv;  // caches built with the (p, lambda) of the owning run

  StatePair() = default;
  StatePair(Field uu, Field vv) : u(std::move(uu)), v(std::move(vv)) {
    require_same_grid(u, v, "StatePair");
  }
};

inline StatePair make_state(Field u, Field v, double p, double lambda) {
  StatePair s(std::move(u), std::move(v));
  s.cu = make_norm_cache(s.u, p, lambda);
  s.cv = make_norm_cache(s.v, p, lambda);
  return s;
}

struct EnergyReport {
  double I = 0.0;
  double J = 0.0;
  double P = 0.0;
  double psi = 0.0;
  double V = 0.0;
  double nehari = 0.0;
  double kinetic = 0.0;
  double mass_sq_sum = 0.0;
  double beta = 0.0;
  double p = 2.0;

  // residual scale used by every |J|, |P| tolerance in the suite
  double scale() const { return std::max(kinetic, psi); }
};

inline void check_params(double beta, double p, const char* where) {
  if (!(beta >= 0.0)) throw std::invalid_argument(std::string(where) + ": beta must be >= 0");
  if (!(p >= 2.0)) throw std::invalid_argument(std::string(where) + ": p must be >= 2");
}

// h^2 * sum |u v|^p, the coupling integral
inline double cross_term(const Field& u, const Field& v, double p) {
  require_same_grid(u, v, "cross_term");
  double acc = 0.0;
  if (p == 2.0) {
    for (size_t i = 0; i < u.values.size(); ++i) {
      const double w = u.values[i] * v.values[i];
      acc += w * w;
    }
  } else {
    for (size_t i = 0; i < u.values.size(); ++i)
      acc += std::pow(std::fabs(u.values[i] * v.values[i]), p);
  }
  return u.spec.h * u.spec.h * acc;
}

inline double psi_beta(const Field& u, const Field& v, double beta, double p) {
  check_params(beta, p, "psi_beta");
  return lp_norm_pow(u, 2.0 * p) + lp_norm_pow(v, 2.0 * p) + 2.0 * beta * cross_term(u, v, p);
}

inline double psi_beta(const StatePair& s, double beta, double p) {
  return psi_beta(s.u, s.v, beta, p);
}

// Assemble the report from precomputed ingredients (used by the solver, which
// already owns kinetic, V, psi from its fiber bookkeeping).
inline EnergyReport assemble_report(double kinetic, double mass_sq_sum, double V, double psi,
                                    double beta, double p) {
  EnergyReport r;
  r.kinetic = kinetic;
  r.mass_sq_sum = mass_sq_sum;
  r.V = V;
  r.psi = psi;
  r.beta = beta;
  r.p = p;
  r.I = 0.5 * kinetic + 0.25 * V - psi / (2.0 * p);
  r.nehari = kinetic + V - psi;
  r.J = 2.0 * kinetic - 0.25 * mass_sq_sum * mass_sq_sum + V - (2.0 - 1.0 / p) * psi;
  r.P = V + 0.25 * mass_sq_sum * mass_sq_sum - psi / p;
  return r;
}

inline EnergyReport energy_report(const StatePair& s, double beta, double p,
                                  const KernelTable& kernel) {
  check_params(beta, p, "energy_report");
  require_same_grid(s.u, s.v, "energy_report");
  if (s.u.spec != kernel.spec) throw std::invalid_argument("energy_report: kernel grid mismatch");
  const double kinetic = grad_norm_sq(s.u) + grad_norm_sq(s.v);
  const double mass = l2_norm_sq(s.u) + l2_norm_sq(s.v);
  const double V = V_form(s.u, s.v, kernel);
  const double psi = psi_beta(s, beta, p);
  return assemble_report(kinetic, mass, V, psi, beta, p);
}

// L^2 gradient with the potential phi supplied by the caller (solver hot path;
// phi must be the log-potential of u^2 + v^2):
//   g_u = -lap u + phi u - |u|^{2p-2} u - beta |v|^p |u|^{p-2} u, symmetric in v.
// The nonlinearity |u|^{p-2} u extends continuously by 0 at u = 0 for p >= 2.
inline std::pair<Field, Field> gradient_with_phi(const Field& u, const Field& v, const Field& phi,
                                                 double beta, double p) {
  check_params(beta, p, "gradient");
  Field gu = spectral_laplacian(u);
  Field gv = spectral_laplacian(v);
  const size_t sz = u.values.size();
  if (p == 2.0) {
    for (size_t i = 0; i < sz; ++i) {
      const double uu = u.values[i], vv = v.values[i], ph = phi.values[i];
      gu.values[i] = -gu.values[i] + ph * uu - uu * uu * uu - beta * vv * vv * uu;
      gv.values[i] = -gv.values[i] + ph * vv - vv * vv * vv - beta * uu * uu * vv;
    }
  } else {
    for (size_t i = 0; i < sz; ++i) {
      const double uu = u.values[i], vv = v.values[i], ph = phi.values[i];
      const double au = std::fabs(uu), av = std::fabs(vv);
      gu.values[i] = -gu.values[i] + ph * uu - std::pow(au, 2.0 * p - 2.0) * uu -
                     beta * std::pow(av, p) * (au > 0.0 ? std::pow(au, p - 2.0) * uu : 0.0);
      gv.values[i] = -gv.values[i] + ph * vv - std::pow(av, 2.0 * p - 2.0) * vv -
                     beta * std::pow(au, p) * (av > 0.0 ? std::pow(av, p - 2.0) * vv : 0.0);
    }
  }
  return {std::move(gu), std::move(gv)};
}

inline std::pair<Field, Field> gradient_with_phi(const StatePair& s, const Field& phi, double beta,
                                                 double p) {
  return gradient_with_phi(s.u, s.v, phi, beta, p);
}

inline std::pair<Field, Field> gradient(const StatePair& s, double beta, double p,
                                        const KernelTable& kernel) {
  const Field phi = log_potential(density_of(s.u, s.v), kernel);
  return gradient_with_phi(s.u, s.v, phi, beta, p);
}

}  // namespace lcgs
