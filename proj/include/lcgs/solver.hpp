#pragma once
// Projected gradient descent on the constraint manifold {J = 0}.
//
// Each iteration steps along the negative L^2 gradient of the energy, applies
// positive-part truncation, and projects the trial back onto the manifold
// through the dilation fiber. Two measures keep the interpolation error of
// materialized dilations from polluting the optimization:
//
//   * Armijo acceptance is measured on the exact closed-form fiber value
//     f(t0) of the trial's coefficients — the energy of the projected state
//     in exact arithmetic — never on the energy of resampled fields.
//   * The projection is materialized lazily: while |t0 - 1| stays inside a
//     small band the state is kept unprojected (its projection is tracked
//     exactly through the coefficients), and fields are only resampled when
//     the scalar drifts out of the band, plus once on exit. Resampling at
//     t0 ~ 1 would otherwise inject noise above the late-stage descent rate.
//
// Convergence gates are evaluated in exact arithmetic from the fiber
// coefficients of the current state: the Nehari pairing <gradient, state>
// must vanish relative to max(kinetic, psi), the state's own projection
// scalar must sit at 1 (the manifold is a natural constraint, so both are
// driven to zero together with the gradient), and the last accepted update
// must be small relative to the state norm. The final materialization then
// perturbs J by far less than the gate tolerance.
//
// The descent direction is orthogonalized against the dilation-fiber tangent
// (2u + x·∇u, 2v + x·∇v): the projected objective is invariant along the
// fiber, so gradient mass along the tangent is pure drift of the projection
// scalar. On the grid this descent equilibrates at grad I = a * tau with a
// small discretization defect a != 0, leaving the Nehari pairing and the
// Pohozaev value floored at the defect level instead of at the gates. A
// second phase removes the defect: damped Newton steps on the scalar
// equation P = 0 along the tangent-projected gradient of P, which drive
// ne = (J + P)/2 to zero at second-order cost in the energy.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lcgs/fiber.hpp"
#include "lcgs/io.hpp"

namespace lcgs {

enum class InitKind { gaussian_pair, gaussian_semitrivial, symmetric, from_file };

inline std::string to_string(InitKind k) {
  switch (k) {
    case InitKind::gaussian_pair: return "gaussian_pair";
    case InitKind::gaussian_semitrivial: return "gaussian_semitrivial";
    case InitKind::symmetric: return "symmetric";
    case InitKind::from_file: return "from_file";
  }
  throw std::logic_error("to_string(InitKind)");
}

inline InitKind init_kind_from_string(const std::string& s) {
  if (s == "gaussian_pair") return InitKind::gaussian_pair;
  if (s == "gaussian_semitrivial") return InitKind::gaussian_semitrivial;
  if (s == "symmetric") return InitKind::symmetric;
  if (s == "from_file") return InitKind::from_file;
  throw std::invalid_argument("unknown init_kind: " + s);
}

struct SolverOptions {
  int max_iters = 20000;
  double step0 = 0.05;             // initial step, in units of state norm
  double backtrack_factor = 0.5;   // Armijo shrink
  double armijo_c = 1e-4;          // sufficient-decrease constant
  double tol_grad = 1e-5;          // relative update-norm stop
  double tol_constraint = 2.5e-5;  // |nehari| gate; final |J| <= tol*scale, |P| <= 10*tol*scale
  uint64_t seed = 1;
  InitKind init_kind = InitKind::symmetric;  // pair inits crawl through the
                                             // translational near-zero mode
  std::string init_file_u;         // from_file only
  std::string init_file_v;

  void validate() const {
    if (max_iters < 1) throw std::invalid_argument("SolverOptions: max_iters must be >= 1");
    if (!(step0 > 0.0)) throw std::invalid_argument("SolverOptions: step0 must be positive");
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
      throw std::invalid_argument("SolverOptions: backtrack_factor must lie in (0,1)");
    if (!(armijo_c > 0.0 && armijo_c < 1.0))
      throw std::invalid_argument("SolverOptions: armijo_c must lie in (0,1)");
    if (!(tol_grad > 0.0)) throw std::invalid_argument("SolverOptions: tol_grad must be positive");
    if (!(tol_constraint > 0.0))
      throw std::invalid_argument("SolverOptions: tol_constraint must be positive");
  }
};

enum class Classification { Semitrivial, Vectorial, Symmetric };

inline std::string to_string(Classification c) {
  switch (c) {
    case Classification::Semitrivial: return "Semitrivial";
    case Classification::Vectorial: return "Vectorial";
    case Classification::Symmetric: return "Symmetric";
  }
  throw std::logic_error("to_string(Classification)");
}

inline constexpr double kDefaultRatioTol = 1e-3;

struct Solution {
  StatePair state;
  EnergyReport report;
  std::vector<double> t0_history;      // projection scalars, in order
  std::vector<double> energy_history;  // accepted fiber values of the energy descent
  double c_beta_estimate = 0.0;        // = report.I
  int iterations = 0;                  // accepted descent steps
  bool converged = false;
  Classification classification = Classification::Semitrivial;
};

// ------------------------------------------------------------ initial states

namespace detail {

// uniform double in [0, 1) from the raw generator, bit-stable across platforms
inline double u01(std::mt19937_64& eng) { return (eng() >> 11) * 0x1.0p-53; }

inline Field gaussian_bump(const GridSpec& g, double cx, double cy, double amp, double width) {
  Field f(g);
  const double inv2w2 = 1.0 / (2.0 * width * width);
  for (int iy = 0; iy < g.n; ++iy) {
    const double dy = node_coord(g, iy) - cy;
    for (int ix = 0; ix < g.n; ++ix) {
      const double dx = node_coord(g, ix) - cx;
      f.at(ix, iy) = amp * std::exp(-(dx * dx + dy * dy) * inv2w2);
    }
  }
  return f;
}

inline void add_in_place(Field& a, const Field& b) {
  for (size_t i = 0; i < a.values.size(); ++i) a.values[i] += b.values[i];
}

inline void clamp_nonnegative(Field& f) {
  for (double& x : f.values) x = std::max(x, 0.0);
}

}  // namespace detail

inline StatePair initial_state(const GridSpec& g, const SolverOptions& opts) {
  switch (opts.init_kind) {
    case InitKind::gaussian_semitrivial:
      return StatePair(detail::gaussian_bump(g, 0.0, 0.0, 1.2, 1.0), Field(g));
    case InitKind::symmetric: {
      Field u = detail::gaussian_bump(g, 0.0, 0.0, 0.9, 1.0);
      return StatePair(u, u);
    }
    case InitKind::gaussian_pair: {
      // offset bumps plus a small seeded smooth perturbation, clamped >= 0
      std::mt19937_64 eng(opts.seed);
      Field u = detail::gaussian_bump(g, 0.75, 0.0, 1.0, 1.0);
      Field v = detail::gaussian_bump(g, -0.75, 0.0, 1.0, 1.0);
      for (Field* f : {&u, &v}) {
        for (int k = 0; k < 3; ++k) {
          const double cx = 3.0 * detail::u01(eng) - 1.5;
          const double cy = 3.0 * detail::u01(eng) - 1.5;
          const double amp = 0.1 * detail::u01(eng) - 0.05;
          detail::add_in_place(*f, detail::gaussian_bump(g, cx, cy, amp, 0.8));
        }
        detail::clamp_nonnegative(*f);
      }
      return StatePair(std::move(u), std::move(v));
    }
    case InitKind::from_file: {
      Field u = read_field(opts.init_file_u);
      Field v = read_field(opts.init_file_v);
      if (u.spec != g || v.spec != g)
        throw std::invalid_argument("initial_state: file grid does not match requested grid");
      return StatePair(std::move(u), std::move(v));
    }
  }
  throw std::logic_error("initial_state: unhandled init kind");
}

// ----------------------------------------------------------------- minimize

namespace detail {

// Everything the loop tracks about the current (possibly unprojected) state.
struct LoopState {
  Field u, v;
  Field phi;              // log-potential of u^2 + v^2
  double mass_sum = 0.0;  // ||u||_2^2 + ||v||_2^2
  FiberCoefficients c;
  double t0 = 1.0;        // projection scalar of the current state
  double F = 0.0;         // exact fiber value f(t0), the bookkeeping energy
};

// Compute potential, coefficients and fiber data for fields (u, v).
inline LoopState analyze(Field u, Field v, double beta, double p, const KernelTable& kernel) {
  LoopState st;
  st.u = std::move(u);
  st.v = std::move(v);
  const double mu = l2_norm_sq(st.u);
  const double mv = l2_norm_sq(st.v);
  st.mass_sum = mu + mv;
  if (st.mass_sum == 0.0) throw std::runtime_error("minimize: state collapsed to zero");
  const Field rho = density_of(st.u, st.v);
  st.phi = convolve(rho, kernel);
  const double A = grad_norm_sq(st.u) + grad_norm_sq(st.v);
  const double C = inner(st.phi, rho);
  const double D = psi_beta(st.u, st.v, beta, p);
  st.c = make_coeffs(A, st.mass_sum * st.mass_sum, C, D, beta, p);
  st.t0 = project_t0(st.c);
  st.F = fiber_value(st.c, st.t0);
  if (!std::isfinite(st.F)) throw std::runtime_error("minimize: non-finite energy");
  return st;
}

// J and P of the current state, exact in the coefficients.
inline double J_of(const FiberCoefficients& c) {
  return 2.0 * c.A - 0.25 * c.B + c.C - (2.0 - 1.0 / c.p) * c.D;
}
inline double P_of(const FiberCoefficients& c) { return c.C + 0.25 * c.B - c.D / c.p; }

// L^2 gradient of P = V + B/4 - psi/p at (u, v):
//   dP/du = 4 phi u + mass_sum u - 2 u^{2p-1} - 2 beta v^p u^{p-1}
inline std::pair<Field, Field> grad_P(const LoopState& st, double beta, double p) {
  Field gu(st.u.spec), gv(st.v.spec);
  const bool quadratic = (p == 2.0);
  for (size_t i = 0; i < gu.values.size(); ++i) {
    const double u = st.u.values[i];
    const double v = st.v.values[i];
    const double ph = st.phi.values[i];
    double pu, pv;
    if (quadratic) {
      pu = 2.0 * u * u * u + 2.0 * beta * v * v * u;
      pv = 2.0 * v * v * v + 2.0 * beta * u * u * v;
    } else {
      pu = 2.0 * std::pow(u, 2.0 * p - 1.0) + 2.0 * beta * std::pow(v, p) * std::pow(u, p - 1.0);
      pv = 2.0 * std::pow(v, 2.0 * p - 1.0) + 2.0 * beta * std::pow(u, p) * std::pow(v, p - 1.0);
    }
    gu.values[i] = 4.0 * ph * u + st.mass_sum * u - pu;
    gv.values[i] = 4.0 * ph * v + st.mass_sum * v - pv;
  }
  return {std::move(gu), std::move(gv)};
}

}  // namespace detail

// Band of |t0 - 1| within which the projection is tracked exactly through the
// coefficients instead of being materialized by resampling.
inline constexpr double kLazyProjectionBand = 3e-3;

// Convergence gate on the state's own projection scalar. M_beta is a natural
// constraint (the multiplier vanishes at the minimizer), so optimality drives
// the unconstrained gradient to zero and t0 back to 1; demanding |t0 - 1| be
// this small certifies the state sits on the manifold, not merely near it.
inline constexpr double kProjectionDriftGate = 1e-5;

inline Classification classify_norms(double l2u, double l2v, double ratio_tol) {
  const double lo = std::min(l2u, l2v);
  const double hi = std::max(l2u, l2v);
  if (hi == 0.0 || lo / hi < ratio_tol) return Classification::Semitrivial;
  return Classification::Vectorial;  // refined to Symmetric by the caller
}

inline Classification classify_state(const StatePair& s, double ratio_tol) {
  const double l2u = std::sqrt(l2_norm_sq(s.u));
  const double l2v = std::sqrt(l2_norm_sq(s.v));
  const Classification base = classify_norms(l2u, l2v, ratio_tol);
  if (base == Classification::Semitrivial) return base;
  Field diff = s.u;
  Field sum = s.u;
  for (size_t i = 0; i < diff.values.size(); ++i) {
    diff.values[i] -= s.v.values[i];
    sum.values[i] += s.v.values[i];
  }
  const double nd = std::sqrt(l2_norm_sq(diff));
  const double ns = std::sqrt(l2_norm_sq(sum));
  if (ns > 0.0 && nd / ns < ratio_tol) return Classification::Symmetric;
  return Classification::Vectorial;
}

inline Solution minimize(const GridSpec& g, double beta, double p, const SolverOptions& opts,
                         const KernelTable& kernel, double lambda = 2.0) {
  check_params(beta, p, "minimize");
  opts.validate();
  if (kernel.spec != g) throw std::invalid_argument("minimize: kernel grid mismatch");

  Solution sol;
  const StatePair init = initial_state(g, opts);

  // project the initial state onto the manifold and materialize it
  detail::LoopState cur = detail::analyze(init.u, init.v, beta, p, kernel);
  sol.t0_history.push_back(cur.t0);
  cur = detail::analyze(rescale(cur.u, cur.t0), rescale(cur.v, cur.t0), beta, p, kernel);

  // largest stable step for the spectral Laplacian at this resolution
  const double kmax = M_PI * g.n / (2.0 * g.L);
  const double s_max = 1.5 / (kmax * kmax);
  double s = -1.0;  // set from the first gradient
  double upd = -1.0;
  bool gates_met = false;
  bool armijo_floor = false;

  const char* trace_env = std::getenv("LCGS_TRACE");
  const int trace_every = trace_env ? std::max(1, std::atoi(trace_env)) : 0;

  int phase = 1;         // 1: energy descent; 2: Pohozaev polish
  double F_guard = 0.0;  // energy ceiling while polishing
  auto enter_polish = [&](int it, double ne, double sc) {
    phase = 2;
    F_guard = cur.F + 1e-4 * std::max(1.0, std::fabs(cur.F));
    if (trace_every > 0)
      std::fprintf(stderr, "it=%-6d polish phase: F=%.12f ne/sc=%+.3e\n", it, cur.F, ne / sc);
  };

  for (int it = 0; it < opts.max_iters; ++it) {
    // convergence gates, exact in the coefficients of the current state:
    // the Nehari pairing <gradient, state> = A + C - D must vanish, the
    // state's own projection scalar must have returned to 1, and the last
    // accepted update must be small relative to the state norm
    const double sc = std::max(cur.c.A, cur.c.D);
    const double ne = cur.c.A + cur.c.C - cur.c.D;
    if (trace_every > 0 && it % trace_every == 0)
      std::fprintf(stderr,
                   "it=%-6d ph=%d F=%.12f ne/sc=%+.3e t0-1=%+.3e upd=%.3e J/sc=%+.3e P/sc=%+.3e\n",
                   it, phase, cur.F, ne / sc, cur.t0 - 1.0, upd, detail::J_of(cur.c) / sc,
                   detail::P_of(cur.c) / sc);
    if (upd >= 0.0 && upd < opts.tol_grad && std::fabs(ne) <= opts.tol_constraint * sc &&
        std::fabs(cur.t0 - 1.0) <= kProjectionDriftGate) {
      gates_met = true;
      break;
    }
    // descent has converged update-wise with the Nehari pairing floored near
    // the discretization defect: switch to the polish phase (a stagnating
    // update with |ne| still large is left to the Armijo floor below, so the
    // polish can never certify a state the energy descent has not reached)
    if (phase == 1 && upd >= 0.0 && upd < opts.tol_grad &&
        std::fabs(ne) <= 40.0 * opts.tol_constraint * sc) {
      enter_polish(it, ne, sc);
      continue;
    }

    // descent direction: energy gradient (phase 1) or Pohozaev gradient
    // (phase 2), orthogonalized against the dilation-fiber tangent
    Field gu(g), gv(g);
    if (phase == 1) {
      auto [eu, ev] = gradient_with_phi(cur.u, cur.v, cur.phi, beta, p);
      gu = std::move(eu);
      gv = std::move(ev);
    } else {
      auto [pu, pv] = detail::grad_P(cur, beta, p);
      gu = std::move(pu);
      gv = std::move(pv);
    }
    {
      Field tu = radial_derivative(cur.u);
      Field tv = radial_derivative(cur.v);
      for (size_t i = 0; i < tu.values.size(); ++i) {
        tu.values[i] += 2.0 * cur.u.values[i];
        tv.values[i] += 2.0 * cur.v.values[i];
      }
      const double tt = l2_norm_sq(tu) + l2_norm_sq(tv);
      if (tt > 0.0) {
        const double a = (inner(gu, tu) + inner(gv, tv)) / tt;
        for (size_t i = 0; i < gu.values.size(); ++i) {
          gu.values[i] -= a * tu.values[i];
          gv.values[i] -= a * tv.values[i];
        }
      }
    }
    const double gn2 = l2_norm_sq(gu) + l2_norm_sq(gv);
    const double staten = std::sqrt(cur.mass_sum);

    auto attempt = [&](double step, detail::LoopState& out) -> bool {
      Field un(g), vn(g);
      for (size_t i = 0; i < un.values.size(); ++i) {
        un.values[i] = std::max(cur.u.values[i] - step * gu.values[i], 0.0);
        vn.values[i] = std::max(cur.v.values[i] - step * gv.values[i], 0.0);
      }
      try {
        out = detail::analyze(std::move(un), std::move(vn), beta, p, kernel);
      } catch (const std::runtime_error&) {
        return false;  // collapse or unprojectable trial: treat as a rejection
      }
      return true;
    };

    bool accepted = false;
    detail::LoopState trial;
    if (phase == 1) {
      if (s < 0.0) s = std::min(opts.step0 * staten / std::sqrt(gn2), s_max);
      // backtracking line search on the exact fiber value; strict decrease
      // required: once the decrement underflows the ulp of F, a no-op trial
      // must reject, not free-wheel
      for (int bt = 0; bt < 60 && !accepted; ++bt) {
        if (attempt(s, trial) && trial.F <= cur.F - opts.armijo_c * s * gn2 && trial.F < cur.F)
          accepted = true;
        else
          s *= opts.backtrack_factor;
      }
    } else {
      // one damped Newton step for the scalar equation P = 0: to first order
      // P(trial) = P0 - step * <grad P, d> = P0 - step * gn2
      const double P0 = detail::P_of(cur.c);
      double s2 = (gn2 > 0.0) ? std::clamp(P0 / gn2, -s_max, s_max) : 0.0;
      for (int bt = 0; bt < 60 && !accepted && s2 != 0.0; ++bt) {
        if (attempt(s2, trial) && std::fabs(detail::P_of(trial.c)) < std::fabs(P0) &&
            trial.F <= F_guard)
          accepted = true;
        else
          s2 *= 0.5;
      }
    }
    if (!accepted) {
      // Backtracking exhausted. If the state has drifted off the manifold,
      // its lazy bookkeeping value f(t0) undercuts every materializable
      // trial and no step can "descend"; materialize to restore honest
      // bookkeeping and retry with a fresh step. A stall with t0 ~ 1 ends
      // the energy descent (hand off to the polish) or, in the polish
      // itself, is a genuine floor.
      if (std::fabs(cur.t0 - 1.0) > 1e-9) {
        cur = detail::analyze(rescale(cur.u, cur.t0), rescale(cur.v, cur.t0), beta, p, kernel);
        s = 0.25 * s_max;
        if (trace_every > 0)
          std::fprintf(stderr, "it=%-6d stall rescue: materialized, F=%.12f t0-1=%+.3e\n", it,
                       cur.F, cur.t0 - 1.0);
        continue;
      }
      if (phase == 1) {
        enter_polish(it, ne, sc);
        continue;
      }
      armijo_floor = true;  // descent below the discretization noise floor
      break;
    }

    sol.t0_history.push_back(trial.t0);
    if (phase == 1) sol.energy_history.push_back(trial.F);
    ++sol.iterations;

    // materialize the projection only when the scalar leaves the lazy band
    detail::LoopState next;
    if (std::fabs(trial.t0 - 1.0) >= kLazyProjectionBand) {
      next = detail::analyze(rescale(trial.u, trial.t0), rescale(trial.v, trial.t0), beta, p,
                             kernel);
    } else {
      next = std::move(trial);
    }
    double dsq = 0.0;
    for (size_t i = 0; i < cur.u.values.size(); ++i) {
      const double du = next.u.values[i] - cur.u.values[i];
      const double dv = next.v.values[i] - cur.v.values[i];
      dsq += du * du + dv * dv;
    }
    upd = g.h * std::sqrt(dsq) / staten;
    cur = std::move(next);
    if (phase == 1) s = std::min(s * 1.5, s_max);  // grow the accepted step, capped
  }

  // final materialized projection; t0 ~ 1 here, so the injected error is far
  // below the gate tolerances
  sol.t0_history.push_back(cur.t0);
  Field fu = rescale(cur.u, cur.t0);
  Field fv = rescale(cur.v, cur.t0);
  detail::clamp_nonnegative(fu);
  detail::clamp_nonnegative(fv);
  sol.state = make_state(std::move(fu), std::move(fv), p, lambda);
  sol.report = energy_report(sol.state, beta, p, kernel);
  sol.c_beta_estimate = sol.report.I;
  const double sc = sol.report.scale();
  sol.converged = gates_met && !armijo_floor &&
                  std::fabs(sol.report.J) <= opts.tol_constraint * sc &&
                  std::fabs(sol.report.P) <= 10.0 * opts.tol_constraint * sc;
  sol.classification = classify_state(sol.state, kDefaultRatioTol);
  return sol;
}

// Classification operation on a converged solution (contract-level entry
// point; minimize already fills the classification field).
inline Classification classify(const Solution& sol, double ratio_tol) {
  if (!sol.converged) throw std::invalid_argument("classify: solution not converged");
  return classify_state(sol.state, ratio_tol);
}

// Euler-Lagrange residual ||g_u||_2 + ||g_v||_2 of a state.
inline double el_residual(const StatePair& s, double beta, double p, const KernelTable& kernel) {
  auto [gu, gv] = gradient(s, beta, p, kernel);
  return std::sqrt(l2_norm_sq(gu)) + std::sqrt(l2_norm_sq(gv));
}

}  // namespace lcgs
