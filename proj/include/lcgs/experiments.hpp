#pragma once
// Scripted studies that confront the solver with the theory it discretizes:
// the beta-threshold race between semitrivial and symmetric candidates, the
// threshold identity at beta* = 2^{p-1} - 1, the h_beta coupling scan, and
// the dilation scaling-identity suite.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "lcgs/solver.hpp"

namespace lcgs {

inline double beta_star(double p) { return std::pow(2.0, p - 1.0) - 1.0; }

// ------------------------------------------------------------------ sweeps

struct SweepRecord {
  double beta = 0.0;
  double p = 2.0;
  double c_beta = 0.0;
  double l2_u = 0.0;
  double l2_v = 0.0;
  std::string classification;  // "Semitrivial" or "Vectorial" (vector = both components alive)
  bool converged = false;
  int iterations = 0;
  double L = 0.0;
  int n = 0;
};

// Sweep-level dichotomy: a state whose components are both nonzero is a
// vector solution regardless of whether the components happen to coincide.
inline std::string sweep_classification(const StatePair& s, double ratio_tol = kDefaultRatioTol) {
  const Classification c = classify_state(s, ratio_tol);
  return c == Classification::Semitrivial ? "Semitrivial" : "Vectorial";
}

struct SweepPoint {
  SweepRecord record;
  Solution solution;  // the kept candidate, when one exists
  bool has_solution = false;
};

// Solve one beta from both a semitrivial and a symmetric initialization and
// keep the lower-energy converged result (the threshold race).
inline SweepPoint sweep_point(double beta, double p, const GridSpec& g, const SolverOptions& opts,
                              const KernelTable& kernel) {
  SweepPoint out;
  SweepRecord& rec = out.record;
  rec.beta = beta;
  rec.p = p;
  rec.L = g.L;
  rec.n = g.n;

  Solution semi, symm;
  bool have_semi = false, have_symm = false;
  SolverOptions o = opts;
  try {
    o.init_kind = InitKind::gaussian_semitrivial;
    semi = minimize(g, beta, p, o, kernel);
    have_semi = true;
  } catch (const std::exception&) {
  }
  try {
    o.init_kind = InitKind::symmetric;
    symm = minimize(g, beta, p, o, kernel);
    have_symm = true;
  } catch (const std::exception&) {
  }
  auto better = [](const Solution& a, const Solution& b) {
    if (a.converged != b.converged) return a.converged;
    return a.report.I < b.report.I;
  };
  if (have_semi && have_symm)
    out.solution = better(semi, symm) ? std::move(semi) : std::move(symm);
  else if (have_semi)
    out.solution = std::move(semi);
  else if (have_symm)
    out.solution = std::move(symm);
  else
    return out;  // both initializations failed: unconverged row
  out.has_solution = true;

  const Solution& best = out.solution;
  rec.c_beta = best.report.I;
  rec.l2_u = std::sqrt(l2_norm_sq(best.state.u));
  rec.l2_v = std::sqrt(l2_norm_sq(best.state.v));
  rec.classification = sweep_classification(best.state);
  rec.converged = best.converged;
  rec.iterations = best.iterations;
  return out;
}

// Optional sink: called once per completed point (possibly from a worker
// thread; points never share an index, so per-point outputs never collide).
using SweepSink = std::function<void(size_t, const SweepPoint&)>;

inline std::vector<SweepRecord> beta_sweep(double p, const std::vector<double>& betas,
                                           const GridSpec& g, const SolverOptions& opts,
                                           const KernelTable& kernel, int jobs = 1,
                                           const SweepSink& sink = {}) {
  if (betas.empty()) throw std::invalid_argument("beta_sweep: empty beta list");
  for (double b : betas) check_params(b, p, "beta_sweep");
  std::vector<double> sorted = betas;
  std::sort(sorted.begin(), sorted.end());
  std::vector<SweepRecord> records(sorted.size());
  auto run_one = [&](size_t i) {
    SweepPoint pt = sweep_point(sorted[i], p, g, opts, kernel);
    records[i] = pt.record;
    if (sink) sink(i, pt);
  };
  if (jobs <= 1) {
    for (size_t i = 0; i < sorted.size(); ++i) run_one(i);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (size_t i = next.fetch_add(1); i < sorted.size(); i = next.fetch_add(1)) run_one(i);
    };
    std::vector<std::thread> pool;
    const int nthreads = std::min<int>(jobs, static_cast<int>(sorted.size()));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return records;
}

inline void write_sweep_csv(const std::string& path, const std::vector<SweepRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_sweep_csv: cannot open " + path);
  out << "beta,p,c_beta,l2_u,l2_v,classification,converged,iterations,L,n\n";
  for (const auto& r : records) {
    out << format_double(r.beta) << ',' << format_double(r.p) << ',' << format_double(r.c_beta)
        << ',' << format_double(r.l2_u) << ',' << format_double(r.l2_v) << ','
        << r.classification << ',' << (r.converged ? "true" : "false") << ',' << r.iterations
        << ',' << format_double(r.L) << ',' << r.n << "\n";
  }
  if (!out) throw std::runtime_error("write_sweep_csv: write failed for " + path);
}

// -------------------------------------------------- threshold identity check

// At beta* = 2^{p-1} - 1, the diagonal pair (u/sqrt2, u/sqrt2) built from the
// scalar ground state u of the single equation satisfies the coupled system
// exactly: its density u^2/2 + u^2/2 equals the scalar density, so the
// potentials coincide, and the nonlinear terms recombine with combined weight
// (1/2)^{p-1} (1 + beta*) = 1. Numerically this makes the pair's gradient
// equal the scalar gradient divided by sqrt2.
struct ThresholdCheck {
  double beta_star = 0.0;
  double phi_identity_rel = 0.0;       // relative error of phi_pair vs phi_scalar
  double gradient_identity_rel = 0.0;  // relative error of g_pair vs g_scalar/sqrt2
  double residual_pair = 0.0;          // EL residual of the pair under (S_beta*)
  double residual_scalar = 0.0;        // EL residual of the scalar state
  bool scalar_converged = false;
  bool pass = false;
};

inline ThresholdCheck threshold_identity_check(double p, const GridSpec& g,
                                               const SolverOptions& opts,
                                               const KernelTable& kernel) {
  ThresholdCheck out;
  out.beta_star = beta_star(p);

  SolverOptions o = opts;
  o.init_kind = InitKind::gaussian_semitrivial;
  const Solution scalar = minimize(g, 0.0, p, o, kernel);
  out.scalar_converged = scalar.converged;
  const Field& u = scalar.state.u;

  Field us(u);  // u / sqrt2
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (double& x : us.values) x *= inv_sqrt2;
  StatePair pair_state(us, us);
  StatePair scalar_state(u, Field(g));

  const Field phi_pair = log_potential(density_of(pair_state.u, pair_state.v), kernel);
  const Field phi_scalar = log_potential(density_of(scalar_state.u, scalar_state.v), kernel);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < phi_pair.values.size(); ++i) {
    const double d = phi_pair.values[i] - phi_scalar.values[i];
    num += d * d;
    den += phi_scalar.values[i] * phi_scalar.values[i];
  }
  out.phi_identity_rel = std::sqrt(num / (den > 0.0 ? den : 1.0));

  auto [gp_u, gp_v] = gradient_with_phi(pair_state.u, pair_state.v, phi_pair, out.beta_star, p);
  auto [gs_u, gs_v] = gradient_with_phi(scalar_state.u, scalar_state.v, phi_scalar, 0.0, p);
  double dnum = 0.0, dden = 0.0;
  for (size_t i = 0; i < gp_u.values.size(); ++i) {
    const double d = gp_u.values[i] - inv_sqrt2 * gs_u.values[i];
    dnum += d * d;
    dden += gs_u.values[i] * gs_u.values[i];
  }
  out.gradient_identity_rel = std::sqrt(dnum / (dden > 0.0 ? dden : 1.0));

  out.residual_pair = std::sqrt(l2_norm_sq(gp_u)) + std::sqrt(l2_norm_sq(gp_v));
  out.residual_scalar = std::sqrt(l2_norm_sq(gs_u)) + std::sqrt(l2_norm_sq(gs_v));

  // the pair's residual must match the exact-algebra prediction sqrt2 * scalar
  const double predicted = std::sqrt(2.0) * out.residual_scalar;
  const double resid_rel = std::fabs(out.residual_pair - predicted) /
                           (predicted > 0.0 ? predicted : 1.0);
  out.pass = out.scalar_converged && out.phi_identity_rel <= 1e-12 &&
             out.gradient_identity_rel <= 1e-10 && resid_rel <= 1e-3;
  return out;
}

// ----------------------------------------------------------------- h_beta scan

// h_beta(s) = s^p + (1-s)^p + 2 beta s^{p/2} (1-s)^{p/2} on the open interval
// (0,1); below the threshold its interior values stay strictly under 1, and at
// beta = beta* the midpoint value is exactly 1.
inline double h_beta_value(double p, double beta, double s) {
  return std::pow(s, p) + std::pow(1.0 - s, p) + 2.0 * beta * std::pow(s * (1.0 - s), 0.5 * p);
}

inline std::pair<double, double> h_beta_scan(double p, double beta, int samples) {
  check_params(beta, p, "h_beta_scan");
  if (samples < 1000) throw std::invalid_argument("h_beta_scan: need at least 1000 samples");
  double best = -1.0, arg = 0.0;
  for (int k = 1; k <= samples; ++k) {
    const double s = static_cast<double>(k) / (samples + 1);
    const double val = h_beta_value(p, beta, s);
    if (val > best) {
      best = val;
      arg = s;
    }
  }
  return {best, arg};
}

// h(t) = 1 - t^4 + 4 t^4 log t, the fiber-descent gap weight; >= 0 with
// equality only at t = 1.
inline double h_gap(double t) {
  const double t4 = t * t * t * t;
  return 1.0 - t4 + 4.0 * t4 * std::log(t);
}

// -------------------------------------------------- scaling identity suite

struct ScalingReport {
  double max_grad_err = 0.0;  // grad norm vs t^4 law
  double max_l2_err = 0.0;    // L2 norm vs t^2 law
  double max_lp_err = 0.0;    // 2p-norm vs t^{4p-2} law
  double max_V_err = 0.0;     // nonlocal form vs t^4 log(1/t) B + t^4 V law
  double t1_err = 0.0;        // worst identity error at t = 1 (must be ~0)
};

namespace detail {

inline Field random_bump_field(const GridSpec& g, std::mt19937_64& eng, bool signed_amps) {
  Field f(g);
  for (int k = 0; k < 4; ++k) {
    const double cx = 4.0 * u01(eng) - 2.0;
    const double cy = 4.0 * u01(eng) - 2.0;
    double amp = 0.4 + 0.6 * u01(eng);
    if (signed_amps && u01(eng) < 0.5) amp = -amp;
    const double width = 0.7 + 0.7 * u01(eng);
    add_in_place(f, gaussian_bump(g, cx, cy, amp, width));
  }
  return f;
}

}  // namespace detail

inline ScalingReport scaling_identity_suite(const GridSpec& g, uint64_t seed,
                                            const KernelTable& kernel, double p = 2.0) {
  std::mt19937_64 eng(seed);
  const Field u = detail::random_bump_field(g, eng, true);
  const Field v = detail::random_bump_field(g, eng, true);
  const double gu = grad_norm_sq(u) + grad_norm_sq(v);
  const double mu = l2_norm_sq(u) + l2_norm_sq(v);
  const double lp = lp_norm_pow(u, 2.0 * p) + lp_norm_pow(v, 2.0 * p);
  const double V = V_form(u, v, kernel);
  ScalingReport rep;
  for (double t : {0.5, 0.75, 1.0}) {
    const Field wu = rescale(u, t);
    const Field wv = rescale(v, t);
    const double t4 = t * t * t * t;
    const double e_grad = std::fabs((grad_norm_sq(wu) + grad_norm_sq(wv)) - t4 * gu) / (t4 * gu);
    const double e_l2 = std::fabs((l2_norm_sq(wu) + l2_norm_sq(wv)) - t * t * mu) / (t * t * mu);
    const double lp_scale = std::pow(t, 4.0 * p - 2.0) * lp;
    const double e_lp =
        std::fabs((lp_norm_pow(wu, 2.0 * p) + lp_norm_pow(wv, 2.0 * p)) - lp_scale) / lp_scale;
    const double V_pred = -t4 * std::log(t) * mu * mu + t4 * V;
    const double e_V = std::fabs(V_form(wu, wv, kernel) - V_pred) / std::fabs(V);
    if (t == 1.0) {
      rep.t1_err = std::max({e_grad, e_l2, e_lp, e_V});
    } else {
      rep.max_grad_err = std::max(rep.max_grad_err, e_grad);
      rep.max_l2_err = std::max(rep.max_l2_err, e_l2);
      rep.max_lp_err = std::max(rep.max_lp_err, e_lp);
      rep.max_V_err = std::max(rep.max_V_err, e_V);
    }
  }
  return rep;
}

}  // namespace lcgs
