// Acceptance gate: one PASS/FAIL line per criterion, exit code = number of
// failures. Each criterion is independent and prints its measured margins so
// a failure is diagnosable from the log alone.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "lcgs/lcgs.hpp"

using namespace lcgs;

namespace {

int failures = 0;

void report(int k, bool pass, const std::string& what, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", k, what.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, ...) {
  va_list ap;
  va_start(ap, f);
  char buf[512];
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ------------------------------------------------------------- criterion 1

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const GridSpec g = make_grid(8.0, 128);
  const KernelTable kernel = build_kernel(g);
  std::mt19937_64 eng(2024);
  const double ps[] = {2.0, 2.5, 3.0};
  const double betas[] = {0.0, 1.0, 3.0};
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const double p = ps[rep % 3];
    const double beta = betas[(rep / 3) % 3];
    const Field u = detail::random_bump_field(g, eng, true);
    const Field v = detail::random_bump_field(g, eng, true);
    const EnergyReport r = energy_report(make_state(u, v, p, 2.0), beta, p, kernel);
    worst = std::max(worst, std::fabs(r.J - (2.0 * r.nehari - r.P)) / r.scale());
  }
  report(1, worst <= 1e-10, "constraint identity J = 2 I'(u,v)(u,v) - P on 100 states",
         fmt("worst rel err %.2e (tol 1e-10), %.1f s", worst, seconds_since(t0)));
}

// ------------------------------------------------------------- criterion 2

void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const GridSpec g256 = make_grid(12.0, 256);
  const GridSpec g512 = make_grid(12.0, 512);
  const ScalingReport a = scaling_identity_suite(g256, 41, build_kernel(g256));
  const ScalingReport b = scaling_identity_suite(g512, 41, build_kernel(g512));
  const double wa = std::max(std::max(a.max_grad_err, a.max_l2_err),
                             std::max(a.max_lp_err, a.max_V_err));
  const double wb = std::max(std::max(b.max_grad_err, b.max_l2_err),
                             std::max(b.max_lp_err, b.max_V_err));
  const bool pass = wa <= 5e-3 && wb <= 0.5 * wa && a.t1_err <= 1e-12 && b.t1_err <= 1e-12;
  report(2, pass, "dilation scaling laws at t in {0.5, 0.75}, exact at t = 1",
         fmt("worst n256 %.2e (tol 5e-3), n512 %.2e (need <= x0.5), t1 %.1e/%.1e, %.1f s", wa,
             wb, a.t1_err, b.t1_err, seconds_since(t0)));
}

// ------------------------------------------------------------- criterion 3

void criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 eng(7);
  auto u01 = [&eng]() { return (eng() >> 11) * 0x1.0p-53; };
  double worst_res = 0.0;
  bool monotone = true, sign_rule = true;
  for (int rep = 0; rep < 100; ++rep) {
    const double A = 0.1 + 10.0 * u01();
    const double B = 0.1 + 10.0 * u01();
    const double C = (u01() < 0.5 ? -1.0 : 1.0) * (0.05 + 5.0 * u01());
    const double D = 0.1 + 10.0 * u01();
    const double p = 2.0 + 2.0 * u01();
    const FiberCoefficients c = make_coeffs(A, B, C, D, 0.0, p);
    const double t0c = project_t0(c);
    const double scale = std::max(A, D) * std::max(1.0, std::pow(t0c, 4.0 * p - 3.0));
    worst_res = std::max(worst_res, std::fabs(fiber_derivative(c, t0c)) / scale);
    double prev = fiber_g(c, 1e-3);
    for (int k = 1; k < 64; ++k) {
      const double t = 1e-3 * std::pow(1e6, k / 63.0);
      const double cur = fiber_g(c, t);
      if (cur >= prev) monotone = false;
      prev = cur;
    }
    if (fiber_derivative(c, 1.0) <= 0.0 && t0c > 1.0 + 1e-9) sign_rule = false;
  }
  const bool pass = worst_res <= 1e-12 && monotone && sign_rule;
  report(3, pass, "fiber projection: root residual, monotone g, contraction rule",
         fmt("worst |f'(t0)| %.2e (tol 1e-12), monotone %d, sign rule %d, %.1f s", worst_res,
             monotone, sign_rule, seconds_since(t0)));
}

// ------------------------------------------------------------- criterion 4

void criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  bool nonneg = true, tail = true;
  for (int k = 0; k <= 10000; ++k) {
    const double t = 1e-2 * std::pow(1e4, k / 10000.0);
    const double h = h_gap(t);
    if (h < -1e-15) nonneg = false;
    if (std::fabs(t - 1.0) > 1e-2 && h <= 1e-8) tail = false;
  }
  auto [below_max, below_arg] = h_beta_scan(2.0, 0.5, 10000);
  (void)below_arg;
  const double at_half = h_beta_value(2.0, 1.0, 0.5);
  const bool pass = nonneg && tail && below_max < 1.0 && std::fabs(at_half - 1.0) <= 1e-14;
  report(4, pass, "h and h_beta lemmas",
         fmt("h >= 0 %d, positive away from 1 %d, max h_{0.5} %.6f < 1, |h_{beta*}(1/2)-1| %.1e, "
             "%.1f s",
             nonneg, tail, below_max, std::fabs(at_half - 1.0), seconds_since(t0)));
}

// ------------------------------------------------------------- criterion 5

void criterion_5() {
  const auto t0 = std::chrono::steady_clock::now();
  const GridSpec g = make_grid(8.0, 128);
  const KernelTable kernel = build_kernel(g);
  std::mt19937_64 eng(31);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const double p = (rep % 2 == 0) ? 2.0 : 3.0;
    const double beta = (rep % 3) * 1.0;
    Field u = detail::random_bump_field(g, eng, false);
    Field v = detail::random_bump_field(g, eng, false);
    for (double& x : u.values) x = std::max(x, 0.0);
    for (double& x : v.values) x = std::max(x, 0.0);
    const StatePair s = make_state(std::move(u), std::move(v), p, 2.0);
    auto [gu, gv] = gradient(s, beta, p, kernel);

    Field wu = detail::random_bump_field(g, eng, true);
    Field wv = detail::random_bump_field(g, eng, true);
    const double nrm = std::sqrt(l2_norm_sq(wu) + l2_norm_sq(wv));
    for (double& x : wu.values) x /= nrm;
    for (double& x : wv.values) x /= nrm;
    const double pairing = inner(gu, wu) + inner(gv, wv);

    const double eps = 1e-4;
    auto at = [&](double sgn) {
      Field a = s.u, b = s.v;
      for (size_t i = 0; i < a.values.size(); ++i) {
        a.values[i] += sgn * eps * wu.values[i];
        b.values[i] += sgn * eps * wv.values[i];
      }
      return energy_report(make_state(std::move(a), std::move(b), p, 2.0), beta, p, kernel).I;
    };
    const double fd = (at(1.0) - at(-1.0)) / (2.0 * eps);
    worst = std::max(worst, std::fabs(pairing - fd) / std::max(1.0, std::fabs(fd)));
  }
  report(5, worst <= 1e-5, "analytic gradient vs directional finite differences (20 pairs)",
         fmt("worst rel err %.2e (tol 1e-5), %.1f s", worst, seconds_since(t0)));
}

// ------------------------------------------------------------- criterion 6

void criterion_6() {
  const auto t0 = std::chrono::steady_clock::now();
  // part 1: V_form against the O(n^4) double sum at n = 64
  const GridSpec g = make_grid(6.0, 64);
  const KernelTable kernel = build_kernel(g);
  std::mt19937_64 eng(13);
  double worst = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    Field u = detail::random_bump_field(g, eng, false);
    Field v = detail::random_bump_field(g, eng, false);
    const Field rho = density_of(u, v);
    double direct = 0.0;
    for (int iy = 0; iy < g.n; ++iy)
      for (int ix = 0; ix < g.n; ++ix) {
        double acc = 0.0;
        for (int jy = 0; jy < g.n; ++jy)
          for (int jx = 0; jx < g.n; ++jx)
            acc += kernel.at_displacement(ix - jx, iy - jy) * rho.at(jx, jy);
        direct += acc * rho.at(ix, iy);
      }
    direct *= g.h * g.h * g.h * g.h;
    const double fftv = V_form(u, v, kernel);
    worst = std::max(worst, std::fabs(fftv - direct) / std::fabs(direct));
  }

  // part 2: far field of the unit disk at n = 512 (mean value property)
  const GridSpec gd = make_grid(8.0, 512);
  const KernelTable kd = build_kernel(gd);
  Field rho(gd);
  for (int iy = 0; iy < gd.n; ++iy)
    for (int ix = 0; ix < gd.n; ++ix) {
      int in = 0;
      for (int sy = 0; sy < 4; ++sy)
        for (int sx = 0; sx < 4; ++sx) {
          const double x = node_coord(gd, ix) + (sx - 1.5) * gd.h / 4.0;
          const double y = node_coord(gd, iy) + (sy - 1.5) * gd.h / 4.0;
          if (x * x + y * y < 1.0) ++in;
        }
      rho.at(ix, iy) = in / 16.0;
    }
  const Field phi = convolve(rho, kd);
  double far_worst = 0.0;
  for (double r : {3.0, 4.0, 5.0, 6.0}) {
    int ix = 0;
    double best = 1e9;
    for (int i = 0; i < gd.n; ++i)
      if (std::fabs(node_coord(gd, i) - r) < best) {
        best = std::fabs(node_coord(gd, i) - r);
        ix = i;
      }
    const int iy0 = gd.n / 2;
    const double x = node_coord(gd, ix), y = node_coord(gd, iy0);
    const double expect = M_PI * 0.5 * std::log(x * x + y * y);
    far_worst = std::max(far_worst, std::fabs(phi.at(ix, iy0) - expect) / std::fabs(expect));
  }
  const bool pass = worst <= 1e-6 && far_worst <= 1e-3;
  report(6, pass, "convolution against direct sum and disk far field",
         fmt("direct-sum worst %.2e (tol 1e-6), far-field worst %.2e (tol 1e-3), %.1f s", worst,
             far_worst, seconds_since(t0)));
}

// ------------------------------------------------------------- criterion 7

void criterion_7() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Run {
    double beta;
    InitKind init;
    double I = 0.0;
    bool converged = false;
    double J_rel = 0.0, P_rel = 0.0;
  };
  Run runs[2] = {{0.0, InitKind::gaussian_semitrivial, 0.0, false, 0.0, 0.0},
                 {2.0, InitKind::symmetric, 0.0, false, 0.0, 0.0}};
  bool diag_ok = true;
  for (Run& r : runs) {
    const GridSpec g = make_grid(8.0, 128);
    const KernelTable kernel = build_kernel(g);
    SolverOptions opts;
    opts.init_kind = r.init;
    const Solution sol = minimize(g, r.beta, 2.0, opts, kernel);
    r.I = sol.c_beta_estimate;
    r.converged = sol.converged;
    r.J_rel = std::fabs(sol.report.J) / sol.report.scale();
    r.P_rel = std::fabs(sol.report.P) / sol.report.scale();
    if (!(r.converged && r.J_rel <= 1e-3 && r.P_rel <= 1e-3)) diag_ok = false;
  }
  // refinement stability: same physics at (n, L) = (256, 12)
  double shift = 0.0;
  for (Run& r : runs) {
    const GridSpec g = make_grid(12.0, 256);
    const KernelTable kernel = build_kernel(g);
    SolverOptions opts;
    opts.init_kind = r.init;
    const Solution sol = minimize(g, r.beta, 2.0, opts, kernel);
    shift = std::max(shift, std::fabs(sol.c_beta_estimate / r.I - 1.0));
  }
  const bool pass = diag_ok && shift < 0.02;
  report(7, pass, "ground-state diagnostics at (2,0) and (2,2) plus refinement stability",
         fmt("I0 %.7f (J %.1e, P %.1e), I2 %.7f (J %.1e, P %.1e), shift %.3f%% (tol 2%%), %.0f s",
             runs[0].I, runs[0].J_rel, runs[0].P_rel, runs[1].I, runs[1].J_rel, runs[1].P_rel,
             100.0 * shift, seconds_since(t0)));
}

// ------------------------------------------------------------- criterion 8

void criterion_8() {
  const auto t0 = std::chrono::steady_clock::now();
  const GridSpec g = make_grid(8.0, 128);
  const KernelTable kernel = build_kernel(g);
  SolverOptions opts;
  std::vector<double> betas;
  for (int k = 0; k <= 8; ++k) betas.push_back(0.25 * k);
  const std::vector<SweepRecord> recs = beta_sweep(2.0, betas, g, opts, kernel, 3);

  bool all_converged = true, sides = true;
  int crossings = 0;
  double cross_lo = -1.0, cross_hi = -1.0;
  for (size_t i = 0; i < recs.size(); ++i) {
    if (!recs[i].converged) all_converged = false;
    if (recs[i].beta <= 0.75 && recs[i].classification != "Semitrivial") sides = false;
    if (recs[i].beta >= 1.25 && recs[i].classification != "Vectorial") sides = false;
    if (i > 0 && recs[i].classification != recs[i - 1].classification) {
      ++crossings;
      cross_lo = recs[i - 1].beta;
      cross_hi = recs[i].beta;
    }
  }
  const bool bracket = crossings == 1 && cross_lo < 1.0 + 1e-12 && cross_hi > 1.0 - 1e-12;
  const bool pass = all_converged && sides && bracket;
  report(8, pass, "semitrivial/vectorial threshold in the beta sweep",
         fmt("converged %d, sides %d, crossings %d in [%.2f, %.2f] (beta* = 1), %.0f s",
             all_converged, sides, crossings, cross_lo, cross_hi, seconds_since(t0)));
}

// ------------------------------------------------------------- criterion 9

void criterion_9() {
  const auto t0 = std::chrono::steady_clock::now();
  const GridSpec g = make_grid(8.0, 128);
  const KernelTable kernel = build_kernel(g);
  // the decaying family is the vectorial branch: at beta = beta* = 1 the
  // ground state is degenerate (any (a u, b u), a^2 + b^2 = 1, ties) and only
  // the vectorial member continues the branch that exists for all beta > 1,
  // so each point solves from the symmetric initialization
  SolverOptions opts;
  opts.init_kind = InitKind::symmetric;
  double prev = -1.0;
  bool all_converged = true, all_vectorial = true, decreasing = true;
  std::string detail;
  for (double beta : {1.0, 4.0, 16.0, 64.0}) {
    const Solution sol = minimize(g, beta, 2.0, opts, kernel);
    if (!sol.converged) all_converged = false;
    if (sol.classification == Classification::Semitrivial) all_vectorial = false;
    const double mass = std::sqrt(l2_norm_sq(sol.state.u)) + std::sqrt(l2_norm_sq(sol.state.v));
    if (prev >= 0.0 && mass >= prev) decreasing = false;
    prev = mass;
    detail += fmt("%sb%g: %.4f", detail.empty() ? "" : ", ", beta, mass);
  }
  const bool pass = all_converged && all_vectorial && decreasing;
  report(9, pass, "vanishing-mass trend along the vectorial branch",
         fmt("%s, converged %d, vectorial %d, strictly decreasing %d, %.0f s", detail.c_str(),
             all_converged, all_vectorial, decreasing, seconds_since(t0)));
}

// ------------------------------------------------------------ criterion 10

void criterion_10() {
  const auto t0 = std::chrono::steady_clock::now();
  const GridSpec g = make_grid(8.0, 128);
  const KernelTable kernel = build_kernel(g);
  SolverOptions opts;
  const ThresholdCheck tc = threshold_identity_check(2.0, g, opts, kernel);
  report(10, tc.pass, "threshold equivalence through the rescaled scalar state",
         fmt("phi identity %.1e (tol 1e-12), residual pair %.2e vs scalar %.2e, %.0f s",
             tc.phi_identity_rel, tc.residual_pair, tc.residual_scalar, seconds_since(t0)));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%d of 10 criteria passed in %.0f s\n", 10 - failures, seconds_since(t0));
  return failures;
}
