// lcgs — ground-state solver CLI for the planar coupled Hartree system with
// logarithmic interaction.
//
// Commands:
//   solve    minimize the constrained energy for one (beta, p), persist the run
//   sweep    beta sweep with per-point subdirectories and a summary CSV
//   verify   run the registered property suites, one PASS/FAIL line each
//   project  read a state from field files, print t0 and before/after reports
//
// Exit codes: 0 success; 1 run-level failure (not converged, failed suite,
// partial sweep); 2 configuration or I/O errors.

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcgs/lcgs.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void print_report(const lcgs::EnergyReport& r, const std::string& prefix) {
  std::printf("%sI = %s\n", prefix.c_str(), lcgs::format_double(r.I).c_str());
  std::printf("%sJ = %s\n", prefix.c_str(), lcgs::format_double(r.J).c_str());
  std::printf("%sP = %s\n", prefix.c_str(), lcgs::format_double(r.P).c_str());
  std::printf("%spsi = %s\n", prefix.c_str(), lcgs::format_double(r.psi).c_str());
  std::printf("%sV = %s\n", prefix.c_str(), lcgs::format_double(r.V).c_str());
  std::printf("%snehari = %s\n", prefix.c_str(), lcgs::format_double(r.nehari).c_str());
  std::printf("%skinetic = %s\n", prefix.c_str(), lcgs::format_double(r.kinetic).c_str());
  std::printf("%smass_sq_sum = %s\n", prefix.c_str(),
              lcgs::format_double(r.mass_sq_sum).c_str());
  std::printf("%sbeta = %s\n", prefix.c_str(), lcgs::format_double(r.beta).c_str());
  std::printf("%sp = %s\n", prefix.c_str(), lcgs::format_double(r.p).c_str());
}

int cmd_solve(const lcgs::RunConfig& cfg) {
  const auto wall0 = Clock::now();
  std::vector<std::pair<std::string, double>> stages;

  const lcgs::GridSpec grid = cfg.grid();
  auto t0 = Clock::now();
  const lcgs::KernelTable kernel = lcgs::build_kernel(grid);
  stages.emplace_back("kernel", seconds_since(t0));

  t0 = Clock::now();
  const lcgs::Solution sol = lcgs::minimize(grid, cfg.beta, cfg.p, cfg.solver, kernel, cfg.lambda);
  stages.emplace_back("solve", seconds_since(t0));

  t0 = Clock::now();
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  lcgs::write_field((dir / "u.fld").string(), sol.state.u);
  lcgs::write_field((dir / "v.fld").string(), sol.state.v);
  lcgs::write_report((dir / "report.txt").string(), sol.report);
  stages.emplace_back("write", seconds_since(t0));

  std::vector<lcgs::ManifestEntry> files = {lcgs::manifest_entry(dir, "u.fld"),
                                            lcgs::manifest_entry(dir, "v.fld"),
                                            lcgs::manifest_entry(dir, "report.txt")};
  lcgs::write_manifest((dir / "manifest.txt").string(), lcgs::serialize_config(cfg),
                       seconds_since(wall0), stages, files);

  std::printf("solve: beta=%s p=%s n=%d L=%s\n", lcgs::format_double(cfg.beta).c_str(),
              lcgs::format_double(cfg.p).c_str(), grid.n, lcgs::format_double(grid.L).c_str());
  std::printf("  converged      = %s (%d iterations)\n", sol.converged ? "true" : "false",
              sol.iterations);
  std::printf("  classification = %s\n", lcgs::to_string(sol.classification).c_str());
  std::printf("  c_beta         = %s\n", lcgs::format_double(sol.c_beta_estimate).c_str());
  print_report(sol.report, "  report.");
  std::printf("  output         = %s\n", dir.string().c_str());
  if (!sol.converged) {
    std::fprintf(stderr, "lcgs solve: run did not meet convergence gates\n");
    return 1;
  }
  return 0;
}

int cmd_sweep(const lcgs::RunConfig& cfg) {
  if (cfg.sweep_betas.empty()) {
    std::fprintf(stderr, "lcgs sweep: empty beta list in [sweep] betas\n");
    return 2;
  }
  const auto wall0 = Clock::now();
  std::vector<std::pair<std::string, double>> stages;

  const lcgs::GridSpec grid = cfg.grid();
  auto t0 = Clock::now();
  const lcgs::KernelTable kernel = lcgs::build_kernel(grid);
  stages.emplace_back("kernel", seconds_since(t0));

  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);

  // per-point persistence; indices never collide so no write is shared
  std::vector<double> sorted = cfg.sweep_betas;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::string> subdirs(sorted.size());
  auto sink = [&](size_t i, const lcgs::SweepPoint& pt) {
    const fs::path sub = dir / ("beta_" + lcgs::format_double(pt.record.beta));
    fs::create_directories(sub);
    subdirs[i] = sub.filename().string();
    if (pt.has_solution) {
      lcgs::write_field((sub / "u.fld").string(), pt.solution.state.u);
      lcgs::write_field((sub / "v.fld").string(), pt.solution.state.v);
      lcgs::write_report((sub / "report.txt").string(), pt.solution.report);
    }
    std::printf("  beta=%-8s %-12s converged=%-5s iters=%-6d c_beta=%s\n",
                lcgs::format_double(pt.record.beta).c_str(), pt.record.classification.c_str(),
                pt.record.converged ? "true" : "false", pt.record.iterations,
                lcgs::format_double(pt.record.c_beta).c_str());
  };

  t0 = Clock::now();
  const std::vector<lcgs::SweepRecord> records =
      lcgs::beta_sweep(cfg.p, cfg.sweep_betas, grid, cfg.solver, kernel, cfg.jobs, sink);
  stages.emplace_back("sweep", seconds_since(t0));

  t0 = Clock::now();
  lcgs::write_sweep_csv((dir / "sweep.csv").string(), records);
  std::vector<lcgs::ManifestEntry> files = {lcgs::manifest_entry(dir, "sweep.csv")};
  for (const std::string& sub : subdirs) {
    for (const char* name : {"u.fld", "v.fld", "report.txt"}) {
      if (fs::exists(dir / sub / name))
        files.push_back(lcgs::manifest_entry(dir, sub + "/" + name));
    }
  }
  stages.emplace_back("write", seconds_since(t0));
  lcgs::write_manifest((dir / "manifest.txt").string(), lcgs::serialize_config(cfg),
                       seconds_since(wall0), stages, files);

  int unconverged = 0;
  for (const auto& r : records)
    if (!r.converged) ++unconverged;
  std::printf("sweep: %zu points, %d unconverged, csv=%s\n", records.size(), unconverged,
              (dir / "sweep.csv").string().c_str());
  return unconverged == 0 ? 0 : 1;
}

int cmd_verify(const lcgs::RunConfig& cfg) {
  const std::vector<lcgs::SuiteResult> results = lcgs::run_verify_suites(cfg);
  bool all = true;
  for (const auto& r : results) {
    std::printf("%s %s — %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

int cmd_project(const lcgs::RunConfig& cfg) {
  if (cfg.solver.init_file_u.empty()) {
    std::fprintf(stderr, "lcgs project: [solver] init_file_u must name a field file\n");
    return 2;
  }
  lcgs::Field u = lcgs::read_field(cfg.solver.init_file_u);
  lcgs::Field v = cfg.solver.init_file_v.empty()
                      ? lcgs::Field(u.spec)
                      : lcgs::read_field(cfg.solver.init_file_v);
  const lcgs::KernelTable kernel = lcgs::build_kernel(u.spec);
  lcgs::StatePair s = lcgs::make_state(std::move(u), std::move(v), cfg.p, cfg.lambda);

  const lcgs::EnergyReport before = lcgs::energy_report(s, cfg.beta, cfg.p, kernel);
  auto [t0, projected] = lcgs::project(s, cfg.beta, cfg.p, kernel);
  const lcgs::EnergyReport after = lcgs::energy_report(projected, cfg.beta, cfg.p, kernel);

  std::printf("t0 = %s\n", lcgs::format_double(t0).c_str());
  print_report(before, "before.");
  print_report(after, "after.");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lcgs: ground states of the planar coupled Hartree system with log kernel"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  int jobs_override = 0;
  long long seed_override = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file (sectioned key = value)");
    sub->add_option("--output", output_override, "override [run] output_dir");
    sub->add_option("--jobs", jobs_override, "override [sweep] jobs");
    sub->add_option("--seed", seed_override, "override [solver] seed and [verify] seed");
  };
  CLI::App* solve = app.add_subcommand("solve", "minimize for one (beta, p)");
  CLI::App* sweep = app.add_subcommand("sweep", "run a beta sweep");
  CLI::App* verify = app.add_subcommand("verify", "run property suites");
  CLI::App* project = app.add_subcommand("project", "project a stored state onto the manifold");
  for (CLI::App* sub : {solve, sweep, verify, project}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    lcgs::RunConfig cfg;
    if (!config_path.empty()) cfg = lcgs::load_config(config_path);
    if (!output_override.empty()) cfg.output_dir = output_override;
    if (jobs_override > 0) cfg.jobs = jobs_override;
    if (seed_override >= 0) {
      cfg.solver.seed = static_cast<uint64_t>(seed_override);
      cfg.verify_seed = static_cast<uint64_t>(seed_override);
    }
    cfg.solver.validate();

    if (solve->parsed()) return cmd_solve(cfg);
    if (sweep->parsed()) return cmd_sweep(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (project->parsed()) return cmd_project(cfg);
    std::fprintf(stderr, "lcgs: no command selected\n");
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lcgs: %s\n", e.what());
    return 2;
  }
}
