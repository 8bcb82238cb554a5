#pragma once
// Structured run configuration: a sectioned key = value text format that
// round-trips losslessly. Runs are archival artifacts, so every field has a
// default, unknown keys are hard errors, and serialization is canonical.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcgs/io.hpp"
#include "lcgs/solver.hpp"

namespace lcgs {

struct RunConfig {
  // [run]
  double beta = 1.0;
  double p = 2.0;
  double L = 8.0;
  int n = 128;
  double lambda = 2.0;  // diagnostic log-weight only; never enters the descent
  std::string output_dir = "out";

  // [solver]
  SolverOptions solver;

  // [sweep]
  std::vector<double> sweep_betas = {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
  int jobs = 1;

  // [verify]
  uint64_t verify_seed = 1;
  std::string verify_suites = "all";  // "all" or a comma list of suite names

  GridSpec grid() const { return make_grid(L, n); }

  bool operator==(const RunConfig& o) const {
    return beta == o.beta && p == o.p && L == o.L && n == o.n && lambda == o.lambda &&
           output_dir == o.output_dir && solver.max_iters == o.solver.max_iters &&
           solver.step0 == o.solver.step0 && solver.backtrack_factor == o.solver.backtrack_factor &&
           solver.armijo_c == o.solver.armijo_c && solver.tol_grad == o.solver.tol_grad &&
           solver.tol_constraint == o.solver.tol_constraint && solver.seed == o.solver.seed &&
           solver.init_kind == o.solver.init_kind && solver.init_file_u == o.solver.init_file_u &&
           solver.init_file_v == o.solver.init_file_v && sweep_betas == o.sweep_betas &&
           jobs == o.jobs && verify_seed == o.verify_seed && verify_suites == o.verify_suites;
  }
  bool operator!=(const RunConfig& o) const { return !(*this == o); }
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline double parse_double_strict(const std::string& s, const std::string& key) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("config: key '" + key + "' has non-numeric value '" + s + "'");
  }
  if (pos != s.size())
    throw std::runtime_error("config: key '" + key + "' has trailing junk in value '" + s + "'");
  return v;
}

inline long long parse_int_strict(const std::string& s, const std::string& key) {
  size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("config: key '" + key + "' has non-integer value '" + s + "'");
  }
  if (pos != s.size())
    throw std::runtime_error("config: key '" + key + "' has trailing junk in value '" + s + "'");
  return v;
}

inline std::vector<double> parse_double_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::runtime_error("config: key '" + key + "' has an empty list item");
    out.push_back(parse_double_strict(item, key));
  }
  return out;
}

inline std::string format_double_list(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config: malformed section header at line " +
                                 std::to_string(lineno));
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "run" && section != "solver" && section != "sweep" && section != "verify")
        throw std::runtime_error("config: unknown section '" + section + "'");
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected key = value at line " + std::to_string(lineno));
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    const std::string qual = section.empty() ? key : section + "." + key;

    if (section == "run") {
      if (key == "beta")
        cfg.beta = detail::parse_double_strict(val, qual);
      else if (key == "p")
        cfg.p = detail::parse_double_strict(val, qual);
      else if (key == "L")
        cfg.L = detail::parse_double_strict(val, qual);
      else if (key == "n")
        cfg.n = static_cast<int>(detail::parse_int_strict(val, qual));
      else if (key == "lambda")
        cfg.lambda = detail::parse_double_strict(val, qual);
      else if (key == "output_dir")
        cfg.output_dir = val;
      else
        throw std::runtime_error("config: unknown key '" + qual + "'");
    } else if (section == "solver") {
      if (key == "max_iters")
        cfg.solver.max_iters = static_cast<int>(detail::parse_int_strict(val, qual));
      else if (key == "step0")
        cfg.solver.step0 = detail::parse_double_strict(val, qual);
      else if (key == "backtrack_factor")
        cfg.solver.backtrack_factor = detail::parse_double_strict(val, qual);
      else if (key == "armijo_c")
        cfg.solver.armijo_c = detail::parse_double_strict(val, qual);
      else if (key == "tol_grad")
        cfg.solver.tol_grad = detail::parse_double_strict(val, qual);
      else if (key == "tol_constraint")
        cfg.solver.tol_constraint = detail::parse_double_strict(val, qual);
      else if (key == "seed")
        cfg.solver.seed = static_cast<uint64_t>(detail::parse_int_strict(val, qual));
      else if (key == "init_kind")
        cfg.solver.init_kind = init_kind_from_string(val);
      else if (key == "init_file_u")
        cfg.solver.init_file_u = val;
      else if (key == "init_file_v")
        cfg.solver.init_file_v = val;
      else
        throw std::runtime_error("config: unknown key '" + qual + "'");
    } else if (section == "sweep") {
      if (key == "betas")
        cfg.sweep_betas = detail::parse_double_list(val, qual);
      else if (key == "jobs")
        cfg.jobs = static_cast<int>(detail::parse_int_strict(val, qual));
      else
        throw std::runtime_error("config: unknown key '" + qual + "'");
    } else if (section == "verify") {
      if (key == "seed")
        cfg.verify_seed = static_cast<uint64_t>(detail::parse_int_strict(val, qual));
      else if (key == "suites")
        cfg.verify_suites = val;
      else
        throw std::runtime_error("config: unknown key '" + qual + "'");
    } else {
      throw std::runtime_error("config: key '" + key + "' appears before any section");
    }
  }
  return cfg;
}

inline std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[run]\n";
  out << "beta = " << format_double(c.beta) << "\n";
  out << "p = " << format_double(c.p) << "\n";
  out << "L = " << format_double(c.L) << "\n";
  out << "n = " << c.n << "\n";
  out << "lambda = " << format_double(c.lambda) << "\n";
  out << "output_dir = " << c.output_dir << "\n";
  out << "\n[solver]\n";
  out << "max_iters = " << c.solver.max_iters << "\n";
  out << "step0 = " << format_double(c.solver.step0) << "\n";
  out << "backtrack_factor = " << format_double(c.solver.backtrack_factor) << "\n";
  out << "armijo_c = " << format_double(c.solver.armijo_c) << "\n";
  out << "tol_grad = " << format_double(c.solver.tol_grad) << "\n";
  out << "tol_constraint = " << format_double(c.solver.tol_constraint) << "\n";
  out << "seed = " << c.solver.seed << "\n";
  out << "init_kind = " << to_string(c.solver.init_kind) << "\n";
  out << "init_file_u = " << c.solver.init_file_u << "\n";
  out << "init_file_v = " << c.solver.init_file_v << "\n";
  out << "\n[sweep]\n";
  out << "betas = " << detail::format_double_list(c.sweep_betas) << "\n";
  out << "jobs = " << c.jobs << "\n";
  out << "\n[verify]\n";
  out << "seed = " << c.verify_seed << "\n";
  out << "suites = " << c.verify_suites << "\n";
  return out.str();
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

inline void save_config(const std::string& path, const RunConfig& c) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("config: cannot write " + path);
  out << serialize_config(c);
  if (!out) throw std::runtime_error("config: write failed for " + path);
}

}  // namespace lcgs
