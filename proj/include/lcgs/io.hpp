#pragma once
// Persistence primitives: the field binary format, flat key-value report
// records, and checksummed run manifests.
//
// Field binary format (little-endian throughout):
//   bytes 0-3   magic "LCGS"
//   bytes 4-5   format version, u16 (currently 1)
//   bytes 6-9   n, u32
//   bytes 10-17 L, f64
//   then n*n f64 values, row-major
// Write-then-read reproduces the array bit-exactly.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcgs/functionals.hpp"

namespace lcgs {

static_assert(std::endian::native == std::endian::little,
              "field file I/O assumes a little-endian host");

inline constexpr uint16_t kFieldFormatVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

inline void write_field(const std::string& path, const Field& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_field: cannot open " + path);
  const uint16_t version = kFieldFormatVersion;
  const uint32_t n = static_cast<uint32_t>(f.spec.n);
  const double L = f.spec.L;
  out.write("LCGS", 4);
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&L), sizeof L);
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write_field: write failed for " + path);
}

inline Field read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_field: cannot open " + path);
  char magic[4] = {};
  uint16_t version = 0;
  uint32_t n = 0;
  double L = 0.0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&L), sizeof L);
  if (!in || std::memcmp(magic, "LCGS", 4) != 0)
    throw std::runtime_error("read_field: bad magic in " + path);
  if (version != kFieldFormatVersion)
    throw std::runtime_error("read_field: unsupported format version in " + path);
  GridSpec spec = make_grid(L, static_cast<int>(n));
  std::vector<double> values(static_cast<size_t>(n) * n);
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!in) throw std::runtime_error("read_field: truncated payload in " + path);
  return Field(spec, std::move(values));
}

// ----------------------------------------------------------- report records

// Full-precision, round-trippable decimal formatting.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_report(const std::string& path, const EnergyReport& r) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report: cannot open " + path);
  out << "I = " << format_double(r.I) << "\n"
      << "J = " << format_double(r.J) << "\n"
      << "P = " << format_double(r.P) << "\n"
      << "psi = " << format_double(r.psi) << "\n"
      << "V = " << format_double(r.V) << "\n"
      << "nehari = " << format_double(r.nehari) << "\n"
      << "kinetic = " << format_double(r.kinetic) << "\n"
      << "mass_sq_sum = " << format_double(r.mass_sq_sum) << "\n"
      << "beta = " << format_double(r.beta) << "\n"
      << "p = " << format_double(r.p) << "\n";
  if (!out) throw std::runtime_error("write_report: write failed for " + path);
}

inline EnergyReport read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_report: cannot open " + path);
  std::map<std::string, double> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("read_report: malformed line: " + line);
    std::string key = line.substr(0, eq);
    key.erase(key.find_last_not_of(' ') + 1);
    kv[key] = std::stod(line.substr(eq + 1));
  }
  auto need = [&](const std::string& k) {
    auto it = kv.find(k);
    if (it == kv.end()) throw std::runtime_error("read_report: missing key " + k);
    return it->second;
  };
  EnergyReport r;
  r.I = need("I");
  r.J = need("J");
  r.P = need("P");
  r.psi = need("psi");
  r.V = need("V");
  r.nehari = need("nehari");
  r.kinetic = need("kinetic");
  r.mass_sq_sum = need("mass_sq_sum");
  r.beta = need("beta");
  r.p = need("p");
  return r;
}

// -------------------------------------------------------------- manifests

inline std::string fnv1a64_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checksum: cannot open " + path);
  uint64_t hash = 1469598103934665603ull;
  char buf[65536];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ull;
    }
    if (got < static_cast<std::streamsize>(sizeof buf)) break;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(hash));
  return out;
}

struct ManifestEntry {
  std::string name;      // path relative to the run directory
  uint64_t bytes = 0;
  std::string checksum;  // fnv1a-64 hex
};

// Manifest: config echo, tool version, timings, and the inventory of every
// file the run wrote.
inline void write_manifest(const std::string& path, const std::string& config_echo,
                           double wall_seconds,
                           const std::vector<std::pair<std::string, double>>& stage_seconds,
                           const std::vector<ManifestEntry>& files) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_manifest: cannot open " + path);
  out << "tool_version = " << kToolVersion << "\n";
  out << "wall_seconds = " << format_double(wall_seconds) << "\n";
  for (const auto& [stage, secs] : stage_seconds)
    out << "stage_seconds." << stage << " = " << format_double(secs) << "\n";
  out << "\n[files]\n";
  for (const auto& e : files)
    out << e.name << " = " << e.bytes << " bytes, fnv1a64 " << e.checksum << "\n";
  out << "\n[config]\n" << config_echo;
  if (!out) throw std::runtime_error("write_manifest: write failed for " + path);
}

inline ManifestEntry manifest_entry(const std::filesystem::path& dir, const std::string& name) {
  const std::string full = (dir / name).string();
  ManifestEntry e;
  e.name = name;
  e.bytes = static_cast<uint64_t>(std::filesystem::file_size(full));
  e.checksum = fnv1a64_hex(full);
  return e;
}

}  // namespace lcgs
