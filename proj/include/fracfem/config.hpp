#pragma once

// Run configuration for the CLI. JSON layout:
//
// {
//   "case": "2b",
//   "orders": {"alpha": 0.5, "lower": [{"order": 0.2, "weight": 1.0}], "horizon": 1.0},
//   "domain": "interval",
//   "ladders": {"resolutions": [8, 16, 32], "steps": [10, 20, 40],
//               "times": [1e-3, 1e-4], "resolution": 64, "aligned": true},
//   "t_eval": [1.0, 0.01],
//   "tolerances": {"rate": 0.15, "reference_modes": 65536},
//   "output_dir": "out"
// }
//
// Everything except "case" and "orders.alpha" is optional.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fracfem/domain.hpp"
#include "fracfem/orders.hpp"

namespace fracfem {

struct RunConfig {
  std::string case_name;
  FracOrders orders{0.5};
  DomainKind domain = DomainKind::Interval;
  /// Cells per side for space ladders.
  std::vector<int> resolutions;
  /// When false, space ladders use n + 1 cells for every n given.
  bool aligned = true;
  /// Step counts K for time ladders (tau = T / K).
  std::vector<int> steps;
  /// Evaluation times for blow-up studies.
  std::vector<double> times;
  /// Fixed mesh for time, blow-up, solve and stability runs.
  int resolution = 64;
  std::vector<double> t_eval;
  double rate_tolerance = 0.15;
  int reference_modes = 0;
  std::filesystem::path output_dir = "fracfem-out";
  /// Canonical JSON (sorted keys, no whitespace) and its FNV-1a hash.
  std::string canonical;
  std::uint64_t hash = 0;
};

/// Throws std::invalid_argument on schema violations, with the offending key.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

}  // namespace fracfem
