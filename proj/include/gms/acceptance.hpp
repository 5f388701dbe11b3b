#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace gms {

struct AcceptanceConfig {
  std::uint64_t seed = 20240607;
  /// Sigma registry file loaded before and saved after the witness criterion.
  std::optional<std::filesystem::path> registry;
  /// Run criterion 8 (which reruns 1-7).
  bool determinism = true;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  nlohmann::json data;
  double seconds = 0;
  double limit_seconds = 0;
};

/// One criterion at a time; ids 1-8.
CriterionResult run_criterion(int id, const AcceptanceConfig& cfg);
std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg);

/// Deterministic view (no timings).
nlohmann::json to_json(const CriterionResult& r);
/// "PASS 3 isometry: detail".
std::string summary_line(const CriterionResult& r, bool with_time);

}  // namespace gms
