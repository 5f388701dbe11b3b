#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gms/kset.hpp"
#include "gms/schedule.hpp"
#include "gms/special.hpp"

namespace gms::cli {

enum class Format { text, json };

struct RunConfig {
  ScheduleMode mode = ScheduleMode::compact;
  /// Empty tables select the default compact schedule.
  std::vector<Integer> m_table;
  std::vector<Integer> n_table;
  ExtensionLaw law = ExtensionLaw::quadratic;
  KCaps caps{2, 8, 3, 2, {2}, 2'000'000};
  /// Depth cap of norm brackets.
  int depth = 6;
  /// S-stability range of exact pairs.
  int k_cap = 3;
  /// j-special models registered before K is generated.
  std::vector<JSpecialSpec> models{JSpecialSpec{1, 1, 2, 1, 1}};
  std::optional<std::filesystem::path> registry;
  std::uint64_t seed = 20240607;
  Format format = Format::text;

  ParameterSchedule schedule() const;
};

/// "key = value" lines; '#' starts a comment. Keys: mode, m, n, law, gen-cap,
/// window, supp-cap, arity-cap, weights, depth, k-cap, special, registry, seed,
/// format. `special` is "none" or ';'-separated "j,d,seed,start,width" entries.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
void apply_config_text(RunConfig& cfg, const std::string& text);
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

std::string describe(const RunConfig& cfg);

}  // namespace gms::cli
