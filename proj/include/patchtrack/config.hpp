#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "patchtrack/tracker.hpp"

namespace patchtrack {

/// Flat key=value run configuration. Lines are `key = value`; '#' starts a
/// comment; blank lines are ignored. Unknown keys and malformed values are
/// ParseErrors carrying the 1-based line number.
struct RunConfig {
  TrackerConfig tracker;
  TrackerKind kind = TrackerKind::Proposed;
};

struct ConfigKey {
  std::string name;
  std::string help;
};

/// Every accepted key, in documentation order.
const std::vector<ConfigKey>& config_keys();

RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Writes every key with its current value; parse_run_config reads it back.
std::string format_run_config(const RunConfig& cfg);

}  // namespace patchtrack
