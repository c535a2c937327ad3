#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "afdm/channel.hpp"
#include "afdm/params.hpp"

namespace afdm {

enum class Detector { Ml, Mmse };

Detector parse_detector(std::string_view tag);
std::string_view to_string(Detector d);

/// One BER experiment. Key names in JSON match the field names.
struct ExperimentConfig {
  std::size_t n = 8;
  std::vector<Scheme> schemes{Scheme::Afdm};
  ChannelProfile profile{1, 1};
  PathLayout path_layout;
  Constellation constellation = Constellation::Bpsk;
  Detector detector = Detector::Ml;
  std::vector<double> snr_db_grid;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  std::uint64_t min_errors = 200;
  /// Replaces the AFDM c2 when set.
  std::optional<double> c2;

  ExperimentConfig();

  /// Throws ConfigError on any inconsistency.
  void validate() const;

  /// Scheme presets for this experiment, with the c2 override applied to AFDM.
  ModemParams modem_params(Scheme scheme) const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Defaults, then `file` (may be null), then dotted `key=value` overrides.
/// Unknown keys at any level are rejected.
ExperimentConfig resolve_config(const nlohmann::json& file, const std::vector<std::string>& overrides);

/// Parses the file at `path` as JSON; ConfigError on I/O or syntax problems.
nlohmann::json load_json_file(const std::string& path);

nlohmann::json layout_to_json(const PathLayout& layout);
PathLayout layout_from_json(const nlohmann::json& j);

}  // namespace afdm
