#include "afdm/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "afdm/detect.hpp"
#include "afdm/error.hpp"
#include "afdm/modem.hpp"

namespace afdm {

using nlohmann::json;

Detector parse_detector(std::string_view tag) {
  if (tag == "ml") return Detector::Ml;
  if (tag == "mmse") return Detector::Mmse;
  throw ConfigError("unknown detector '" + std::string(tag) + "'");
}

std::string_view to_string(Detector d) { return d == Detector::Ml ? "ml" : "mmse"; }

ExperimentConfig::ExperimentConfig() {
  path_layout.entries = {{0, -1.0, std::nullopt}, {1, 1.0, std::nullopt}};
  for (int s = 0; s <= 16; s += 2) snr_db_grid.push_back(s);
}

void ExperimentConfig::validate() const {
  if (n < 2) throw ConfigError("n must be at least 2");
  if (profile.l_max < 0 || profile.alpha_max < 0) throw ConfigError("profile values must be nonnegative");
  if (static_cast<std::size_t>(profile.l_max) >= n) throw ConfigError("profile.l_max must be below n");
  path_layout.validate(profile, n);
  if (snr_db_grid.empty()) throw ConfigError("snr_db_grid must not be empty");
  for (std::size_t k = 0; k < snr_db_grid.size(); ++k) {
    if (!std::isfinite(snr_db_grid[k])) throw ConfigError("snr_db_grid entries must be finite");
    if (k > 0 && !(snr_db_grid[k] > snr_db_grid[k - 1])) {
      throw ConfigError("snr_db_grid must be strictly increasing");
    }
  }
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (min_errors < 1) throw ConfigError("min_errors must be at least 1");
  if (c2 && !std::isfinite(*c2)) throw ConfigError("c2 must be finite");
  if (detector == Detector::Ml) {
    const double hypotheses = std::pow(static_cast<double>(constellation_points(constellation).size()),
                                       static_cast<double>(n));
    if (hypotheses > static_cast<double>(kDefaultMlBudget)) {
      throw ConfigError("ML detection over " + std::to_string(n) + " symbols exceeds the hypothesis budget; use mmse");
    }
  }
}

ModemParams ExperimentConfig::modem_params(Scheme scheme) const {
  const auto layout = path_layout.delay_doppler();
  ModemParams p = scheme_params(scheme, profile, n, constellation, layout);
  if (scheme == Scheme::Afdm && c2) p.c2 = *c2;
  return p;
}

json layout_to_json(const PathLayout& layout) {
  json arr = json::array();
  for (const auto& e : layout.entries) {
    json item = {{"delay", e.delay}, {"doppler", e.doppler}};
    if (e.gain) item["gain"] = json::array({e.gain->real(), e.gain->imag()});
    arr.push_back(item);
  }
  return arr;
}

PathLayout layout_from_json(const json& j) {
  try {
    if (j.is_object()) {
      for (const auto& [key, _] : j.items()) {
        if (key != "delays" && key != "dopplers") throw ConfigError("unknown path_layout key '" + key + "'");
      }
      if (!j.contains("delays") || !j.contains("dopplers")) {
        throw ConfigError("grid path_layout needs both 'delays' and 'dopplers'");
      }
      return PathLayout::grid(j.at("delays").get<std::vector<int>>(), j.at("dopplers").get<std::vector<double>>());
    }
    if (!j.is_array()) throw ConfigError("path_layout must be a list of paths or a {delays, dopplers} grid");
    PathLayout layout;
    for (const auto& item : j) {
      for (const auto& [key, _] : item.items()) {
        if (key != "delay" && key != "doppler" && key != "gain") {
          throw ConfigError("unknown path key '" + key + "'");
        }
      }
      PathLayout::Entry e;
      e.delay = item.at("delay").get<int>();
      e.doppler = item.at("doppler").get<double>();
      if (item.contains("gain")) {
        const auto& g = item.at("gain");
        if (g.is_number()) {
          e.gain = cplx{g.get<double>(), 0.0};
        } else {
          const auto parts = g.get<std::vector<double>>();
          if (parts.size() != 2) throw ConfigError("gain must be a number or [re, im]");
          e.gain = cplx{parts[0], parts[1]};
        }
      }
      layout.entries.push_back(e);
    }
    return layout;
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("invalid path_layout: ") + ex.what());
  }
}

json to_json(const ExperimentConfig& cfg) {
  json schemes = json::array();
  for (auto s : cfg.schemes) schemes.push_back(std::string(to_string(s)));
  return json{
      {"n", cfg.n},
      {"schemes", schemes},
      {"profile", {{"l_max", cfg.profile.l_max}, {"alpha_max", cfg.profile.alpha_max}}},
      {"path_layout", layout_to_json(cfg.path_layout)},
      {"constellation", std::string(to_string(cfg.constellation))},
      {"detector", std::string(to_string(cfg.detector))},
      {"snr_db_grid", cfg.snr_db_grid},
      {"trials", cfg.trials},
      {"seed", cfg.seed},
      {"min_errors", cfg.min_errors},
      {"c2", cfg.c2 ? json(*cfg.c2) : json(nullptr)},
  };
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  try {
    cfg.n = j.at("n").get<std::size_t>();
    cfg.schemes.clear();
    for (const auto& s : j.at("schemes")) cfg.schemes.push_back(parse_scheme(s.get<std::string>()));
    cfg.profile.l_max = j.at("profile").at("l_max").get<int>();
    cfg.profile.alpha_max = j.at("profile").at("alpha_max").get<int>();
    cfg.path_layout = layout_from_json(j.at("path_layout"));
    cfg.constellation = parse_constellation(j.at("constellation").get<std::string>());
    cfg.detector = parse_detector(j.at("detector").get<std::string>());
    cfg.snr_db_grid = j.at("snr_db_grid").get<std::vector<double>>();
    cfg.trials = j.at("trials").get<std::uint64_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.min_errors = j.at("min_errors").get<std::uint64_t>();
    const auto& c2 = j.at("c2");
    cfg.c2 = c2.is_null() ? std::nullopt : std::optional<double>(c2.get<double>());
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("invalid config: ") + ex.what());
  }
  return cfg;
}

namespace {

// Overlays `patch` onto `base`, rejecting keys `base` does not know.
// path_layout is replaced wholesale since its shape varies.
void merge_known(json& base, const json& patch, const std::string& where) {
  if (!patch.is_object()) throw ConfigError("config " + (where.empty() ? "root" : where) + " must be an object");
  for (const auto& [key, value] : patch.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!base.contains(key)) throw ConfigError("unknown config key '" + path + "'");
    if (base[key].is_object() && key != "path_layout") {
      merge_known(base[key], value, path);
    } else {
      base[key] = value;
    }
  }
}

json parse_override_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return json(text);
  }
}

}  // namespace

ExperimentConfig resolve_config(const json& file, const std::vector<std::string>& overrides) {
  json resolved = to_json(ExperimentConfig{});
  if (!file.is_null()) merge_known(resolved, file, "");
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    json* node = &resolved;
    std::stringstream parts(key);
    std::string part;
    std::vector<std::string> segments;
    while (std::getline(parts, part, '.')) segments.push_back(part);
    for (std::size_t k = 0; k < segments.size(); ++k) {
      if (!node->is_object() || !node->contains(segments[k])) {
        throw ConfigError("unknown config key '" + key + "'");
      }
      node = &(*node)[segments[k]];
      if (k + 1 < segments.size() && segments[k] == "path_layout") {
        throw ConfigError("path_layout can only be overridden as a whole");
      }
    }
    *node = parse_override_value(item.substr(eq + 1));
  }
  ExperimentConfig cfg = config_from_json(resolved);
  cfg.validate();
  return cfg;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + ex.what());
  }
}

}  // namespace afdm
