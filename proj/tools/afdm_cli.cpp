// afdm-sim command-line front end.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "afdm/config.hpp"
#include "afdm/diversity.hpp"
#include "afdm/effchan.hpp"
#include "afdm/error.hpp"
#include "afdm/harness.hpp"
#include "afdm/params.hpp"
#include "afdm/selftest.hpp"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct ConfigArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_path;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "JSON experiment config");
  cmd->add_option("-s,--set", args.overrides, "Override a config key, e.g. profile.alpha_max=3")->take_all();
  cmd->add_option("-o,--output", args.output_path, "Write output here instead of stdout");
}

afdm::ExperimentConfig load_config(const ConfigArgs& args) {
  const json file = args.config_path.empty() ? json() : afdm::load_json_file(args.config_path);
  return afdm::resolve_config(file, args.overrides);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw afdm::ConfigError("cannot write '" + path + "'");
  out << text;
}

afdm::Scheme pick_scheme(const afdm::ExperimentConfig& cfg, const std::string& tag) {
  if (!tag.empty()) return afdm::parse_scheme(tag);
  if (cfg.schemes.empty()) throw afdm::ConfigError("no scheme given and the config lists none");
  return cfg.schemes.front();
}

// Realization of the layout with its fixed gains, unit gain elsewhere.
afdm::ChannelRealization layout_channel(const afdm::ExperimentConfig& cfg) {
  std::vector<afdm::ChannelPath> paths;
  for (const auto& e : cfg.path_layout.entries) paths.push_back({e.gain.value_or(afdm::cplx{1.0, 0.0}), e.doppler, e.delay});
  if (paths.empty()) throw afdm::ConfigError("path_layout is empty");
  return afdm::ChannelRealization(paths, cfg.n);
}

json complex_json(afdm::cplx v) { return json::array({v.real(), v.imag()}); }

json params_json(const afdm::ModemParams& p) {
  return {{"scheme", p.scheme_label}, {"n", p.n}, {"c1", p.c1}, {"c2", p.c2}, {"cpp_len", p.cpp_len}};
}

int run_selftest(const std::string& filter, const std::string& fault) {
  afdm::SelftestOptions options;
  options.filter = filter;
  if (!fault.empty()) {
    if (fault != "dft-sign") throw afdm::ConfigError("unknown fault '" + fault + "'");
    options.flip_dft_sign = true;
  }
  const auto results = afdm::run_selftest(options);
  if (results.empty()) throw afdm::ConfigError("no self-test suite matches '" + filter + "'");
  bool ok = true;
  std::cout << afdm::version_string() << "\n";
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  " << r.detail << "\n";
    ok = ok && r.passed;
  }
  std::cout << (ok ? "all suites passed" : "self-test FAILED") << "\n";
  return ok ? 0 : 1;
}

int run_heff_inspect(const ConfigArgs& args, const std::string& scheme_tag, bool dump) {
  const auto cfg = load_config(args);
  const auto scheme = pick_scheme(cfg, scheme_tag);
  const auto p = cfg.modem_params(scheme);
  const auto ch = layout_channel(cfg);
  const auto e = afdm::build_heff_matrix(ch, p);

  json paths = json::array();
  for (const auto& pl : e.per_path) {
    json item = {{"delay", pl.path.delay}, {"doppler", pl.path.doppler}, {"gain", complex_json(pl.path.gain)}};
    item["loc"] = pl.loc ? json(*pl.loc) : json(nullptr);
    item["row0_position"] = pl.position_row0 ? json(*pl.position_row0) : json(nullptr);
    paths.push_back(item);
  }

  const double peak = e.h_eff.cwiseAbs().maxCoeff();
  json mask = json::array();
  std::size_t min_per_row = p.n, max_per_row = 0;
  for (Eigen::Index r = 0; r < e.h_eff.rows(); ++r) {
    std::string row;
    std::size_t count = 0;
    for (Eigen::Index c = 0; c < e.h_eff.cols(); ++c) {
      const bool on = std::abs(e.h_eff(r, c)) > 1e-9 * peak;
      row.push_back(on ? 'X' : '.');
      count += on;
    }
    min_per_row = std::min(min_per_row, count);
    max_per_row = std::max(max_per_row, count);
    mask.push_back(row);
  }

  json out = {{"version", afdm::version_string()},
              {"config", afdm::to_json(cfg)},
              {"params", params_json(p)},
              {"paths", paths},
              {"nonzeros_per_row", {{"min", min_per_row}, {"max", max_per_row}}},
              {"support_mask", mask}};
  if (e.per_path.size() == 2 && e.per_path[0].loc && e.per_path[1].loc) {
    out["loc_distance"] = std::llabs(*e.per_path[1].loc - *e.per_path[0].loc);
  }
  if (dump) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < e.h_eff.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < e.h_eff.cols(); ++c) row.push_back(complex_json(e.h_eff(r, c)));
      rows.push_back(row);
    }
    out["h_eff"] = rows;
  }
  emit(out.dump(2) + "\n", args.output_path);
  return 0;
}

int run_rank_analysis(const ConfigArgs& args, const std::string& scheme_tag, unsigned workers,
                      std::optional<std::uint64_t> samples) {
  const auto cfg = load_config(args);
  const auto scheme = pick_scheme(cfg, scheme_tag);
  const auto p = cfg.modem_params(scheme);
  afdm::SweepOptions options;
  options.workers = workers;
  options.seed = cfg.seed;
  if (samples) {
    options.sample_when_over_budget = true;
    options.samples = *samples;
  }
  const auto report = afdm::min_rank_sweep(layout_channel(cfg), p, cfg.constellation, options);

  json histogram = json::object();
  for (const auto& [rank, count] : report.rank_histogram) histogram[std::to_string(rank)] = count;
  json delta = json::array();
  for (Eigen::Index k = 0; k < report.arg_min_delta.size(); ++k) delta.push_back(complex_json(report.arg_min_delta(k)));
  const json out = {{"version", afdm::version_string()},
                    {"config", afdm::to_json(cfg)},
                    {"params", params_json(p)},
                    {"min_rank", report.min_rank},
                    {"paths", report.paths},
                    {"full_diversity", report.full_diversity},
                    {"exhaustive", report.exhaustive},
                    {"evaluated", report.evaluated},
                    {"rank_histogram", histogram},
                    {"arg_min_delta", delta},
                    {"smallest_nonzero_singular_value", report.smallest_nonzero_singular_value}};
  emit(out.dump(2) + "\n", args.output_path);
  return 0;
}

int run_ber_sweep(const ConfigArgs& args, unsigned workers, std::string summary_path) {
  const auto cfg = load_config(args);
  const auto points = afdm::run_sweep(cfg, {workers});
  std::ostringstream csv;
  afdm::write_csv(csv, points);
  emit(csv.str(), args.output_path);

  const std::string summary = afdm::sweep_summary_json(cfg, points).dump(2) + "\n";
  if (summary_path.empty() && !args.output_path.empty()) summary_path = args.output_path + ".json";
  if (summary_path.empty()) {
    std::cerr << summary;
  } else {
    emit(summary, summary_path);
  }
  return 0;
}

int run_guard_count(const std::string& scheme_tag, int l_max, int alpha_max, bool as_json) {
  const afdm::ChannelProfile profile{l_max, alpha_max};
  const auto count = afdm::guard_symbol_count(afdm::parse_guard_scheme(scheme_tag), profile);
  if (as_json) {
    std::cout << json{{"version", afdm::version_string()},
                      {"scheme", scheme_tag},
                      {"l_max", l_max},
                      {"alpha_max", alpha_max},
                      {"guard_symbols", count}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << count << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AFDM transceiver simulator"};
  app.set_version_flag("--version", afdm::version_string());
  app.require_subcommand(1);

  const unsigned default_workers = std::max(1u, std::thread::hardware_concurrency());

  std::string filter, fault;
  auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant suites");
  selftest->add_option("--filter", filter, "Only suites whose name contains this text");
  selftest->add_option("--inject-fault", fault)->group("");

  ConfigArgs inspect_args;
  std::string inspect_scheme;
  bool dump = false;
  auto* inspect = app.add_subcommand("heff-inspect", "Show path placement and the support of H_eff");
  add_config_options(inspect, inspect_args);
  inspect->add_option("--scheme", inspect_scheme, "afdm, ocdm, daft-ofdm or ofdm (default: first in config)");
  inspect->add_flag("--dump", dump, "Include every complex entry of H_eff");

  ConfigArgs rank_args;
  std::string rank_scheme;
  unsigned rank_workers = default_workers;
  std::optional<std::uint64_t> samples;
  auto* rank = app.add_subcommand("rank-analysis", "Minimum rank of Phi(delta) over difference vectors");
  add_config_options(rank, rank_args);
  rank->add_option("--scheme", rank_scheme, "afdm, ocdm, daft-ofdm or ofdm (default: first in config)");
  rank->add_option("--workers", rank_workers, "Worker threads")->check(CLI::PositiveNumber);
  rank->add_option("--samples", samples, "Random sampling when the exhaustive set is too large");

  ConfigArgs sweep_args;
  unsigned sweep_workers = default_workers;
  std::string summary_path;
  auto* sweep = app.add_subcommand("ber-sweep", "Monte Carlo BER over the configured SNR grid");
  add_config_options(sweep, sweep_args);
  sweep->add_option("--workers", sweep_workers, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--summary", summary_path, "JSON summary path (default: <output>.json, or stderr)");

  std::string guard_scheme = "afdm";
  int l_max = 0, alpha_max = 0;
  bool guard_json = false;
  auto* guard = app.add_subcommand("guard-count", "Pilot guard symbols for a delay-Doppler profile");
  guard->add_option("--scheme", guard_scheme, "afdm or otfs");
  guard->add_option("--l-max", l_max)->required()->check(CLI::NonNegativeNumber);
  guard->add_option("--alpha-max", alpha_max)->required()->check(CLI::NonNegativeNumber);
  guard->add_flag("--json", guard_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*selftest) return run_selftest(filter, fault);
    if (*inspect) return run_heff_inspect(inspect_args, inspect_scheme, dump);
    if (*rank) return run_rank_analysis(rank_args, rank_scheme, rank_workers, samples);
    if (*sweep) return run_ber_sweep(sweep_args, sweep_workers, summary_path);
    if (*guard) return run_guard_count(guard_scheme, l_max, alpha_max, guard_json);
  } catch (const afdm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
