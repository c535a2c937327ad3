#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "afdm/config.hpp"
#include "afdm/modem.hpp"

namespace afdm {

/// Library name plus a git-describe style build identifier.
std::string version_string();

struct TrialOutcome {
  std::uint64_t bit_errors = 0;
  std::uint64_t bits_total = 0;
  /// Energy of the transmitted body, sum |s_n|^2.
  double tx_energy = 0.0;
};

/// One point of a BER curve.
struct BerPoint {
  std::string scheme;
  double snr_db = 0.0;
  std::uint64_t trials_run = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t bits_total = 0;
  double ber = 0.0;
  double ci95_halfwidth = 0.0;
};

/// Half-width of the Wilson score interval at 95% confidence.
double wilson_halfwidth(std::uint64_t errors, std::uint64_t total);

/// Stream substate for one trial. Distinct (scheme, snr, trial) give distinct ids.
std::uint64_t trial_substream(Scheme scheme, double snr_db, std::uint64_t trial_index);

/// Runs trials of one scheme; holds the modem and cached per-scheme state.
class SchemeRunner {
 public:
  SchemeRunner(const ExperimentConfig& cfg, Scheme scheme);

  const ModemParams& params() const { return modem_.params(); }

  /// map -> modulate -> time-domain channel -> AWGN -> discard CPP -> demodulate
  /// -> detect with the exact per-realization H_eff -> demap -> count.
  /// Deterministic in (cfg.seed, scheme, snr_db, trial_index).
  TrialOutcome run(double snr_db, std::uint64_t trial_index) const;

 private:
  ExperimentConfig cfg_;
  Scheme scheme_;
  Modem modem_;
};

TrialOutcome run_trial(const ExperimentConfig& cfg, Scheme scheme, double snr_db, std::uint64_t trial_index);

struct SweepRunOptions {
  unsigned workers = 1;
};

/// BER for every (scheme, snr) in the config. Trials run in fixed batches;
/// a point stops at the first batch boundary where accumulated bit errors
/// reach min_errors (never beyond cfg.trials). Batches are accumulated in
/// index order, so the output is identical for any worker count.
std::vector<BerPoint> run_sweep(const ExperimentConfig& cfg, const SweepRunOptions& options = {});

/// CSV with header `scheme,snr_db,trials,bit_errors,bits_total,ber,ci95`.
void write_csv(std::ostream& out, std::span<const BerPoint> points);
std::string format_double(double v);

nlohmann::json sweep_summary_json(const ExperimentConfig& cfg, std::span<const BerPoint> points);

/// -(log10 BER_hi - log10 BER_lo) / ((snr_hi - snr_lo) / 10) for the points
/// of one scheme at the two SNRs. Both points need at least `min_errors` errors.
double estimate_diversity_slope(std::span<const BerPoint> points, double snr_lo_db, double snr_hi_db,
                                std::uint64_t min_errors = 200);

}  // namespace afdm
