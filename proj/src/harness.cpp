#include "afdm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <ostream>
#include <thread>

#include "afdm/channel.hpp"
#include "afdm/detect.hpp"
#include "afdm/effchan.hpp"
#include "afdm/error.hpp"

#ifndef AFDM_GIT_DESCRIBE
#define AFDM_GIT_DESCRIBE "unknown"
#endif

namespace afdm {
namespace {

// Fixed batch geometry: part of the reproducibility contract, so not configurable.
constexpr std::uint64_t kBatchTrials = 16;
constexpr std::uint64_t kBatchesPerWave = 64;

struct BatchResult {
  std::uint64_t trials = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t bits_total = 0;
};

bool all_integral(const ChannelRealization& ch, const ModemParams& p) {
  return std::all_of(ch.paths().begin(), ch.paths().end(),
                     [&](const ChannelPath& path) { return place_path(path, p).loc.has_value(); });
}

}  // namespace

std::string version_string() { return std::string("afdm-sim 0.1.0 (") + AFDM_GIT_DESCRIBE + ")"; }

double wilson_halfwidth(std::uint64_t errors, std::uint64_t total) {
  if (total == 0) return 0.0;
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(total);
  const double p = static_cast<double>(errors) / n;
  const double z2 = z * z;
  return z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
}

std::uint64_t trial_substream(Scheme scheme, double snr_db, std::uint64_t trial_index) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(scheme) + 1);
  h = mix64(h ^ std::bit_cast<std::uint64_t>(snr_db));
  return mix64(h ^ trial_index);
}

SchemeRunner::SchemeRunner(const ExperimentConfig& cfg, Scheme scheme)
    : cfg_(cfg), scheme_(scheme), modem_(cfg.modem_params(scheme)) {}

TrialOutcome SchemeRunner::run(double snr_db, std::uint64_t trial_index) const {
  const ModemParams& p = modem_.params();
  RandomStream rng(cfg_.seed, trial_substream(scheme_, snr_db, trial_index));

  const ChannelRealization ch = random_channel(cfg_.profile, cfg_.path_layout, p.n, rng);
  Bits bits(p.n * bits_per_symbol(p.constellation));
  for (auto& b : bits) b = rng.bit();
  const SymbolVector x = map_bits(bits, p.constellation, p.n);

  const Frame frame = modem_.modulate(x);
  const double n0 = std::pow(10.0, -snr_db / 10.0);
  const ComplexVector received = add_awgn(apply_timedomain(frame, ch), n0, rng);
  const ComplexVector y = modem_.demodulate(discard_cpp(received, p.cpp_len));

  const EffectiveChannel e = all_integral(ch, p) ? heff_closed_form(ch, p) : build_heff_matrix(ch, p);
  const DetectionResult det =
      cfg_.detector == Detector::Ml ? detect_ml(y, e, p.constellation) : detect_mmse(y, e, n0, p.constellation);
  const Bits decided = indices_to_bits(det.indices, p.constellation);

  TrialOutcome out;
  out.bits_total = bits.size();
  for (std::size_t k = 0; k < bits.size(); ++k) out.bit_errors += bits[k] != decided[k];
  out.tx_energy = frame.body.squaredNorm();
  return out;
}

TrialOutcome run_trial(const ExperimentConfig& cfg, Scheme scheme, double snr_db, std::uint64_t trial_index) {
  cfg.validate();
  return SchemeRunner(cfg, scheme).run(snr_db, trial_index);
}

std::vector<BerPoint> run_sweep(const ExperimentConfig& cfg, const SweepRunOptions& options) {
  cfg.validate();
  const unsigned workers = std::max(1u, options.workers);
  std::vector<BerPoint> points;
  const std::uint64_t total_batches = (cfg.trials + kBatchTrials - 1) / kBatchTrials;

  for (const Scheme scheme : cfg.schemes) {
    const SchemeRunner runner(cfg, scheme);
    for (const double snr : cfg.snr_db_grid) {
      auto run_batch = [&](std::uint64_t b) {
        BatchResult r;
        const std::uint64_t first = b * kBatchTrials;
        const std::uint64_t last = std::min(cfg.trials, first + kBatchTrials);
        for (std::uint64_t t = first; t < last; ++t) {
          const TrialOutcome o = runner.run(snr, t);
          r.bit_errors += o.bit_errors;
          r.bits_total += o.bits_total;
          ++r.trials;
        }
        return r;
      };

      BerPoint point;
      point.scheme = std::string(to_string(scheme));
      point.snr_db = snr;
      bool stop = false;
      for (std::uint64_t wave = 0; wave < total_batches && !stop; wave += kBatchesPerWave) {
        const std::uint64_t wave_end = std::min(total_batches, wave + kBatchesPerWave);
        std::vector<BatchResult> results(wave_end - wave);
        std::atomic<std::uint64_t> next{wave};
        std::exception_ptr failure;
        std::atomic<bool> failed{false};
        auto worker = [&] {
          for (std::uint64_t b = next.fetch_add(1); b < wave_end; b = next.fetch_add(1)) {
            if (failed.load()) return;
            try {
              results[b - wave] = run_batch(b);
            } catch (...) {
              if (!failed.exchange(true)) failure = std::current_exception();
              return;
            }
          }
        };
        if (workers == 1) {
          worker();
        } else {
          std::vector<std::thread> pool;
          for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
          for (auto& t : pool) t.join();
        }
        if (failure) std::rethrow_exception(failure);

        for (const auto& r : results) {
          point.trials_run += r.trials;
          point.bit_errors += r.bit_errors;
          point.bits_total += r.bits_total;
          if (point.bit_errors >= cfg.min_errors) {
            stop = true;
            break;
          }
        }
      }
      point.ber = point.bits_total ? static_cast<double>(point.bit_errors) / static_cast<double>(point.bits_total) : 0.0;
      point.ci95_halfwidth = wilson_halfwidth(point.bit_errors, point.bits_total);
      points.push_back(point);
    }
  }
  return points;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, std::span<const BerPoint> points) {
  out << "scheme,snr_db,trials,bit_errors,bits_total,ber,ci95\n";
  for (const auto& p : points) {
    out << p.scheme << ',' << format_double(p.snr_db) << ',' << p.trials_run << ',' << p.bit_errors << ','
        << p.bits_total << ',' << format_double(p.ber) << ',' << format_double(p.ci95_halfwidth) << '\n';
  }
}

nlohmann::json sweep_summary_json(const ExperimentConfig& cfg, std::span<const BerPoint> points) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : points) {
    rows.push_back({{"scheme", p.scheme},
                    {"snr_db", p.snr_db},
                    {"trials", p.trials_run},
                    {"bit_errors", p.bit_errors},
                    {"bits_total", p.bits_total},
                    {"ber", p.ber},
                    {"ci95", p.ci95_halfwidth}});
  }
  return {{"version", version_string()}, {"config", to_json(cfg)}, {"points", rows}};
}

double estimate_diversity_slope(std::span<const BerPoint> points, double snr_lo_db, double snr_hi_db,
                                std::uint64_t min_errors) {
  require(snr_hi_db > snr_lo_db, "slope needs snr_hi > snr_lo");
  auto find = [&](double snr) -> const BerPoint& {
    const BerPoint* hit = nullptr;
    for (const auto& p : points) {
      if (p.snr_db == snr) {
        require(hit == nullptr, "several points share SNR " + format_double(snr) + "; pass one scheme at a time");
        hit = &p;
      }
    }
    require(hit != nullptr, "no BER point at SNR " + format_double(snr));
    return *hit;
  };
  const BerPoint& lo = find(snr_lo_db);
  const BerPoint& hi = find(snr_hi_db);
  if (lo.bit_errors < min_errors || hi.bit_errors < min_errors) {
    throw RuntimeError("too few bit errors for a meaningful slope (" + std::to_string(lo.bit_errors) + " and " +
                       std::to_string(hi.bit_errors) + ", need " + std::to_string(min_errors) + ")");
  }
  return -(std::log10(hi.ber) - std::log10(lo.ber)) / ((snr_hi_db - snr_lo_db) / 10.0);
}

}  // namespace afdm
