#include "afdm/effchan.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "afdm/error.hpp"
#include "afdm/transforms.hpp"

namespace afdm {
namespace {

constexpr double kIntegralTol = 1e-9;
constexpr double kSupportRelTol = 1e-6;

std::optional<long long> as_integer(double v) {
  const double r = std::nearbyint(v);
  if (std::abs(v - r) > kIntegralTol) return std::nullopt;
  return static_cast<long long>(r);
}

std::size_t wrap(long long v, std::size_t n) {
  const auto m = static_cast<long long>(n);
  return static_cast<std::size_t>(((v % m) + m) % m);
}

}  // namespace

PathPlacement place_path(const ChannelPath& path, const ModemParams& p) {
  PathPlacement out{path, std::nullopt, std::nullopt};
  const auto alpha = as_integer(path.doppler);
  const auto shift = as_integer(2.0 * static_cast<double>(p.n) * p.c1 * path.delay);
  if (alpha && shift) {
    out.loc = *alpha + *shift;
    out.position_row0 = wrap(*out.loc, p.n);
  }
  return out;
}

EffectiveChannel build_heff_matrix(const ChannelRealization& ch, const ModemParams& p) {
  p.validate();
  require(ch.n() == p.n, "channel size does not match N");
  const ComplexMatrix a = daft_matrix(p.daft());
  EffectiveChannel e;
  e.h_eff = a * channel_matrix(ch, p.c1) * a.adjoint();
  for (const auto& path : ch.paths()) e.per_path.push_back(place_path(path, p));
  return e;
}

cplx closed_form_entry(int delay, std::size_t row, std::size_t col, const ModemParams& p) {
  const double l = delay;
  const double q = static_cast<double>(col);
  const double r = static_cast<double>(row);
  const std::size_t ql = (col * static_cast<std::size_t>(delay)) % p.n;
  const double turns =
      p.c1 * l * l + p.c2 * (q * q - r * r) - static_cast<double>(ql) / static_cast<double>(p.n);
  return unit_phasor_neg(-turns);
}

EffectiveChannel heff_closed_form(const ChannelRealization& ch, const ModemParams& p) {
  p.validate();
  require(ch.n() == p.n, "channel size does not match N");
  const auto n = static_cast<Eigen::Index>(p.n);
  EffectiveChannel e;
  e.h_eff = ComplexMatrix::Zero(n, n);
  for (const auto& path : ch.paths()) {
    PathPlacement placement = place_path(path, p);
    if (!placement.loc) {
      throw PreconditionError(
          "closed-form H_eff needs integer Doppler and integral 2*N*c1*l; use build_heff_matrix instead");
    }
    for (std::size_t row = 0; row < p.n; ++row) {
      const std::size_t col = wrap(static_cast<long long>(row) + *placement.loc, p.n);
      e.h_eff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) +=
          path.gain * closed_form_entry(path.delay, row, col, p);
    }
    e.per_path.push_back(placement);
  }
  return e;
}

ComplexMatrix path_matrix(const ChannelPath& path, const ModemParams& p) {
  const ChannelPath unit{cplx{1.0, 0.0}, path.doppler, path.delay};
  const ChannelRealization single({unit}, p.n);
  if (place_path(unit, p).loc) return heff_closed_form(single, p).h_eff;
  return build_heff_matrix(single, p).h_eff;
}

cplx dirichlet_sum(double theta, std::size_t n) {
  const double nn = static_cast<double>(n);
  const double per_sample = theta / nn;
  if (std::abs(per_sample - std::nearbyint(per_sample)) < 1e-12) return {nn, 0.0};
  const cplx numerator = cplx{1.0, 0.0} - unit_phasor_neg(theta);
  const cplx denominator = cplx{1.0, 0.0} - unit_phasor_neg(per_sample);
  return numerator / denominator;
}

ComplexVector heff_general_row(const ChannelRealization& ch, const ModemParams& p, std::size_t row) {
  p.validate();
  require(ch.n() == p.n, "channel size does not match N");
  require(row < p.n, "row index out of range");
  const double nn = static_cast<double>(p.n);
  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(p.n));
  for (const auto& path : ch.paths()) {
    const double shift = 2.0 * nn * p.c1 * path.delay;
    for (std::size_t col = 0; col < p.n; ++col) {
      const double theta = static_cast<double>(row) - static_cast<double>(col) + path.doppler + shift;
      out(static_cast<Eigen::Index>(col)) +=
          path.gain * closed_form_entry(path.delay, row, col, p) * dirichlet_sum(theta, p.n) / nn;
    }
  }
  return out;
}

std::vector<RecoveredPath> recover_profile(const EffectiveChannel& e, const ModemParams& p,
                                           const ChannelProfile& profile) {
  profile.validate();
  require(static_cast<std::size_t>(e.h_eff.rows()) == p.n, "effective channel size does not match N");
  if (!validate_separability(profile, p.n)) {
    throw RuntimeError("profile violates 2*alpha_max*l_max + 2*alpha_max + l_max < N; positions are ambiguous");
  }
  const auto chirp_shift = as_integer(2.0 * static_cast<double>(p.n) * p.c1);
  if (!chirp_shift) throw PreconditionError("profile recovery needs an integral 2*N*c1");

  std::map<std::size_t, std::pair<int, int>> table;
  for (int l = 0; l <= profile.l_max; ++l) {
    for (int a = -profile.alpha_max; a <= profile.alpha_max; ++a) {
      const std::size_t pos = wrap(a + *chirp_shift * l, p.n);
      if (!table.emplace(pos, std::make_pair(l, a)).second) {
        throw RuntimeError("ambiguous DAFT-domain position " + std::to_string(pos) +
                           ": two admissible (delay, doppler) pairs collide");
      }
    }
  }

  const auto row0 = e.h_eff.row(0);
  const double peak = row0.cwiseAbs().maxCoeff();
  if (!(peak > 0.0)) throw RuntimeError("row 0 of H_eff has no nonzero entries");
  std::vector<RecoveredPath> out;
  for (Eigen::Index col = 0; col < row0.size(); ++col) {
    if (std::abs(row0(col)) <= kSupportRelTol * peak) continue;
    const auto it = table.find(static_cast<std::size_t>(col));
    if (it == table.end()) {
      throw RuntimeError("nonzero at column " + std::to_string(col) + " matches no admissible path");
    }
    const auto [l, a] = it->second;
    const cplx gain = row0(col) / closed_form_entry(l, 0, static_cast<std::size_t>(col), p);
    out.push_back({l, a, gain});
  }
  std::sort(out.begin(), out.end(), [](const RecoveredPath& x, const RecoveredPath& y) {
    return x.delay != y.delay ? x.delay < y.delay : x.doppler < y.doppler;
  });
  return out;
}

}  // namespace afdm
