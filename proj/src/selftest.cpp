#include "afdm/selftest.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "afdm/channel.hpp"
#include "afdm/effchan.hpp"
#include "afdm/modem.hpp"
#include "afdm/params.hpp"
#include "afdm/random.hpp"
#include "afdm/transforms.hpp"

namespace afdm {
namespace {

constexpr std::uint64_t kSelftestSeed = 0x5e1f7e57ull;

ComplexVector random_vector(std::size_t n, RandomStream& rng) {
  ComplexVector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = rng.complex_normal(1.0);
  return v;
}

ChannelRealization random_integer_channel(std::size_t n, const ChannelProfile& profile, RandomStream& rng,
                                          bool fractional) {
  std::vector<ChannelPath> paths;
  const int count = 1 + static_cast<int>(rng.next_u32() % 4);
  for (int i = 0; i < count; ++i) {
    ChannelPath path;
    path.gain = rng.complex_normal(1.0 / count);
    path.delay = static_cast<int>(rng.next_u32() % static_cast<std::uint32_t>(profile.l_max + 1));
    const int span = 2 * profile.alpha_max + 1;
    path.doppler = static_cast<int>(rng.next_u32() % static_cast<std::uint32_t>(span)) - profile.alpha_max;
    if (fractional) path.doppler += rng.uniform() - 0.5;
    bool dup = false;
    for (const auto& q : paths) dup = dup || (q.delay == path.delay && q.doppler == path.doppler);
    if (!dup) paths.push_back(path);
  }
  return ChannelRealization(std::move(paths), n);
}

SuiteResult unitarity_suite() {
  RandomStream rng(kSelftestSeed, 1);
  double worst = 0.0;
  for (std::size_t n : {2u, 8u, 64u, 256u}) {
    for (int rep = 0; rep < 4; ++rep) {
      const DaftParams p{n, rng.uniform(), rng.uniform()};
      const ComplexMatrix a = daft_matrix(p);
      worst = std::max(worst, (a * a.adjoint() - ComplexMatrix::Identity(a.rows(), a.cols())).norm());
    }
  }
  std::ostringstream d;
  d << "max ||A A^H - I||_F = " << worst;
  return {"unitarity", worst < 1e-10, d.str()};
}

SuiteResult roundtrip_suite() {
  RandomStream rng(kSelftestSeed, 2);
  double worst = 0.0;
  for (std::size_t n : {8u, 64u}) {
    const ChannelProfile profile{2, 1};
    for (Scheme s : {Scheme::Afdm, Scheme::Ocdm, Scheme::DaftOfdm, Scheme::Ofdm}) {
      const std::vector<DelayDoppler> layout = {{0, -1.0}, {1, 1.0}};
      const Modem modem(scheme_params(s, profile, n, Constellation::Qpsk, layout));
      Bits bits(2 * n);
      for (auto& b : bits) b = rng.bit();
      const SymbolVector x = map_bits(bits, Constellation::Qpsk, n);
      const ComplexVector back = modem.demodulate(discard_cpp(modem.modulate(x).serialize(), profile.l_max));
      worst = std::max(worst, (back - x.symbols).norm() / x.symbols.norm());
    }
  }
  std::ostringstream d;
  d << "max relative round-trip error = " << worst;
  return {"roundtrip", worst < 1e-10, d.str()};
}

SuiteResult equivalence_suite() {
  RandomStream rng(kSelftestSeed, 3);
  double worst = 0.0;
  const ChannelProfile profile{3, 2};
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = rep % 2 ? 16 : 12;
    const double c1 = rng.uniform() * 0.3;
    const ChannelRealization ch = random_integer_channel(n, profile, rng, true);
    Frame f;
    f.body = random_vector(n, rng);
    f.prefix = chirp_periodic_prefix(f.body, c1, static_cast<std::size_t>(profile.l_max));
    const ComplexVector td = discard_cpp(apply_timedomain(f, ch), static_cast<std::size_t>(profile.l_max));
    const ComplexVector md = channel_matrix(ch, c1) * f.body;
    worst = std::max(worst, (td - md).cwiseAbs().maxCoeff());
  }
  std::ostringstream d;
  d << "max |time-domain - matrix| = " << worst;
  return {"model-equivalence", worst < 1e-9, d.str()};
}

SuiteResult closed_form_suite(bool flip_dft_sign) {
  RandomStream rng(kSelftestSeed, 4);
  double worst = 0.0;
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = rep % 2 ? 32 : 8;
    const ChannelProfile profile{1, 1};
    const ModemParams p = scheme_params(Scheme::Afdm, profile, n);
    const ChannelRealization ch = random_integer_channel(n, profile, rng, false);
    ComplexMatrix a = daft_matrix(p.daft());
    if (flip_dft_sign) {
      a = chirp_vector(n, p.c2).asDiagonal() * dft_matrix(n).conjugate() * chirp_vector(n, p.c1).asDiagonal();
    }
    const ComplexMatrix reference = a * channel_matrix(ch, p.c1) * a.adjoint();
    worst = std::max(worst, (heff_closed_form(ch, p).h_eff - reference).cwiseAbs().maxCoeff());
  }
  std::ostringstream d;
  d << "max |closed form - conjugation| = " << worst;
  return {"closed-form", worst < 1e-9, d.str()};
}

}  // namespace

std::vector<std::string> selftest_suite_names() { return {"unitarity", "roundtrip", "model-equivalence", "closed-form"}; }

std::vector<SuiteResult> run_selftest(const SelftestOptions& options) {
  const std::vector<std::pair<std::string, std::function<SuiteResult()>>> suites = {
      {"unitarity", unitarity_suite},
      {"roundtrip", roundtrip_suite},
      {"model-equivalence", equivalence_suite},
      {"closed-form", [&] { return closed_form_suite(options.flip_dft_sign); }},
  };
  std::vector<SuiteResult> out;
  for (const auto& [name, run] : suites) {
    if (!options.filter.empty() && name.find(options.filter) == std::string::npos) continue;
    out.push_back(run());
  }
  return out;
}

}  // namespace afdm
