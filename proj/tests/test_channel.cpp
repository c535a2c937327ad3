#include "doctest.h"

#include <cmath>

#include "afdm/channel.hpp"
#include "afdm/error.hpp"
#include "afdm/modem.hpp"
#include "afdm/params.hpp"
#include "oracles.hpp"

using afdm::ChannelPath;
using afdm::ChannelRealization;
using afdm::ComplexMatrix;
using afdm::ComplexVector;
using afdm::cplx;
using afdm::Frame;

namespace {

ComplexVector random_vector(std::size_t n, afdm::RandomStream& rng) {
  ComplexVector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = rng.complex_normal(1.0);
  return v;
}

Frame random_frame(std::size_t n, std::size_t len, double c1, afdm::RandomStream& rng) {
  Frame f;
  f.body = random_vector(n, rng);
  f.prefix = afdm::chirp_periodic_prefix(f.body, c1, len);
  return f;
}

ChannelRealization random_realization(std::size_t n, int l_max, int a_max, bool fractional,
                                      afdm::RandomStream& rng) {
  std::vector<ChannelPath> paths;
  const int count = 1 + static_cast<int>(rng.next_u32() % 5);
  for (int i = 0; i < count; ++i) {
    ChannelPath p;
    p.gain = rng.complex_normal(1.0);
    p.delay = static_cast<int>(rng.next_u32() % static_cast<std::uint32_t>(l_max + 1));
    p.doppler = static_cast<int>(rng.next_u32() % static_cast<std::uint32_t>(2 * a_max + 1)) - a_max;
    if (fractional) p.doppler += rng.uniform() - 0.5;
    bool dup = false;
    for (const auto& q : paths) dup = dup || (q.delay == p.delay && q.doppler == p.doppler);
    if (!dup) paths.push_back(p);
  }
  return ChannelRealization(paths, n);
}

}  // namespace

TEST_CASE("ChannelRealization validation") {
  CHECK_THROWS_AS(ChannelRealization({}, 8), afdm::PreconditionError);
  CHECK_THROWS_AS(ChannelRealization({{cplx{1, 0}, 0.0, 8}}, 8), afdm::PreconditionError);
  CHECK_THROWS_AS(ChannelRealization({{cplx{1, 0}, 0.0, -1}}, 8), afdm::PreconditionError);
  CHECK_THROWS_AS(ChannelRealization({{cplx{1, 0}, 1.0, 2}, {cplx{0.5, 0}, 1.0, 2}}, 8), afdm::PreconditionError);
  const ChannelRealization ok({{cplx{1, 0}, 1.0, 2}, {cplx{0, 2}, -1.0, 2}}, 8);
  CHECK(ok.max_delay() == 2);
  CHECK(ok.energy() == doctest::Approx(5.0));
}

TEST_CASE("apply_timedomain") {
  afdm::RandomStream rng(21, 1);
  SUBCASE("identity path returns the frame unchanged") {
    const Frame f = random_frame(8, 2, 0.1, rng);
    const ChannelRealization ch({{cplx{1, 0}, 0.0, 0}}, 8);
    CHECK((afdm::apply_timedomain(f, ch) - f.serialize()).norm() == 0.0);
  }
  SUBCASE("pure delay with a cyclic prefix circularly shifts the body") {
    const Frame f = random_frame(8, 2, 0.0, rng);
    const ChannelRealization ch({{cplx{1, 0}, 0.0, 2}}, 8);
    const ComplexVector body = afdm::discard_cpp(afdm::apply_timedomain(f, ch), 2);
    for (int k = 0; k < 8; ++k) CHECK(std::abs(body(k) - f.body((k + 6) % 8)) < 1e-15);
  }
  SUBCASE("delay beyond the prefix is rejected") {
    const Frame f = random_frame(8, 1, 0.0, rng);
    const ChannelRealization ch({{cplx{1, 0}, 0.0, 2}}, 8);
    CHECK_THROWS_AS(afdm::apply_timedomain(f, ch), afdm::PreconditionError);
  }
  SUBCASE("linear in the frame") {
    const ChannelRealization ch = random_realization(16, 3, 2, true, rng);
    const Frame a = random_frame(16, 3, 0.07, rng);
    const Frame b = random_frame(16, 3, 0.07, rng);
    Frame sum{a.prefix + 2.0 * b.prefix, a.body + 2.0 * b.body};
    const ComplexVector lhs = afdm::apply_timedomain(sum, ch);
    const ComplexVector rhs = afdm::apply_timedomain(a, ch) + 2.0 * afdm::apply_timedomain(b, ch);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("channel_matrix") {
  afdm::RandomStream rng(21, 2);
  SUBCASE("single static path is the identity") {
    const ChannelRealization ch({{cplx{1, 0}, 0.0, 0}}, 8);
    CHECK((afdm::channel_matrix(ch, 0.3) - ComplexMatrix::Identity(8, 8)).norm() == 0.0);
  }
  SUBCASE("matches the explicit factor product") {
    const ChannelRealization ch({{cplx{1, 0}, 1.0, 1}}, 8);
    CHECK((afdm::channel_matrix(ch, 3.0 / 16.0) - oracle::channel_matrix(ch, 3.0 / 16.0)).cwiseAbs().maxCoeff() <
          1e-13);
    for (int rep = 0; rep < 30; ++rep) {
      const std::size_t n = 5 + rng.next_u32() % 20;
      const ChannelRealization r = random_realization(n, 4, 2, rep % 2 == 0, rng);
      const double c1 = rng.uniform();
      CHECK((afdm::channel_matrix(r, c1) - oracle::channel_matrix(r, c1)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("prefix phase factors vanish for afdm_c1 with even N") {
    for (std::size_t n : {8u, 16u, 64u}) {
      const afdm::ChannelProfile prof{2, 2};
      const double c1 = afdm::afdm_c1(prof, n);
      const ChannelRealization r = random_realization(n, 2, 2, false, rng);
      CHECK((afdm::channel_matrix(r, c1, true) - afdm::channel_matrix(r, c1, false)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("time-domain and matrix channel models agree") {
  afdm::RandomStream rng(21, 3);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 4 + rng.next_u32() % 40;
    const int l_max = static_cast<int>(rng.next_u32() % std::min<std::uint32_t>(4, static_cast<std::uint32_t>(n)));
    const std::size_t len = static_cast<std::size_t>(l_max) + rng.next_u32() % 2;
    const double c1 = rng.uniform() - 0.5;
    const ChannelRealization ch = random_realization(n, l_max, 3, rep % 2 == 0, rng);
    const Frame f = random_frame(n, std::min(len, n), c1, rng);
    const ComplexVector td = afdm::discard_cpp(afdm::apply_timedomain(f, ch), static_cast<std::size_t>(f.prefix.size()));
    const ComplexVector md = afdm::channel_matrix(ch, c1) * f.body;
    REQUIRE((td - md).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("add_awgn") {
  SUBCASE("statistics") {
    afdm::RandomStream rng(21, 4);
    const double n0 = 0.37;
    const ComplexVector zero = ComplexVector::Zero(1000000);
    const ComplexVector noisy = afdm::add_awgn(zero, n0, rng);
    const double var = noisy.squaredNorm() / static_cast<double>(noisy.size());
    CHECK(var > n0 * 0.99);
    CHECK(var < n0 * 1.01);
    CHECK(std::abs(noisy.mean()) < 0.005);
  }
  SUBCASE("vanishing noise leaves the input") {
    afdm::RandomStream rng(21, 5);
    const ComplexVector v = ComplexVector::Constant(16, cplx{1.0, -2.0});
    CHECK((afdm::add_awgn(v, 1e-300, rng) - v).norm() < 1e-140);
  }
  SUBCASE("deterministic for a fixed stream") {
    afdm::RandomStream a(21, 6), b(21, 6);
    const ComplexVector v = ComplexVector::Zero(64);
    CHECK(afdm::add_awgn(v, 1.0, a) == afdm::add_awgn(v, 1.0, b));
  }
  SUBCASE("rejects nonpositive noise") {
    afdm::RandomStream rng(21, 7);
    CHECK_THROWS_AS(afdm::add_awgn(ComplexVector::Zero(4), 0.0, rng), afdm::PreconditionError);
  }
}

TEST_CASE("random_channel") {
  SUBCASE("two-path layout") {
    afdm::RandomStream rng(21, 8);
    afdm::PathLayout layout;
    layout.entries = {{0, -1.0, std::nullopt}, {1, 1.0, std::nullopt}};
    const auto ch = afdm::random_channel({1, 1}, layout, 8, rng);
    REQUIRE(ch.size() == 2);
    CHECK(ch.paths()[0].delay == 0);
    CHECK(ch.paths()[1].doppler == 1.0);
  }
  SUBCASE("full grid: 3 delays x 7 Dopplers") {
    const auto layout = afdm::PathLayout::full_grid({2, 3});
    CHECK(layout.entries.size() == 21);
    afdm::RandomStream rng(21, 9);
    CHECK(afdm::random_channel({2, 3}, layout, 64, rng).size() == 21);
  }
  SUBCASE("unit average energy") {
    const auto layout = afdm::PathLayout::full_grid({2, 3});
    double total = 0.0;
    const int count = 100000;
    for (int k = 0; k < count; ++k) {
      afdm::RandomStream rng(22, static_cast<std::uint64_t>(k));
      total += afdm::random_channel({2, 3}, layout, 64, rng).energy();
    }
    CHECK(total / count == doctest::Approx(1.0).epsilon(0.01));
  }
  SUBCASE("fixed gains are honoured") {
    afdm::RandomStream rng(21, 10);
    afdm::PathLayout layout;
    layout.entries = {{0, 0.0, cplx{0.5, 0.5}}};
    CHECK(afdm::random_channel({0, 0}, layout, 8, rng).paths()[0].gain == cplx{0.5, 0.5});
  }
  SUBCASE("layout errors") {
    afdm::RandomStream rng(21, 11);
    afdm::PathLayout bad;
    bad.entries = {{0, 2.0, std::nullopt}};
    CHECK_THROWS_AS(afdm::random_channel({1, 1}, bad, 8, rng), afdm::ConfigError);
    bad.entries = {{2, 0.0, std::nullopt}};
    CHECK_THROWS_AS(afdm::random_channel({1, 1}, bad, 8, rng), afdm::ConfigError);
    bad.entries = {{0, 0.0, std::nullopt}, {0, 0.0, std::nullopt}};
    CHECK_THROWS_AS(afdm::random_channel({1, 1}, bad, 8, rng), afdm::ConfigError);
  }
}

TEST_CASE("body energy scales with channel energy") {
  afdm::RandomStream rng(21, 12);
  const ChannelRealization ch({{cplx{0.6, 0.0}, 1.0, 0}, {cplx{0.0, 0.8}, -1.0, 1}}, 32);
  double ratio = 0.0;
  const int reps = 4000;
  for (int k = 0; k < reps; ++k) {
    Frame f = random_frame(32, 1, 0.0, rng);
    f.body /= f.body.norm() / std::sqrt(32.0);
    f.prefix = afdm::chirp_periodic_prefix(f.body, 0.0, 1);
    const ComplexVector out = afdm::discard_cpp(afdm::apply_timedomain(f, ch), 1);
    ratio += out.squaredNorm() / (32.0 * ch.energy());
  }
  CHECK(ratio / reps == doctest::Approx(1.0).epsilon(0.02));
}
