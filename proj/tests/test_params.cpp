#include "doctest.h"

#include <cmath>
#include <set>

#include "afdm/error.hpp"
#include "afdm/params.hpp"

using afdm::ChannelProfile;
using afdm::GuardScheme;
using afdm::Scheme;

TEST_CASE("afdm_c1") {
  CHECK(afdm::afdm_c1({1, 1}, 8) == doctest::Approx(3.0 / 16.0).epsilon(1e-15));
  CHECK(afdm::afdm_c1({2, 3}, 64) == doctest::Approx(7.0 / 128.0).epsilon(1e-15));
  CHECK(afdm::afdm_c1({4, 0}, 32) == doctest::Approx(1.0 / 64.0).epsilon(1e-15));
  CHECK_THROWS_AS(afdm::afdm_c1({1, 1}, 1), afdm::PreconditionError);

  // 2 N c1 is the odd integer 2 alpha_max + 1.
  for (std::size_t n = 2; n <= 300; n += 7) {
    for (int a = 0; a <= 10; ++a) {
      const double scaled = 2.0 * static_cast<double>(n) * afdm::afdm_c1({0, a}, n);
      CHECK(scaled == doctest::Approx(2 * a + 1).epsilon(1e-13));
      CHECK(std::abs(scaled - std::round(scaled)) < 1e-12);
    }
  }
}

TEST_CASE("default_c2") {
  CHECK(afdm::default_c2(8) == doctest::Approx(std::sqrt(2.0) / 128.0).epsilon(1e-15));
  CHECK(afdm::default_c2(8) == doctest::Approx(0.011048543456039806));
  CHECK(afdm::default_c2(64) == doctest::Approx(std::sqrt(2.0) / 8192.0).epsilon(1e-15));
  for (std::size_t n = 2; n < 5000; n += 13) CHECK(afdm::default_c2(n) < 1.0 / (2.0 * static_cast<double>(n)));
}

TEST_CASE("scheme_params presets") {
  const ChannelProfile small{1, 1};
  const auto ocdm = afdm::scheme_params(Scheme::Ocdm, small, 8);
  CHECK(ocdm.c1 == 1.0 / 16.0);
  CHECK(ocdm.c2 == 1.0 / 16.0);
  const auto ofdm = afdm::scheme_params(Scheme::Ofdm, small, 8);
  CHECK(ofdm.c1 == 0.0);
  CHECK(ofdm.c2 == 0.0);
  const auto a = afdm::scheme_params(Scheme::Afdm, small, 8);
  CHECK(a.c1 == 3.0 / 16.0);
  CHECK(a.c2 == doctest::Approx(std::sqrt(2.0) / 128.0).epsilon(1e-15));
  CHECK(a.cpp_len == 1);
  CHECK(a.scheme_label == "afdm");
  CHECK(afdm::scheme_params(Scheme::Afdm, {2, 3}, 64).cpp_len == 2);
  CHECK_THROWS_AS(afdm::parse_scheme("otfs"), afdm::ConfigError);
  CHECK(afdm::parse_scheme("daft-ofdm") == Scheme::DaftOfdm);
}

TEST_CASE("daft_ofdm_c1 lines paths up on one diagonal") {
  using afdm::DelayDoppler;
  SUBCASE("two paths with distinct delays collide") {
    for (double a1 : {-1.0, 1.0}) {
      for (double a2 : {-1.0, 1.0}) {
        const std::vector<DelayDoppler> layout = {{0, a1}, {1, a2}};
        const double c1 = afdm::daft_ofdm_c1(layout, 8);
        const double loc1 = a1;
        const double loc2 = a2 + 16.0 * c1;
        CHECK(loc1 == doctest::Approx(loc2));
      }
    }
  }
  SUBCASE("points on a line through the origin") {
    const std::vector<DelayDoppler> layout = {{0, 0.0}, {1, 2.0}, {2, 4.0}};
    CHECK(afdm::daft_ofdm_c1(layout, 16) == doctest::Approx(-2.0 / 32.0));
  }
  SUBCASE("single delay gives c1 = 0") {
    const std::vector<DelayDoppler> layout = {{0, -1.0}, {0, 1.0}};
    CHECK(afdm::daft_ofdm_c1(layout, 8) == 0.0);
  }
  SUBCASE("preset uses the layout and c2 = 0") {
    const std::vector<DelayDoppler> layout = {{0, -1.0}, {1, 1.0}};
    const auto p = afdm::scheme_params(Scheme::DaftOfdm, {1, 1}, 8, afdm::Constellation::Bpsk, layout);
    CHECK(p.c1 == -2.0 / 16.0);
    CHECK(p.c2 == 0.0);
  }
}

TEST_CASE("validate_separability") {
  CHECK(afdm::validate_separability({1, 1}, 8));
  CHECK(afdm::validate_separability({2, 3}, 64));
  CHECK_FALSE(afdm::validate_separability({3, 1}, 8));
  CHECK_FALSE(afdm::validate_separability({0, 0}, 0));

  // Monotone: growing l_max or alpha_max never turns false into true.
  for (std::size_t n : {8u, 16u, 64u}) {
    for (int l = 0; l < 10; ++l) {
      for (int a = 0; a < 10; ++a) {
        if (!afdm::validate_separability({l, a}, n)) {
          CHECK_FALSE(afdm::validate_separability({l + 1, a}, n));
          CHECK_FALSE(afdm::validate_separability({l, a + 1}, n));
        }
      }
    }
  }
}

TEST_CASE("afdm_c1 separates every admissible pair of paths") {
  // Exhaustive over small profiles: paths with different delays never share
  // a pre-modulo location, and under separability the modulo-N positions are distinct.
  for (int l_max = 0; l_max <= 3; ++l_max) {
    for (int a_max = 0; a_max <= 3; ++a_max) {
      const ChannelProfile prof{l_max, a_max};
      const std::size_t n = static_cast<std::size_t>(2 * a_max * l_max + 2 * a_max + l_max + 1);
      if (n < 2) continue;
      const long long shift = std::llround(2.0 * static_cast<double>(n) * afdm::afdm_c1(prof, n));
      std::set<long long> locs;
      std::set<long long> positions;
      long long min_gap = 1 << 30;
      std::vector<long long> all;
      for (int l = 0; l <= l_max; ++l) {
        for (int a = -a_max; a <= a_max; ++a) {
          const long long loc = a + shift * l;
          all.push_back(loc);
          locs.insert(loc);
          positions.insert(((loc % static_cast<long long>(n)) + static_cast<long long>(n)) % static_cast<long long>(n));
        }
      }
      for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) min_gap = std::min(min_gap, std::llabs(all[i] - all[j]));
      }
      CHECK(locs.size() == all.size());
      if (all.size() > 1) CHECK(min_gap >= 1);
      CHECK(afdm::validate_separability(prof, n));
      CHECK(positions.size() == all.size());
    }
  }
}

TEST_CASE("guard_symbol_count") {
  CHECK(afdm::guard_symbol_count(GuardScheme::Afdm, {2, 3}) == 40);
  CHECK(afdm::guard_symbol_count(GuardScheme::Otfs, {2, 3}) == 64);
  CHECK(afdm::guard_symbol_count(GuardScheme::Afdm, {0, 0}) == 0);
  // Equal without delay spread, strictly fewer once l_max >= 1.
  for (int a = 0; a <= 8; ++a) {
    CHECK(afdm::guard_symbol_count(GuardScheme::Afdm, {0, a}) == afdm::guard_symbol_count(GuardScheme::Otfs, {0, a}));
  }
  for (int l = 1; l <= 8; ++l) {
    for (int a = 1; a <= 8; ++a) {
      CHECK(afdm::guard_symbol_count(GuardScheme::Afdm, {l, a}) < afdm::guard_symbol_count(GuardScheme::Otfs, {l, a}));
    }
  }
  CHECK_THROWS_AS(afdm::parse_guard_scheme("ofdm"), afdm::ConfigError);
}
