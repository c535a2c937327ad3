#include "doctest.h"

#include <cmath>

#include "afdm/effchan.hpp"
#include "afdm/error.hpp"
#include "afdm/modem.hpp"
#include "afdm/params.hpp"
#include "oracles.hpp"

using afdm::ChannelPath;
using afdm::ChannelProfile;
using afdm::ChannelRealization;
using afdm::ComplexMatrix;
using afdm::ComplexVector;
using afdm::cplx;
using afdm::ModemParams;

namespace {

ModemParams afdm_params(std::size_t n, const ChannelProfile& prof) {
  return afdm::scheme_params(afdm::Scheme::Afdm, prof, n);
}

ChannelRealization integral_channel(std::size_t n, const ChannelProfile& prof, afdm::RandomStream& rng) {
  std::vector<ChannelPath> paths;
  for (int l = 0; l <= prof.l_max; ++l) {
    for (int a = -prof.alpha_max; a <= prof.alpha_max; ++a) {
      if (rng.uniform() < 0.4) paths.push_back({rng.complex_normal(1.0), static_cast<double>(a), l});
    }
  }
  if (paths.empty()) paths.push_back({rng.complex_normal(1.0), 0.0, 0});
  return ChannelRealization(paths, n);
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("place_path") {
  const ModemParams p = afdm_params(8, {1, 1});
  SUBCASE("two-path example") {
    const auto a = afdm::place_path({cplx{1, 0}, -1.0, 0}, p);
    const auto b = afdm::place_path({cplx{1, 0}, 1.0, 1}, p);
    REQUIRE(a.loc.has_value());
    REQUIRE(b.loc.has_value());
    CHECK(*a.loc == -1);
    CHECK(*b.loc == 4);
    CHECK(*a.position_row0 == 7);
    CHECK(*b.position_row0 == 4);
  }
  SUBCASE("fractional Doppler has no placement") {
    CHECK_FALSE(afdm::place_path({cplx{1, 0}, 0.5, 0}, p).loc.has_value());
    ModemParams q = p;
    q.c1 = 0.1;
    CHECK_FALSE(afdm::place_path({cplx{1, 0}, 1.0, 1}, q).loc.has_value());
    CHECK(afdm::place_path({cplx{1, 0}, 1.0, 0}, q).loc.has_value());
  }
}

TEST_CASE("build_heff_matrix") {
  SUBCASE("single static unit path is the identity") {
    const ModemParams p = afdm_params(8, {1, 1});
    const ChannelRealization ch({{cplx{1, 0}, 0.0, 0}}, 8);
    CHECK(max_abs(afdm::build_heff_matrix(ch, p).h_eff - ComplexMatrix::Identity(8, 8)) < 1e-12);
  }
  SUBCASE("OFDM with zero Doppler is diagonal") {
    const ModemParams p = afdm::scheme_params(afdm::Scheme::Ofdm, {3, 0}, 16);
    const ChannelRealization ch({{cplx{0.5, 0.2}, 0.0, 0}, {cplx{-0.3, 0.7}, 0.0, 2}, {cplx{0.1, 0}, 0.0, 3}}, 16);
    const ComplexMatrix h = afdm::build_heff_matrix(ch, p).h_eff;
    ComplexMatrix off = h;
    off.diagonal().setZero();
    CHECK(max_abs(off) < 1e-12);
  }
  SUBCASE("matches the explicit conjugation") {
    afdm::RandomStream rng(31, 1);
    for (int rep = 0; rep < 10; ++rep) {
      const std::size_t n = 6 + rng.next_u32() % 12;
      const ModemParams p = [&] {
        ModemParams q;
        q.n = n;
        q.c1 = rng.uniform();
        q.c2 = rng.uniform();
        return q;
      }();
      const ChannelRealization ch({{rng.complex_normal(1.0), rng.uniform() * 3 - 1.5, 1}, {cplx{1, 0}, 0.25, 2}}, n);
      CHECK(max_abs(afdm::build_heff_matrix(ch, p).h_eff - oracle::conjugated_heff(ch, p.c1, p.c2)) < 1e-10);
    }
  }
  SUBCASE("singular values match the time-domain matrix") {
    const ModemParams p = afdm_params(16, {2, 2});
    afdm::RandomStream rng(31, 2);
    const ChannelRealization ch = integral_channel(16, {2, 2}, rng);
    const Eigen::VectorXd sv_eff = Eigen::JacobiSVD<ComplexMatrix>(afdm::build_heff_matrix(ch, p).h_eff).singularValues();
    const Eigen::VectorXd sv_td = Eigen::JacobiSVD<ComplexMatrix>(afdm::channel_matrix(ch, p.c1)).singularValues();
    CHECK((sv_eff - sv_td).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("closed form agrees with conjugation") {
  afdm::RandomStream rng(31, 3);
  int checked = 0;
  for (std::size_t n : {8u, 12u, 16u, 32u}) {
    for (int l_max = 0; l_max <= 2; ++l_max) {
      for (int a_max = 0; a_max <= 2; ++a_max) {
        const ChannelProfile prof{l_max, a_max};
        if (!afdm::validate_separability(prof, n)) continue;
        ModemParams p = afdm_params(n, prof);
        p.c2 = rng.uniform() * 0.2;
        const ChannelRealization ch = integral_channel(n, prof, rng);
        const ComplexMatrix expected = oracle::conjugated_heff(ch, p.c1, p.c2);
        CHECK(max_abs(afdm::heff_closed_form(ch, p).h_eff - expected) < 1e-9);
        ++checked;
      }
    }
  }
  CHECK(checked >= 30);

  SUBCASE("odd N with a nontrivial prefix phase") {
    ModemParams p;
    p.n = 9;
    p.c1 = 3.0 / 18.0;
    p.c2 = 0.037;
    const ChannelRealization ch({{cplx{0.3, 0.4}, 1.0, 2}, {cplx{1, 0}, -2.0, 1}}, 9);
    CHECK(max_abs(afdm::heff_closed_form(ch, p).h_eff - oracle::conjugated_heff(ch, p.c1, p.c2)) < 1e-9);
  }
  SUBCASE("fractional Doppler is rejected") {
    const ModemParams p = afdm_params(8, {1, 1});
    const ChannelRealization ch({{cplx{1, 0}, 0.5, 0}}, 8);
    CHECK_THROWS_AS(afdm::heff_closed_form(ch, p), afdm::PreconditionError);
  }
}

TEST_CASE("each path occupies one entry per row") {
  afdm::RandomStream rng(31, 4);
  const std::size_t n = 32;
  const ChannelProfile prof{2, 2};
  const ModemParams p = afdm_params(n, prof);
  for (int l = 0; l <= 2; ++l) {
    for (int a = -2; a <= 2; ++a) {
      const ChannelPath path{cplx{1, 0}, static_cast<double>(a), l};
      const ComplexMatrix h = afdm::build_heff_matrix(ChannelRealization({path}, n), p).h_eff;
      const long long loc = *afdm::place_path(path, p).loc;
      for (std::size_t row = 0; row < n; ++row) {
        const std::size_t col = static_cast<std::size_t>((static_cast<long long>(row) + loc + 4 * 32) % 32);
        for (std::size_t c = 0; c < n; ++c) {
          const double mag = std::abs(h(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)));
          REQUIRE(mag == doctest::Approx(c == col ? 1.0 : 0.0).epsilon(1e-9).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("general row with fractional Doppler") {
  afdm::RandomStream rng(31, 5);
  SUBCASE("dirichlet_sum") {
    CHECK(afdm::dirichlet_sum(0.0, 8) == cplx{8.0, 0.0});
    CHECK(std::abs(afdm::dirichlet_sum(3.0, 8)) < 1e-13);
    for (int rep = 0; rep < 50; ++rep) {
      const double theta = rng.uniform() * 40 - 20;
      cplx direct{0.0, 0.0};
      for (int k = 0; k < 16; ++k) direct += oracle::expj(-2.0 * oracle::kPi * theta * k / 16.0);
      CHECK(std::abs(afdm::dirichlet_sum(theta, 16) - direct) < 1e-11);
    }
  }
  SUBCASE("rows match conjugation") {
    for (int rep = 0; rep < 20; ++rep) {
      const std::size_t n = 8 + 2 * (rng.next_u32() % 8);
      const ChannelProfile prof{1, 1};
      const ModemParams p = afdm_params(n, prof);
      std::vector<ChannelPath> paths = {{rng.complex_normal(1.0), rng.uniform() * 3 - 1.5, 0},
                                        {rng.complex_normal(1.0), 0.5, 1}};
      const ChannelRealization ch(paths, n);
      const ComplexMatrix full = oracle::conjugated_heff(ch, p.c1, p.c2);
      for (std::size_t row : {std::size_t{0}, n / 2, n - 1}) {
        const ComplexVector r = afdm::heff_general_row(ch, p, row);
        CHECK((r.transpose() - full.row(static_cast<Eigen::Index>(row))).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }
  SUBCASE("integer Doppler reduces to the closed form") {
    const ModemParams p = afdm_params(16, {2, 2});
    const ChannelRealization ch = integral_channel(16, {2, 2}, rng);
    const ComplexMatrix closed = afdm::heff_closed_form(ch, p).h_eff;
    for (std::size_t row = 0; row < 16; ++row) {
      CHECK((afdm::heff_general_row(ch, p, row).transpose() - closed.row(static_cast<Eigen::Index>(row)))
                .cwiseAbs()
                .maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("path_matrix") {
  const ModemParams p = afdm_params(8, {1, 1});
  const ChannelPath path{cplx{3.0, -1.0}, 1.0, 1};
  const ComplexMatrix unit = afdm::path_matrix(path, p);
  const ChannelRealization single({{cplx{1, 0}, 1.0, 1}}, 8);
  CHECK(max_abs(unit - oracle::conjugated_heff(single, p.c1, p.c2)) < 1e-10);
  const ChannelPath frac{cplx{1, 0}, 0.3, 1};
  CHECK(max_abs(afdm::path_matrix(frac, p) - oracle::conjugated_heff(ChannelRealization({frac}, 8), p.c1, p.c2)) <
        1e-10);
}

TEST_CASE("OCDM chirp rate lets distinct paths collide") {
  const ModemParams p = afdm::scheme_params(afdm::Scheme::Ocdm, {1, 1}, 8);
  const auto a = afdm::place_path({cplx{1, 0}, 1.0, 0}, p);
  const auto b = afdm::place_path({cplx{1, 0}, 0.0, 1}, p);
  CHECK(*a.position_row0 == *b.position_row0);
}

TEST_CASE("recover_profile") {
  SUBCASE("two-path example") {
    const ModemParams p = afdm_params(8, {1, 1});
    const ChannelRealization ch({{cplx{0.8, -0.1}, -1.0, 0}, {cplx{-0.2, 0.5}, 1.0, 1}}, 8);
    const auto rec = afdm::recover_profile(afdm::build_heff_matrix(ch, p), p, {1, 1});
    REQUIRE(rec.size() == 2);
    CHECK(rec[0].delay == 0);
    CHECK(rec[0].doppler == -1);
    CHECK(std::abs(rec[0].gain - cplx{0.8, -0.1}) < 1e-10);
    CHECK(rec[1].delay == 1);
    CHECK(rec[1].doppler == 1);
    CHECK(std::abs(rec[1].gain - cplx{-0.2, 0.5}) < 1e-10);
  }
  SUBCASE("single path with a random gain") {
    afdm::RandomStream rng(31, 6);
    const ModemParams p = afdm_params(32, {2, 2});
    const cplx g = rng.complex_normal(1.0);
    const auto rec = afdm::recover_profile(afdm::build_heff_matrix(ChannelRealization({{g, -2.0, 2}}, 32), p), p, {2, 2});
    REQUIRE(rec.size() == 1);
    CHECK(rec[0].delay == 2);
    CHECK(rec[0].doppler == -2);
    CHECK(std::abs(rec[0].gain - g) < 1e-10);
  }
  SUBCASE("full 21-path grid at N = 64") {
    afdm::RandomStream rng(31, 7);
    const ChannelProfile prof{2, 3};
    const ModemParams p = afdm_params(64, prof);
    std::vector<ChannelPath> paths;
    for (int l = 0; l <= 2; ++l) {
      for (int a = -3; a <= 3; ++a) paths.push_back({rng.complex_normal(1.0 / 21.0), static_cast<double>(a), l});
    }
    const ChannelRealization ch(paths, 64);
    const auto rec = afdm::recover_profile(afdm::heff_closed_form(ch, p), p, prof);
    REQUIRE(rec.size() == 21);
    for (std::size_t k = 0; k < 21; ++k) {
      CHECK(rec[k].delay == paths[k].delay);
      CHECK(rec[k].doppler == static_cast<int>(paths[k].doppler));
      CHECK(std::abs(rec[k].gain - paths[k].gain) < 1e-10);
    }
  }
  SUBCASE("every admissible subset of a small grid") {
    const ChannelProfile prof{1, 1};
    const ModemParams p = afdm_params(8, prof);
    for (unsigned mask = 1; mask < 64; ++mask) {
      std::vector<ChannelPath> paths;
      int bit = 0;
      for (int l = 0; l <= 1; ++l) {
        for (int a = -1; a <= 1; ++a, ++bit) {
          if (mask & (1u << bit)) paths.push_back({cplx{1.0 + bit, 0.5 * bit}, static_cast<double>(a), l});
        }
      }
      const auto rec = afdm::recover_profile(afdm::build_heff_matrix(ChannelRealization(paths, 8), p), p, prof);
      REQUIRE(rec.size() == paths.size());
      for (std::size_t k = 0; k < paths.size(); ++k) {
        CHECK(rec[k].delay == paths[k].delay);
        CHECK(rec[k].doppler == static_cast<int>(paths[k].doppler));
        CHECK(std::abs(rec[k].gain - paths[k].gain) < 1e-10);
      }
    }
  }
  SUBCASE("errors") {
    const ModemParams p = afdm_params(8, {1, 1});
    const auto e = afdm::build_heff_matrix(ChannelRealization({{cplx{1, 0}, 0.0, 0}}, 8), p);
    CHECK_THROWS_AS(afdm::recover_profile(e, p, {3, 1}), afdm::RuntimeError);
    ModemParams q = p;
    q.c1 = 0.1;
    CHECK_THROWS_AS(afdm::recover_profile(e, q, {1, 1}), afdm::PreconditionError);
  }
}
