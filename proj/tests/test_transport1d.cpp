#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cdkn/transport1d.hpp"
#include "test_support.hpp"

using namespace cdkn;
using density::GridDensity;
using transport1d::IntervalSet;
using transport1d::Measure1D;

namespace {
GridDensity uniform(double a, double b, std::size_t n = 801) {
  return GridDensity(a, (b - a) / (n - 1), std::vector<double>(n, 1.0));
}
}  // namespace

TEST_CASE("cdf and quantile invert each other on the uniform measure") {
  const auto mu = Measure1D::from_density(uniform(0.0, 1.0));
  for (double v = 0.0; v <= 1.0; v += 0.05) {
    REQUIRE(transport1d::quantile(mu, v) == Catch::Approx(v).margin(1e-12));
    REQUIRE(transport1d::cdf_at(mu, v) == Catch::Approx(v).margin(1e-12));
  }
}

TEST_CASE("w2 between shifted uniforms equals the shift") {
  const auto mu0 = Measure1D::from_density(uniform(0.0, 1.0));
  const auto mu1 = Measure1D::from_density(uniform(0.75, 1.75));
  REQUIRE(transport1d::w2(mu0, mu1) == Catch::Approx(0.75).margin(1e-10));
  REQUIRE(transport1d::w2(mu0, mu0) == Catch::Approx(0.0).margin(1e-13));
}

TEST_CASE("monotone map between uniforms is affine") {
  const auto mu0 = Measure1D::from_density(uniform(0.0, 1.0));
  const auto mu1 = Measure1D::from_density(uniform(0.0, 2.0));
  const auto T = transport1d::monotone_map(mu0, mu1);
  for (std::size_t i = 0; i < T.size(); ++i)
    REQUIRE(T[i] == Catch::Approx(2.0 * mu0.grid.node(i)).margin(1e-10));
}

TEST_CASE("relative entropy basics") {
  const auto ref = Measure1D::from_density(uniform(0.0, 1.0));
  REQUIRE(transport1d::entropy_relative(ref, ref) ==
          Catch::Approx(0.0).margin(1e-12));
  // tilted measure has strictly positive entropy
  GridDensity g = uniform(0.0, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    g.values[i] = 1.0 + 0.8 * std::sin(6.28 * g.node(i));
  const auto mu = Measure1D::from_density(g);
  REQUIRE(transport1d::entropy_relative(mu, ref) > 0.0);
}

TEST_CASE("interval set arithmetic") {
  IntervalSet a{{0.0, 1.0}, {1.0, 2.0}, {3.0, 4.0}};
  a.normalize();
  REQUIRE(a.parts.size() == 2);
  REQUIRE(a.parts[0].second == 2.0);

  IntervalSet A0{{0.0, 1.0}}, A1{{2.0, 3.0}};
  const auto At = transport1d::intermediate_set(A0, A1, 0.5);
  REQUIRE(At.parts.size() == 1);
  REQUIRE(At.parts[0].first == Catch::Approx(1.0));
  REQUIRE(At.parts[0].second == Catch::Approx(2.0));

  // K >= 0 extremal theta is the closest-approach distance
  REQUIRE(transport1d::theta_extremal(A0, A1, 1.0) == Catch::Approx(1.0));
  // sets that touch have theta 0
  IntervalSet B{{0.5, 2.5}};
  REQUIRE(transport1d::theta_extremal(A0, B, 1.0) == 0.0);
  // K < 0 uses the farthest pair
  REQUIRE(transport1d::theta_extremal(A0, A1, -1.0) == Catch::Approx(3.0));
}

TEST_CASE("interval masses are exact for piecewise-linear densities") {
  const auto h = uniform(0.0, 2.0);
  REQUIRE(transport1d::mass_on_interval(h, 0.3, 0.7) ==
          Catch::Approx(0.4).margin(1e-12));
  REQUIRE(transport1d::mass_on_interval(h, -1.0, 0.5) ==
          Catch::Approx(0.5).margin(1e-12));
  IntervalSet s{{0.0, 0.5}, {1.0, 1.25}};
  REQUIRE(transport1d::mass_on_set(h, s) == Catch::Approx(0.75).margin(1e-12));
}

TEST_CASE("flat Brunn-Minkowski equality case") {
  const auto h = uniform(0.0, 1.0, 2001);
  IntervalSet A0{{0.1, 0.3}}, A1{{0.6, 0.8}};
  for (double t : {0.25, 0.5, 0.75}) {
    const auto rep = transport1d::verify_bm(h, 0.0, 2.0, A0, A1, t);
    REQUIRE(rep.holds);
    REQUIRE(std::abs(rep.slack) <= 1e-10);
  }
}

TEST_CASE("random CD densities satisfy the inequality") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (auto [K, N, D] : {std::tuple{0.0, 2.0, 1.0}, {1.0, 2.0, 2.5},
                         {-1.0, 3.0, 2.0}}) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto h = testsupport::random_cd_density(K, N, D, rng);
      const double a0 = unif(rng) * 0.6 * D;
      const double b0 = a0 + (0.05 + 0.3 * unif(rng)) * D;
      const double a1 = unif(rng) * 0.6 * D;
      const double b1 = a1 + (0.05 + 0.3 * unif(rng)) * D;
      IntervalSet A0{{a0, std::min(b0, D)}}, A1{{a1, std::min(b1, D)}};
      const double t = 0.1 + 0.8 * unif(rng);
      const auto rep = transport1d::verify_bm(h, K, N, A0, A1, t);
      INFO("K=" << K << " N=" << N << " trial=" << trial
                << " slack=" << rep.slack);
      REQUIRE(rep.slack >= -1e-9);
    }
  }
}

TEST_CASE("infinite coefficient is reported as a violation flag") {
  const auto h = uniform(0.0, 10.0);
  IntervalSet A0{{0.0, 1.0}}, A1{{9.0, 10.0}};
  // K theta^2 beyond (N-1) pi^2 forces tau = +infinity
  const auto rep = transport1d::verify_bm(h, 5.0, 2.0, A0, A1, 0.5);
  REQUIRE(rep.infinite_coefficient);
  REQUIRE_FALSE(rep.holds);
}
