#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "cdkn/detail/quad.hpp"
#include "cdkn/ptrig.hpp"

using namespace cdkn;

TEST_CASE("pi_p closed form against direct quadrature") {
  // pi_p / 2 = arcsin_p(1) = int_0^1 (1 - u^p)^{-1/p} du
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const double quad = ptrig::arcsin_p(p, 1.0);
    REQUIRE(std::abs(2.0 * quad - ptrig::pi_p(p)) < 1e-10);
  }
  REQUIRE(ptrig::pi_p(2.0) == Catch::Approx(std::numbers::pi).margin(1e-14));
}

TEST_CASE("p = 2 reduces to the classical functions") {
  for (double t = -7.0; t <= 7.0; t += 0.173) {
    REQUIRE(ptrig::sin_p(2.0, t) == Catch::Approx(std::sin(t)).margin(1e-12));
    REQUIRE(ptrig::cos_p(2.0, t) == Catch::Approx(std::cos(t)).margin(1e-12));
  }
  for (double s = -0.95; s <= 0.95; s += 0.1)
    REQUIRE(ptrig::arcsin_p(2.0, s) ==
            Catch::Approx(std::asin(s)).margin(1e-10));
}

TEST_CASE("pythagorean identity across p") {
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const double pip = ptrig::pi_p(p);
    double worst = 0.0;
    for (int k = -200; k <= 400; ++k) {
      const double t = k * pip / 100.0;
      const double s = ptrig::sin_p(p, t);
      const double c = ptrig::cos_p(p, t);
      worst = std::max(worst, std::abs(std::pow(std::abs(s), p) +
                                       std::pow(std::abs(c), p) - 1.0));
    }
    REQUIRE(worst <= 1e-10);
  }
}

TEST_CASE("sin_p is odd, 2*pi_p periodic, and reflects at pi_p/2") {
  for (double p : {1.5, 3.0, 4.0}) {
    const double pip = ptrig::pi_p(p);
    for (double t : {0.1, 0.5, 1.2, 0.49 * pip}) {
      REQUIRE(ptrig::sin_p(p, -t) ==
              Catch::Approx(-ptrig::sin_p(p, t)).margin(1e-11));
      REQUIRE(ptrig::sin_p(p, t + 2.0 * pip) ==
              Catch::Approx(ptrig::sin_p(p, t)).margin(1e-11));
      REQUIRE(ptrig::sin_p(p, pip - t) ==
              Catch::Approx(ptrig::sin_p(p, t)).margin(1e-11));
    }
    REQUIRE(ptrig::sin_p(p, 0.5 * pip) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(ptrig::sin_p(p, pip) == Catch::Approx(0.0).margin(1e-11));
  }
}

TEST_CASE("cos_p is the derivative of sin_p") {
  const double eps = 1e-6;
  for (double p : {1.5, 3.0, 4.0}) {
    const double pip = ptrig::pi_p(p);
    for (double t : {0.05, 0.3, 0.45 * pip, 0.7 * pip, 1.3 * pip}) {
      const double fd =
          (ptrig::sin_p(p, t + eps) - ptrig::sin_p(p, t - eps)) / (2 * eps);
      REQUIRE(ptrig::cos_p(p, t) == Catch::Approx(fd).margin(1e-7));
    }
  }
}

TEST_CASE("sampler matches the exact functions") {
  for (double p : {1.5, 3.0}) {
    ptrig::SinPSampler sp(p);
    const double pip = ptrig::pi_p(p);
    for (int k = -50; k <= 150; ++k) {
      const double t = k * pip / 40.0;
      REQUIRE(sp.sin(t) == Catch::Approx(ptrig::sin_p(p, t)).margin(1e-9));
      REQUIRE(sp.cos(t) == Catch::Approx(ptrig::cos_p(p, t)).margin(1e-8));
    }
  }
}

TEST_CASE("domain errors") {
  REQUIRE_THROWS_AS(ptrig::pi_p(1.0), std::domain_error);
  REQUIRE_THROWS_AS(ptrig::arcsin_p(2.0, 1.5), std::domain_error);
}
