#include <doctest.h>

#include "oracles.hpp"
#include "unimaj/numerics.hpp"
#include "unimaj/rng.hpp"

#include <cmath>
#include <limits>

using namespace unimaj;

TEST_CASE("normal tail matches quadrature of the density") {
  for (double x : {-2.0, 0.0, 0.5, 1.0, 3.0, 8.0}) {
    const double ref = oracle::quad_to_inf([](double z) { return oracle::phi(z); }, x);
    CHECK(numerics::normal_sf(x) == doctest::Approx(ref).epsilon(1e-12));
  }
  CHECK(numerics::normal_cdf(0.0) == doctest::Approx(0.5));
}

TEST_CASE("adaptive Gauss-Kronrod on smooth, peaked and infinite ranges") {
  auto r1 = numerics::integrate([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12);
  CHECK(r1.value == doctest::Approx(std::expm1(1.0)).epsilon(1e-13));

  auto r2 = numerics::integrate([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, 1e-10);
  CHECK(r2.value == doctest::Approx(2.0 * std::atan(1.0 / 1e-2) / 1e-2).epsilon(1e-9));

  auto r3 = numerics::integrate([](double x) { return std::exp(-x); }, 0.0,
                                std::numeric_limits<double>::infinity(), 1e-10);
  CHECK(r3.value == doctest::Approx(1.0).epsilon(1e-10));

  CHECK(numerics::integrate([](double) { return 1.0; }, 2.0, 2.0, 1e-10).value == 0.0);
}

TEST_CASE("non-convergent quadrature reports the achieved tolerance") {
  // 1/sqrt(x) spikes with oscillation: unreachable at this tolerance.
  auto nasty = [](double x) { return std::sin(1.0 / x) / x; };
  try {
    numerics::integrate(nasty, 1e-9, 1.0, 1e-14);
    FAIL("expected QuadratureError");
  } catch (const numerics::QuadratureError& e) {
    CHECK(e.achieved_rel_tol() > 1e-14);
  }
}

TEST_CASE("bisection brackets a root") {
  const double root = numerics::bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
  CHECK(root == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(numerics::bisect([](double x) { return x * x + 1.0; }, 0.0, 1.0, 1e-9),
                  std::domain_error);
}

TEST_CASE("Philox4x32-10 known-answer vectors") {
  const auto zero = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(zero[0] == 0x6627e8d5u);
  CHECK(zero[1] == 0xe169c58du);
  CHECK(zero[2] == 0xbc57ac4cu);
  CHECK(zero[3] == 0x9b00dbd8u);
  const auto ones = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                               {0xffffffffu, 0xffffffffu});
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);
}

TEST_CASE("streams are reproducible and distinct") {
  RandomStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
    CHECK(va != c.next_u64());
    CHECK(va != d.next_u64());
  }
}

TEST_CASE("uniform and normal draws have the right first two moments") {
  RandomStream rng(2024, 0);
  constexpr int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  // 5 standard errors
  CHECK(std::abs(su / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sn / n) < 5.0 / std::sqrt(double(n)));
  CHECK(std::abs(sn2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
}
