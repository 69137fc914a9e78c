#include <doctest.h>

#include <stdexcept>
#include <cmath>
#include <random>

#include "robinfem/functions.hpp"

using namespace robinfem;

TEST_CASE("truncate clamps and is the identity inside [-k,k]") {
  CHECK(truncate(7.0, 5.0) == 5.0);
  CHECK(truncate(-7.0, 5.0) == -5.0);
  CHECK(truncate(3.0, 5.0) == 3.0);
  CHECK(truncate(1e300, kInfinity) == 1e300);
}

TEST_CASE("truncate is 1-Lipschitz and odd on random pairs") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> d(-20.0, 20.0);
  std::uniform_real_distribution<double> kd(0.1, 10.0);
  for (int i = 0; i < 500; ++i) {
    const double a = d(rng), b = d(rng), k = kd(rng);
    CHECK(std::abs(truncate(a, k) - truncate(b, k)) <= std::abs(a - b) + 1e-15);
    CHECK(truncate(-a, k) == -truncate(a, k));
  }
}

TEST_CASE("v_delta branches") {
  CHECK(v_delta(0.5, 1.0) == 1.0);
  CHECK(v_delta(1.5, 1.0) == doctest::Approx(0.5));
  CHECK(v_delta(3.0, 1.0) == 0.0);
}

TEST_CASE("phi_t_eps branches") {
  CHECK(phi_t_eps(1.0, 2.0, 1.0) == 0.0);
  CHECK(phi_t_eps(2.5, 2.0, 1.0) == doctest::Approx(0.5));
  CHECK(phi_t_eps(4.0, 2.0, 1.0) == 1.0);
}

TEST_CASE("v_delta and phi_t_eps Lipschitz moduli") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-5.0, 15.0);
  for (int i = 0; i < 500; ++i) {
    const double a = d(rng), b = d(rng);
    CHECK(std::abs(v_delta(a, 2.0) - v_delta(b, 2.0)) <= 0.5 * std::abs(a - b) + 1e-15);
    CHECK(std::abs(phi_t_eps(a, 1.0, 0.25) - phi_t_eps(b, 1.0, 0.25)) <=
          4.0 * std::abs(a - b) + 1e-15);
    CHECK(phi_t_eps(std::max(a, b), 1.0, 0.25) >= phi_t_eps(std::min(a, b), 1.0, 0.25));
  }
}

TEST_CASE("integrability exponent of the boundary source") {
  CHECK(g_integrability_exponent(3, 0.0) == doctest::Approx(4.0 / 3.0));
  CHECK(g_integrability_exponent(3, 1.0) == doctest::Approx(1.0));
  CHECK(g_integrability_exponent(2, 7.0) == 1.0);
  for (double eta : {0.0, 0.3, 1.0, 5.0, 100.0}) {
    CHECK(g_integrability_exponent(2, eta) == 1.0);
  }
}

TEST_CASE("Marcinkiewicz exponents") {
  const auto e32 = marcinkiewicz_exponents(3, 2.0);
  CHECK(e32.interior == doctest::Approx(3.0));
  CHECK(e32.boundary == doctest::Approx(2.0));
  CHECK(e32.gradient == doctest::Approx(1.5));

  const auto e215 = marcinkiewicz_exponents(2, 1.5);
  CHECK(e215.interior == doctest::Approx(2.0));
  CHECK(e215.boundary == doctest::Approx(1.0));
  CHECK(e215.gradient == doctest::Approx(1.0));

  CHECK_THROWS_AS(marcinkiewicz_exponents(2, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(marcinkiewicz_exponents(3, 3.5), std::invalid_argument);
}

TEST_CASE("sigma power family: growth bound and truncation") {
  SigmaSpec sigma;  // sigma(s) = s
  CHECK(sigma.validate(2.0).empty());
  CHECK(sigma.truncated(5.0, 3.0) == 3.0);
  CHECK(sigma.truncated(2.0, 3.0) == 2.0);
  CHECK(sigma.value(0.0) == 0.0);

  // sigma(s) = s^2 fails sigma(s) >= s^{p-1} for p = 2 below s = 1.
  SigmaSpec bad;
  bad.exponent = 2.0;
  CHECK(!bad.validate(2.0).empty());
  // but satisfies it for p = 3.
  CHECK(bad.validate(3.0).empty());
}

TEST_CASE("sigma monotone on a log grid when flagged") {
  SigmaSpec tab;
  tab.family = SigmaSpec::Family::Tabulated;
  tab.samples = {{0.0, 0.0}, {1.0, 2.0}, {2.0, 1.0}, {1e7, 1e7}};  // dips
  tab.increasing = true;
  bool found = false;
  for (const auto& msg : tab.validate(1.5)) {
    if (msg.find("increasing") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("h truncation: bounded by n, equal to h below n, h_n(0) = n") {
  HSpec h;  // h(s) = 1/s
  CHECK(h.truncated(0.1, 4.0) == 4.0);   // T_4(10) = 4
  CHECK(h.truncated(2.0, 4.0) == 0.5);
  CHECK(h.truncated(0.0, 7.0) == 7.0);   // h(0) = inf only ever seen truncated
  CHECK(std::isinf(h.value(0.0)));
  CHECK_THROWS_AS(h.value(-1.0), std::invalid_argument);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(1e-6, 50.0);
  for (int i = 0; i < 300; ++i) {
    const double s = d(rng), n = 1.0 + d(rng);
    CHECK(h.truncated(s, n) <= n);
    if (h.value(s) <= n) CHECK(h.truncated(s, n) == h.value(s));
  }
}

TEST_CASE("h families: bounded and rational") {
  HSpec hb;
  hb.family = HSpec::Family::Bounded;
  hb.c1 = 2.5;
  CHECK(hb.value(0.0) == 2.5);
  CHECK(hb.value(100.0) == 2.5);
  CHECK(hb.validate().empty());

  HSpec hr;
  hr.family = HSpec::Family::Rational;
  hr.eta = 1.0;
  hr.c1 = 1.0;
  hr.shift = 0.5;
  CHECK(hr.value(0.0) == doctest::Approx(2.0));  // c1/shift
  CHECK(hr.value(0.5) == doctest::Approx(1.0));
  CHECK(hr.validate().empty());
}

TEST_CASE("truncated sigma example from the scheme") {
  SigmaSpec sigma;  // sigma(s) = s
  CHECK(sigma.truncated(5.0, 3.0) == 3.0);
  // derivative from the branch below the kink
  CHECK(sigma.truncated_derivative(2.0, 3.0) == 1.0);
  CHECK(sigma.truncated_derivative(5.0, 3.0) == 0.0);
  HSpec h;
  CHECK(h.truncated_derivative(0.1, 4.0) == 0.0);           // on the truncated branch
  CHECK(h.truncated_derivative(2.0, 4.0) == doctest::Approx(-0.25));  // -1/s^2
}
