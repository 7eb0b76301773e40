#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pbn/losses.hpp"
#include "pbn/random.hpp"

using namespace pbn;

TEST_CASE("logistic loss reference values") {
  CHECK(logistic_loss(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  // log(1 + e^-50) from a 50-digit arbitrary-precision evaluation
  CHECK(logistic_loss(50.0) == doctest::Approx(1.928749847963917783e-22).epsilon(1e-14));
  CHECK(logistic_loss(10.0) == doctest::Approx(4.5398899216864646769e-05).epsilon(1e-14));
  CHECK(logistic_loss(-1000.0) == doctest::Approx(1000.0).epsilon(1e-15));
  CHECK(std::isfinite(logistic_loss(-1e300)));
}

TEST_CASE("logistic loss satisfies l(-z) - l(z) = z") {
  for (const double z : {-3.0, 0.5, 10.0}) {
    CHECK(logistic_loss(-z) - logistic_loss(z) == doctest::Approx(z).epsilon(1e-14));
  }
}

TEST_CASE("non-finite inputs are rejected") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(logistic_loss(inf), std::invalid_argument);
  CHECK_THROWS_AS(logistic_loss(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(logistic_loss_grad(-inf), std::invalid_argument);
}

TEST_CASE("logistic gradient") {
  CHECK(logistic_loss_grad(0.0) == -0.5);
  CHECK(logistic_loss_grad(800.0) <= 0.0);
  CHECK(logistic_loss_grad(800.0) > -1e-300);
  CHECK(logistic_loss_grad(-800.0) == doctest::Approx(-1.0));
  const double h = 1e-6;
  const double fd = (logistic_loss(1.0 + h) - logistic_loss(1.0 - h)) / (2 * h);
  CHECK(std::abs(logistic_loss_grad(1.0) - fd) < 1e-8);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double z = 40.0 * (rng.uniform() - 0.5);
    const double g = logistic_loss_grad(z);
    CHECK(g < 0.0);
    CHECK(g > -1.0);
  }
}

TEST_CASE("zero-one loss") {
  CHECK(zero_one_loss(2.0) == 0.0);
  CHECK(zero_one_loss(-2.0) == 1.0);
  CHECK(zero_one_loss(0.0) == 0.5);
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double z = rng.normal();
    CHECK(zero_one_loss(z) + zero_one_loss(-z) == 1.0);
  }
}

TEST_CASE("logistic loss is positive, decreasing and convex") {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double z1 = 60.0 * (rng.uniform() - 0.5);
    const double z2 = 60.0 * (rng.uniform() - 0.5);
    const double t = rng.uniform();
    CHECK(logistic_loss(z1) > 0.0);
    CHECK(logistic_loss(t * z1 + (1 - t) * z2) <= t * logistic_loss(z1) + (1 - t) * logistic_loss(z2) + 1e-12);
    if (z1 < z2) CHECK(logistic_loss(z1) >= logistic_loss(z2));
  }
}
