#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pbn/datagen.hpp"
#include "pbn/density.hpp"
#include "pbn/random.hpp"

using namespace pbn;

namespace {

const double kInv2Pi = 1.0 / (2.0 * std::numbers::pi);

MixtureDensity single(FeatureVector mean) { return MixtureDensity({{std::move(mean), 1.0}}, {1.0}); }

}  // namespace

TEST_CASE("gaussian pdf values") {
  const GaussianComponent c{{1.0, -1.0}, 1.0};
  CHECK(gaussian_pdf(FeatureVector{1.0, -1.0}, c) == doctest::Approx(kInv2Pi).epsilon(1e-15));
  CHECK(gaussian_pdf(FeatureVector{2.0, 0.0}, c) == doctest::Approx(std::exp(-1.0) * kInv2Pi).epsilon(1e-15));
  CHECK(gaussian_pdf(FeatureVector{2.0, 0.0}, c) == doctest::Approx(0.0585498).epsilon(1e-6));
  CHECK_THROWS_AS(gaussian_pdf(FeatureVector{0.0, 0.0}, GaussianComponent{{0.0, 0.0}, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_pdf(FeatureVector{0.0}, c), std::invalid_argument);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const double v0 = rng.normal(), v1 = rng.normal();
    CHECK(gaussian_pdf(FeatureVector{1.0 + v0, -1.0 + v1}, c) ==
          doctest::Approx(gaussian_pdf(FeatureVector{1.0 - v0, -1.0 - v1}, c)).epsilon(1e-14));
  }
}

TEST_CASE("mixture pdf") {
  const GaussianComponent c{{0.5, 0.5}, 1.0};
  const FeatureVector x{0.1, 1.3};
  CHECK(mixture_pdf(x, single({0.5, 0.5})) == doctest::Approx(gaussian_pdf(x, c)).epsilon(1e-15));
  CHECK(mixture_pdf(x, MixtureDensity({c, c}, {0.5, 0.5})) == doctest::Approx(gaussian_pdf(x, c)).epsilon(1e-15));

  // Situation 2 negatives at the origin against a term-by-term sum.
  const auto means = negative_means(Overlap::small);
  std::vector<GaussianComponent> comps;
  double oracle = 0.0;
  for (const auto& m : means) {
    comps.push_back({m, 1.0});
    const double sq = m[0] * m[0] + m[1] * m[1];
    oracle += 0.25 * std::exp(-0.5 * sq) / (2.0 * std::numbers::pi);
  }
  const auto mix = MixtureDensity::uniform(comps);
  CHECK(std::abs(mixture_pdf(FeatureVector{0.0, 0.0}, mix) - oracle) <= 1e-14 * oracle + 1e-300);
  CHECK(mix.log_pdf(FeatureVector{0.0, 0.0}) == doctest::Approx(std::log(oracle)).epsilon(1e-13));

  CHECK_THROWS_AS(MixtureDensity({c}, {0.9}), std::invalid_argument);
  CHECK_THROWS_AS(MixtureDensity({c, c}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(MixtureDensity({c, c}, {1.5, -0.5}), std::invalid_argument);
}

TEST_CASE("kde pdf") {
  const KdeDensity one({{0.3, -0.2}}, 1.0);
  CHECK(kde_pdf(FeatureVector{0.3, -0.2}, one) == doctest::Approx(kInv2Pi).epsilon(1e-15));
  const KdeDensity repeated({{0.3, -0.2}, {0.3, -0.2}, {0.3, -0.2}}, 1.0);
  CHECK(kde_pdf(FeatureVector{1.0, 2.0}, repeated) ==
        doctest::Approx(kde_pdf(FeatureVector{1.0, 2.0}, one)).epsilon(1e-15));

  Rng rng(2);
  std::vector<FeatureVector> pts;
  for (int i = 0; i < 5; ++i) pts.push_back({rng.normal(), rng.normal()});
  const double h = 0.7;
  const KdeDensity kde(pts, h);
  for (int t = 0; t < 20; ++t) {
    const FeatureVector x{2 * rng.normal(), 2 * rng.normal()};
    double brute = 0.0;
    for (const auto& p : pts) {
      const double d0 = x[0] - p[0], d1 = x[1] - p[1];
      brute += std::exp(-(d0 * d0 + d1 * d1) / (2 * h * h)) / (2 * std::numbers::pi * h * h);
    }
    brute /= 5.0;
    CHECK(std::abs(kde_pdf(x, kde) - brute) <= 1e-14 * brute + 1e-300);
  }
  CHECK_THROWS_AS(KdeDensity({}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(KdeDensity({{0.0}}, 0.0), std::invalid_argument);
}

TEST_CASE("kde log density stays finite far from the support") {
  const KdeDensity kde({{0.0, 0.0}, {1.0, 0.0}}, 0.1);
  const FeatureVector far{50.0, 50.0};
  CHECK(kde_pdf(far, kde) == 0.0);
  const double lp = kde.log_pdf(far);
  CHECK(std::isfinite(lp));
  // nearest point dominates: log(0.5) - log(2 pi h^2) - |x - (1,0)|^2 / (2 h^2)
  const double expect = std::log(0.5) - std::log(2 * std::numbers::pi * 0.01) - (49.0 * 49.0 + 2500.0) / 0.02;
  CHECK(lp == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("kde integrates to one") {
  Rng rng(3);
  std::vector<FeatureVector> pts;
  for (int i = 0; i < 5; ++i) pts.push_back({rng.uniform() * 2 - 1, rng.uniform() * 2 - 1});
  const KdeDensity kde(pts, 1.0);
  const double lo = -8.0, hi = 8.0, area = (hi - lo) * (hi - lo);
  const int n = 400000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const FeatureVector x{lo + (hi - lo) * rng.uniform(), lo + (hi - lo) * rng.uniform()};
    sum += kde_pdf(x, kde);
  }
  CHECK(std::abs(area * sum / n - 1.0) < 0.02);
}

TEST_CASE("sigma tilde from analytic densities") {
  const ProblemParams params(0.5, 0.125);
  SUBCASE("equal densities") {
    const SigmaField field(single({0.0, 0.0}), single({0.0, 0.0}), params);
    CHECK(field.sigma_tilde(FeatureVector{0.4, -0.3}).value == doctest::Approx(0.625).epsilon(1e-14));
  }
  SUBCASE("biased-negative density negligible") {
    const SigmaField field(single({0.0, 0.0}), single({1000.0, 1000.0}), params);
    CHECK(field.sigma_tilde(FeatureVector{0.0, 0.0}).value == 1.0);
  }
  SUBCASE("positive density negligible") {
    const SigmaField field(single({1000.0, 1000.0}), single({0.0, 0.0}), params);
    CHECK(field.sigma_tilde(FeatureVector{0.0, 0.0}).value == doctest::Approx(0.25).epsilon(1e-14));
  }
}

TEST_CASE("sigma tilde lies in (0, 1] and grows with rho") {
  const auto means = negative_means(Overlap::large);
  Rng rng(4);
  for (const double pi : {0.25, 0.5, 0.8}) {
    const double rho_max = 1.0 - pi;
    const std::vector<double> rhos{0.01, 0.3 * rho_max, 0.7 * rho_max, rho_max};
    std::vector<SigmaField> fields;
    for (const double rho : rhos) {
      fields.emplace_back(single({0.0, 0.0}), single(means[1]), ProblemParams(pi, rho));
    }
    for (int i = 0; i < 1000; ++i) {
      const FeatureVector x{4.0 * rng.normal(), 4.0 * rng.normal()};
      double prev = 0.0;
      for (const auto& f : fields) {
        const auto s = f.sigma_tilde(x);
        CHECK(s.value > 0.0);
        CHECK(s.value <= 1.0);
        CHECK(s.value >= prev - 1e-15);
        prev = s.value;
      }
    }
  }
}

TEST_CASE("kde sigma tilde is capped at one") {
  // Observed-pool KDE concentrated where the positive KDE is thin pushes the
  // raw ratio above one.
  const ProblemParams params(0.5, 0.1);
  const SigmaField field(KdeDensity({{0.0, 0.0}}, 0.5), KdeDensity({{5.0, 5.0}}, 0.5),
                         KdeDensity({{0.0, 0.0}}, 0.2), params);
  const auto s = field.sigma_tilde(FeatureVector{0.0, 0.0});
  CHECK(s.value == 1.0);
  CHECK_FALSE(s.degenerate);
}

TEST_CASE("skew weights") {
  CHECK(skew_weight(1.0, 0.3, 0.01) == 0.0);
  CHECK(skew_weight(1.0, 4.0, 0.01) == 0.0);
  CHECK(skew_weight(0.5, 1.0, 0.01) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(skew_weight(0.2, 2.0, 0.01) == doctest::Approx(24.0).epsilon(1e-13));
  CHECK(skew_weight(1e-9, 1.0, 0.01) == doctest::Approx(99.0).epsilon(1e-13));
  CHECK(skew_weight(0.3, 3.0, 0.0) == doctest::Approx((1 - 0.027) / 0.027).epsilon(1e-13));
  CHECK_THROWS_AS(skew_weight(0.5, 0.0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(skew_weight(0.5, -1.0, 0.01), std::invalid_argument);

  Rng rng(5);
  const ProblemParams params(0.5, 0.1);
  const SigmaField field(single({0.0, 0.0}), single({1.0, 1.0}), params);
  for (int i = 0; i < 1000; ++i) {
    const FeatureVector x{5.0 * rng.normal(), 5.0 * rng.normal()};
    const double k = 0.1 + 5.0 * rng.uniform();
    const double w = field.weight(x, k);
    CHECK(w >= 0.0);
    CHECK(w <= 99.0 + 1e-12);
    const double s = field.sigma_tilde(x).value;
    const double t = std::clamp(s, 0.01, 1.0);
    CHECK(field.weight(x, 1.0) == doctest::Approx((1 - t) / t).epsilon(1e-12));
  }
}

TEST_CASE("sigma field validates its clip floor") {
  const ProblemParams params(0.5, 0.1);
  CHECK_THROWS_AS(SigmaField(single({0.0}), single({1.0}), params, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SigmaField(single({0.0}), single({1.0}), params, 1.0), std::invalid_argument);
}
