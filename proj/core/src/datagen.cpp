#include "pbn/datagen.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "pbn/random.hpp"

namespace pbn {

namespace {

enum SplitTag : std::uint64_t {
  kTrainPositive = 1,
  kTrainBiasedNegative,
  kValid,
  kTestPositive,
  kTestNegative,
  kFnrPositive,
  kFnrNegative,
};

FeatureVector gaussian_draw(const FeatureVector& mean, Rng& rng) {
  FeatureVector x(mean.size());
  for (std::size_t j = 0; j < mean.size(); ++j) x[j] = mean[j] + rng.normal();
  return x;
}

std::size_t draw_component(const std::array<double, 4>& probabilities, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < probabilities.size(); ++j) {
    if (probabilities[j] <= 0.0) continue;
    last_positive = j;
    cumulative += probabilities[j];
    if (u < cumulative) return j;
  }
  return last_positive;  // rounding leftovers
}

void require_positive_count(std::size_t n, const char* what) {
  if (n == 0) throw std::invalid_argument(std::string(what) + ": sample count must be positive");
}

MixtureDensity mixture_from(const NegativeMeans& means, const std::array<double, 4>& weights) {
  std::vector<GaussianComponent> components;
  std::vector<double> w;
  for (std::size_t j = 0; j < means.size(); ++j) {
    components.push_back({means[j], 1.0});
    w.push_back(weights[j]);
  }
  return MixtureDensity(std::move(components), std::move(w));
}

}  // namespace

NegativeMeans negative_means(Overlap overlap) {
  if (overlap == Overlap::large) {
    return {FeatureVector{1.0, 1.0}, FeatureVector{1.5, 1.5}, FeatureVector{2.0, 2.0},
            FeatureVector{2.5, 2.5}};
  }
  return {FeatureVector{2.0, 2.0}, FeatureVector{3.0, 3.0}, FeatureVector{4.0, 4.0},
          FeatureVector{5.0, 5.0}};
}

std::array<std::array<double, 4>, 4> proportional_settings() {
  return {{{0.25, 0.25, 0.25, 0.25},
           {0.40, 0.10, 0.35, 0.15},
           {0.15, 0.40, 0.10, 0.35},
           {0.35, 0.15, 0.40, 0.10}}};
}

std::array<double, 4> bias_probabilities(const BiasMode& bias) {
  if (const auto* single = std::get_if<SingleComponent>(&bias)) {
    if (single->index < 1 || single->index > 4) {
      throw std::invalid_argument("bias component index must be in 1..4");
    }
    std::array<double, 4> p{0.0, 0.0, 0.0, 0.0};
    p[static_cast<std::size_t>(single->index - 1)] = 1.0;
    return p;
  }
  const auto& p = std::get<Proportional>(bias).probabilities;
  double total = 0.0;
  for (const double v : p) {
    if (!(v >= 0.0)) throw std::invalid_argument("bias probabilities must be nonnegative");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("bias probabilities must sum to 1");
  return p;
}

SampleList sample_positive(std::size_t n, std::uint64_t seed) {
  require_positive_count(n, "sample_positive");
  Rng rng(seed);
  const FeatureVector origin{0.0, 0.0};
  SampleList out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({gaussian_draw(origin, rng), Label::positive, Observation::observed, 0});
  }
  return out;
}

SampleList sample_negative(std::size_t n, const NegativeMeans& means, std::uint64_t seed) {
  require_positive_count(n, "sample_negative");
  Rng rng(seed);
  SampleList out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(rng.below(4));
    out.push_back({gaussian_draw(means[j], rng), Label::negative, Observation::unobserved,
                   static_cast<int>(j + 1)});
  }
  return out;
}

SampleList sample_biased_negative(std::size_t n, const NegativeMeans& means, const BiasMode& bias,
                                  std::uint64_t seed) {
  require_positive_count(n, "sample_biased_negative");
  const auto probabilities = bias_probabilities(bias);
  Rng rng(seed);
  SampleList out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = draw_component(probabilities, rng);
    out.push_back({gaussian_draw(means[j], rng), Label::negative, Observation::observed,
                   static_cast<int>(j + 1)});
  }
  return out;
}

double default_rho(double pi, std::size_t n_positive, std::size_t n_biased_negative) {
  if (n_positive == 0) throw std::invalid_argument("default_rho: no positives");
  return pi * static_cast<double>(n_biased_negative) / static_cast<double>(n_positive);
}

Situation make_situation(const SituationSpec& spec, std::uint64_t seed, std::optional<double> rho) {
  const auto means = negative_means(spec.overlap);
  const auto probabilities = bias_probabilities(spec.bias);
  const SplitSizes& n = spec.sizes;

  PbnSplits splits;
  splits.train_positive = sample_positive(n.n_positive, derive_seed(seed, {kTrainPositive}));
  splits.train_biased_negative = sample_biased_negative(
      n.n_biased_negative, means, spec.bias, derive_seed(seed, {kTrainBiasedNegative}));
  splits.valid_positive = sample_positive(n.n_valid, derive_seed(seed, {kValid}));

  splits.test = sample_positive(n.n_test_positive, derive_seed(seed, {kTestPositive}));
  for (auto& s : sample_negative(n.n_test_negative, means, derive_seed(seed, {kTestNegative}))) {
    splits.test.push_back(std::move(s));
  }
  splits.fnr_estimation = sample_positive(n.n_fnr_positive, derive_seed(seed, {kFnrPositive}));
  for (auto& s : sample_negative(n.n_fnr_negative, means, derive_seed(seed, {kFnrNegative}))) {
    splits.fnr_estimation.push_back(std::move(s));
  }

  const double pi = static_cast<double>(n.n_test_positive) /
                    static_cast<double>(n.n_test_positive + n.n_test_negative);
  const ProblemParams params(pi, rho.value_or(default_rho(pi, n.n_positive, n.n_biased_negative)));

  return Situation{std::move(splits),
                   params,
                   MixtureDensity({{FeatureVector{0.0, 0.0}, 1.0}}, {1.0}),
                   mixture_from(means, probabilities),
                   mixture_from(means, {0.25, 0.25, 0.25, 0.25})};
}

void write_samples(std::ostream& out, std::span<const Sample> samples) {
  const auto precision = out.precision(17);
  for (const auto& s : samples) {
    for (const double v : s.x) out << v << '\t';
    out << sign_of(s.y) << '\t' << sign_of(s.s) << '\n';
  }
  out.precision(precision);
}

}  // namespace pbn
