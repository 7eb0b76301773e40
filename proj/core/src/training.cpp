#include "pbn/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pbn/losses.hpp"
#include "pbn/random.hpp"

namespace pbn {

namespace {

LinearClassifier initial_parameters(std::size_t dim, const SgdConfig& config, Rng& rng) {
  LinearClassifier clf(dim);
  if (config.init == InitKind::small_gaussian) {
    for (double& w : clf.weights) w = config.init_scale * rng.normal();
    clf.bias = config.init_scale * rng.normal();
  }
  return clf;
}

void check_config(const SgdConfig& config) {
  if (!(config.learning_rate >= 0.0) || !std::isfinite(config.learning_rate)) {
    throw std::invalid_argument("learning rate must be finite and >= 0");
  }
  if (config.epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (config.batch_size == 0) throw std::invalid_argument("batch size must be positive");
}

}  // namespace

LinearClassifier train(const EmpiricalRisk& risk, const SgdConfig& config,
                       const EpochObserver& observer) {
  check_config(config);
  Rng rng(config.seed);
  LinearClassifier clf = initial_parameters(risk.dim(), config, rng);

  const std::size_t strata = risk.stratum_count();
  std::size_t smallest = risk.stratum_size(0);
  for (std::size_t s = 1; s < strata; ++s) smallest = std::min(smallest, risk.stratum_size(s));
  const std::size_t n = risk.sample_count();
  const std::size_t batches =
      std::max<std::size_t>(1, std::min((n + config.batch_size - 1) / config.batch_size, smallest));

  std::vector<std::vector<std::size_t>> order(strata);
  for (std::size_t s = 0; s < strata; ++s) {
    order[s].resize(risk.stratum_size(s));
    std::iota(order[s].begin(), order[s].end(), std::size_t{0});
  }

  Batch batch(strata);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (batches > 1) {
      for (auto& idx : order) shuffle(std::span<std::size_t>(idx), rng);
    }
    for (std::size_t b = 0; b < batches; ++b) {
      for (std::size_t s = 0; s < strata; ++s) {
        const std::size_t size = order[s].size();
        const auto first = order[s].begin() + static_cast<std::ptrdiff_t>(b * size / batches);
        const auto last = order[s].begin() + static_cast<std::ptrdiff_t>((b + 1) * size / batches);
        batch[s].assign(first, last);
      }
      const Gradient grad = risk.gradient(clf, batch);
      for (std::size_t j = 0; j < clf.weights.size(); ++j) {
        clf.weights[j] -= config.learning_rate * grad.weights[j];
      }
      clf.bias -= config.learning_rate * grad.bias;
      if (!clf.finite()) {
        throw DivergenceError("SGD diverged at epoch " + std::to_string(epoch) +
                              ": parameters are no longer finite");
      }
    }
    if (observer) {
      const double value = risk.value(clf);
      if (!std::isfinite(value)) {
        throw DivergenceError("SGD diverged at epoch " + std::to_string(epoch) +
                              ": risk is not finite");
      }
      observer(epoch, clf, value);
    }
  }
  const double final_risk = risk.value(clf);
  if (!std::isfinite(final_risk)) throw DivergenceError("SGD diverged: final risk is not finite");
  return clf;
}

double evaluate_fnr(const LinearClassifier& clf, std::span<const Sample> positives) {
  if (positives.empty()) throw std::invalid_argument("evaluate_fnr: empty positive set");
  double total = 0.0;
  for (const auto& s : positives) {
    if (s.y != Label::positive) throw std::invalid_argument("evaluate_fnr: sample is not positive");
    total += zero_one_loss(margin(clf, s.x));
  }
  return total / static_cast<double>(positives.size());
}

}  // namespace pbn
