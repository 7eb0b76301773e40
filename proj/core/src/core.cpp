#include "pbn/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pbn {

ProblemParams::ProblemParams(double pi, double rho) : pi_(pi), rho_(rho) {
  if (!(pi > 0.0 && pi < 1.0)) {
    throw std::invalid_argument("class prior pi must lie in (0, 1), got " + std::to_string(pi));
  }
  // Small slack so that rho = 1 - pi computed in floating point is accepted.
  if (!(rho > 0.0 && rho <= 1.0 - pi + 1e-12)) {
    throw std::invalid_argument("rho must lie in (0, 1 - pi], got " + std::to_string(rho));
  }
}

std::vector<FeatureVector> PbnSplits::observed_pool() const {
  std::vector<FeatureVector> pool;
  pool.reserve(train_positive.size() + train_biased_negative.size());
  for (const auto& s : train_positive) pool.push_back(s.x);
  for (const auto& s : train_biased_negative) pool.push_back(s.x);
  return pool;
}

namespace {

void require_all(const SampleList& samples, Label y, Observation s, const char* what) {
  if (samples.empty()) throw std::invalid_argument(std::string(what) + " is empty");
  for (const auto& sample : samples) {
    if (sample.y != y || sample.s != s) {
      throw std::invalid_argument(std::string(what) + " contains a sample with the wrong (y, s)");
    }
  }
}

void require_both_labels(const SampleList& samples, const char* what) {
  const bool has_pos = std::any_of(samples.begin(), samples.end(),
                                   [](const Sample& s) { return s.y == Label::positive; });
  const bool has_neg = std::any_of(samples.begin(), samples.end(),
                                   [](const Sample& s) { return s.y == Label::negative; });
  if (!has_pos || !has_neg) throw std::invalid_argument(std::string(what) + " must contain both labels");
}

}  // namespace

void check_splits(const PbnSplits& splits) {
  require_all(splits.train_positive, Label::positive, Observation::observed, "train_positive");
  require_all(splits.train_biased_negative, Label::negative, Observation::observed,
              "train_biased_negative");
  require_all(splits.valid_positive, Label::positive, Observation::observed, "valid_positive");
  require_both_labels(splits.test, "test");
  require_both_labels(splits.fnr_estimation, "fnr_estimation");
}

bool LinearClassifier::finite() const {
  return std::isfinite(bias) &&
         std::all_of(weights.begin(), weights.end(), [](double w) { return std::isfinite(w); });
}

double margin(const LinearClassifier& clf, std::span<const double> x) {
  if (x.size() != clf.weights.size()) {
    throw std::invalid_argument("margin: feature dimension " + std::to_string(x.size()) +
                                " does not match classifier dimension " +
                                std::to_string(clf.weights.size()));
  }
  double value = clf.bias;
  for (std::size_t j = 0; j < x.size(); ++j) value += clf.weights[j] * x[j];
  return value;
}

Label classify(const LinearClassifier& clf, std::span<const double> x) {
  return margin(clf, x) >= 0.0 ? Label::positive : Label::negative;
}

double accuracy(const LinearClassifier& clf, std::span<const Sample> samples) {
  if (samples.empty()) throw std::invalid_argument("accuracy: empty sample list");
  std::size_t correct = 0;
  for (const auto& s : samples) {
    if (classify(clf, s.x) == s.y) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

LinearClassifier flipped(const LinearClassifier& clf) {
  LinearClassifier out = clf;
  for (double& w : out.weights) w = -w;
  out.bias = -out.bias;
  return out;
}

std::vector<FeatureVector> features(std::span<const Sample> samples) {
  std::vector<FeatureVector> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.x);
  return out;
}

}  // namespace pbn
