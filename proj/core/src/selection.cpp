#include "pbn/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pbn {

KGrid::KGrid(std::vector<double> candidates) : candidates_(std::move(candidates)) {
  if (candidates_.empty()) throw std::invalid_argument("k grid must be non-empty");
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    if (!(candidates_[i] > 0.0) || !std::isfinite(candidates_[i])) {
      throw std::invalid_argument("k grid values must be positive and finite");
    }
    if (i > 0 && !(candidates_[i] > candidates_[i - 1])) {
      throw std::invalid_argument("k grid must be strictly ascending");
    }
  }
}

KGrid KGrid::synthetic_default() { return KGrid({0.3, 0.5, 0.7, 1.0, 1.5, 2.0, 4.0}); }

KGrid KGrid::benchmark_default() { return KGrid({0.5, 0.7, 0.9, 1.0, 1.2, 1.5, 2.0}); }

PhiPrior PhiPrior::given(double value) {
  if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument("phi must lie in [0, 1]");
  return {value, PhiSource::given, 1.0};
}

std::vector<KCandidate> train_candidates(const KGrid& grid, const TrainForK& train_for_k,
                                         std::span<const Sample> valid_positive) {
  if (valid_positive.empty()) throw std::invalid_argument("validation positives must be non-empty");
  std::vector<KCandidate> out;
  out.reserve(grid.candidates().size());
  for (const double k : grid.candidates()) {
    KCandidate c;
    c.k = k;
    try {
      c.classifier = train_for_k(k);
      c.fnr = evaluate_fnr(c.classifier, valid_positive);
      c.trained = true;
    } catch (const std::exception& e) {
      c.failure = e.what();
    }
    out.push_back(std::move(c));
  }
  return out;
}

KSelection choose_k(std::vector<KCandidate> candidates, const PhiPrior& phi) {
  KSelection result;
  const KCandidate* best = nullptr;
  double best_error = 0.0;
  // Candidates arrive in ascending k; strict improvement keeps the smaller k on ties.
  for (const auto& c : candidates) {
    if (!c.trained) {
      result.warnings.push_back("k=" + std::to_string(c.k) + " skipped: " + c.failure);
      continue;
    }
    const double err = (c.fnr - phi.value) * (c.fnr - phi.value);
    if (best == nullptr || err < best_error || (err == best_error && c.k < best->k)) {
      best = &c;
      best_error = err;
    }
  }
  if (best == nullptr) throw std::runtime_error("k selection failed: no candidate could be trained");
  result.k_star = best->k;
  result.classifier = best->classifier;
  result.squared_error = best_error;
  result.candidates = std::move(candidates);
  return result;
}

KSelection select_k(const KGrid& grid, const TrainForK& train_for_k,
                    std::span<const Sample> valid_positive, const PhiPrior& phi) {
  return choose_k(train_candidates(grid, train_for_k, valid_positive), phi);
}

PhiPrior estimate_phi(std::span<const Sample> fnr_dataset, const SgdConfig& config) {
  std::vector<FeatureVector> pos;
  std::vector<FeatureVector> neg;
  SampleList positives;
  for (const auto& s : fnr_dataset) {
    if (s.y == Label::positive) {
      pos.push_back(s.x);
      positives.push_back(s);
    } else {
      neg.push_back(s.x);
    }
  }
  if (pos.empty() || neg.empty()) {
    throw std::invalid_argument("estimate_phi: FNR-estimation set must contain both labels");
  }
  const double pi = static_cast<double>(pos.size()) / static_cast<double>(fnr_dataset.size());
  const LinearClassifier clf = train(EmpiricalRisk::pn(pos, neg, pi), config);
  return {evaluate_fnr(clf, positives), PhiSource::estimated, 1.0};
}

PhiPrior perturb_phi(const PhiPrior& phi, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("perturbation factor must be positive");
  return {std::min(c * phi.value, 1.0), PhiSource::perturbed, c};
}

}  // namespace pbn
