#include "pbn/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pbn/losses.hpp"

namespace pbn {

namespace {

void require_nonempty(std::span<const FeatureVector> points, const char* what) {
  if (points.empty()) throw std::invalid_argument(std::string(what) + " must be non-empty");
}

std::size_t common_dim(std::initializer_list<std::span<const FeatureVector>> groups) {
  std::size_t dim = 0;
  bool seen = false;
  for (const auto& group : groups) {
    for (const auto& x : group) {
      if (!seen) {
        dim = x.size();
        seen = true;
      } else if (x.size() != dim) {
        throw std::invalid_argument("risk: feature vectors differ in dimension");
      }
    }
  }
  return dim;
}

void require_matching(std::size_t points, std::size_t scales, const char* what) {
  if (points != scales) {
    throw std::invalid_argument(std::string(what) + ": expected one weight per sample");
  }
}

}  // namespace

EmpiricalRisk::EmpiricalRisk(RiskKind kind, std::vector<Stratum> strata, std::vector<Term> terms,
                             ScaleForm form)
    : kind_(kind), strata_(std::move(strata)), terms_(std::move(terms)), form_(form) {
  dim_ = strata_.front().points.front().size();
  // Canonical order: lexicographic on (point, scale).
  for (auto& stratum : strata_) {
    std::vector<std::size_t> order(stratum.points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const bool scaled = !stratum.scales.empty();
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (stratum.points[a] != stratum.points[b]) return stratum.points[a] < stratum.points[b];
      return scaled && stratum.scales[a] < stratum.scales[b];
    });
    Stratum sorted;
    sorted.points.reserve(order.size());
    for (const auto i : order) sorted.points.push_back(std::move(stratum.points[i]));
    if (scaled) {
      sorted.scales.reserve(order.size());
      for (const auto i : order) sorted.scales.push_back(stratum.scales[i]);
    }
    stratum = std::move(sorted);
  }
}

EmpiricalRisk EmpiricalRisk::pn(std::span<const FeatureVector> positives,
                                std::span<const FeatureVector> negatives, double pi) {
  require_nonempty(positives, "positive set");
  require_nonempty(negatives, "negative set");
  common_dim({positives, negatives});
  if (!(pi > 0.0 && pi < 1.0)) throw std::invalid_argument("pi must lie in (0, 1)");
  std::vector<Stratum> strata{{{positives.begin(), positives.end()}, {}},
                              {{negatives.begin(), negatives.end()}, {}}};
  std::vector<Term> terms{{pi, 1.0, {0}, false}, {1.0 - pi, -1.0, {1}, false}};
  return EmpiricalRisk(RiskKind::pn, std::move(strata), std::move(terms), ScaleForm::margin);
}

EmpiricalRisk EmpiricalRisk::pconf(std::span<const FeatureVector> positives,
                                   std::span<const double> confidences, double pi,
                                   ScaleForm form) {
  require_nonempty(positives, "positive set");
  require_matching(positives.size(), confidences.size(), "pconf confidences");
  common_dim({positives});
  if (!(pi > 0.0 && pi <= 1.0)) throw std::invalid_argument("pi must lie in (0, 1]");
  std::vector<double> scales;
  scales.reserve(confidences.size());
  for (const double r : confidences) {
    if (!(r > 0.0 && r <= 1.0)) {
      throw std::invalid_argument("pconf confidence must lie in (0, 1], got " + std::to_string(r));
    }
    scales.push_back((1.0 - r) / r);
  }
  std::vector<Stratum> strata{{{positives.begin(), positives.end()}, std::move(scales)}};
  std::vector<Term> terms{{pi, 1.0, {0}, false}, {pi, -1.0, {0}, true}};
  return EmpiricalRisk(RiskKind::pconf, std::move(strata), std::move(terms), form);
}

EmpiricalRisk EmpiricalRisk::pbn(std::span<const FeatureVector> positives,
                                 std::span<const FeatureVector> biased_negatives,
                                 std::span<const double> positive_weights,
                                 std::span<const double> biased_negative_weights,
                                 const ProblemParams& params, ScaleForm form) {
  require_nonempty(positives, "positive set");
  require_nonempty(biased_negatives, "biased-negative set");
  require_matching(positives.size(), positive_weights.size(), "pbn positive weights");
  require_matching(biased_negatives.size(), biased_negative_weights.size(),
                   "pbn biased-negative weights");
  common_dim({positives, biased_negatives});
  for (const auto ws : {positive_weights, biased_negative_weights}) {
    for (const double w : ws) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("pbn weights must be finite and >= 0");
    }
  }
  std::vector<Stratum> strata{
      {{positives.begin(), positives.end()}, {positive_weights.begin(), positive_weights.end()}},
      {{biased_negatives.begin(), biased_negatives.end()},
       {biased_negative_weights.begin(), biased_negative_weights.end()}}};
  // The first two terms ignore the stored scales; the third averages over
  // the whole observed pool.
  std::vector<Term> terms{{params.pi(), 1.0, {0}, false},
                          {params.rho(), -1.0, {1}, false},
                          {params.observed_mass(), -1.0, {0, 1}, true}};
  return EmpiricalRisk(RiskKind::pbn, std::move(strata), std::move(terms), form);
}

std::size_t EmpiricalRisk::sample_count() const {
  std::size_t n = 0;
  for (const auto& s : strata_) n += s.points.size();
  return n;
}

Batch EmpiricalRisk::full_batch() const {
  Batch batch(strata_.size());
  for (std::size_t s = 0; s < strata_.size(); ++s) {
    batch[s].resize(strata_[s].points.size());
    std::iota(batch[s].begin(), batch[s].end(), std::size_t{0});
  }
  return batch;
}

double EmpiricalRisk::evaluate(const LinearClassifier& clf, const Batch& batch,
                               Gradient* grad) const {
  if (clf.dim() != dim_) {
    throw std::invalid_argument("risk: classifier dimension " + std::to_string(clf.dim()) +
                                " does not match data dimension " + std::to_string(dim_));
  }
  if (batch.size() != strata_.size()) throw std::invalid_argument("risk: batch/strata mismatch");
  if (grad) {
    grad->weights.assign(dim_, 0.0);
    grad->bias = 0.0;
  }
  std::vector<double> term_grad(dim_);
  double total = 0.0;
  for (const auto& term : terms_) {
    std::size_t count = 0;
    for (const auto s : term.strata) count += batch[s].size();
    if (count == 0) throw std::logic_error("risk: a term has no samples in the batch");

    double sum = 0.0;
    double bias_sum = 0.0;
    std::fill(term_grad.begin(), term_grad.end(), 0.0);
    for (const auto s : term.strata) {
      const Stratum& stratum = strata_[s];
      for (const auto i : batch[s]) {
        const FeatureVector& x = stratum.points[i];
        double g = clf.bias;
        for (std::size_t j = 0; j < dim_; ++j) g += clf.weights[j] * x[j];

        double loss = 0.0;
        double dloss = 0.0;  // d loss / d g
        if (!term.scaled) {
          loss = logistic_loss(term.direction * g);
          if (grad) dloss = term.direction * logistic_loss_grad(term.direction * g);
        } else if (form_ == ScaleForm::margin) {
          const double c = stratum.scales[i];
          const double z = term.direction * c * g;
          loss = logistic_loss(z);
          if (grad) dloss = term.direction * c * logistic_loss_grad(z);
        } else {
          const double c = stratum.scales[i];
          const double z = term.direction * g;
          loss = c * logistic_loss(z);
          if (grad) dloss = c * term.direction * logistic_loss_grad(z);
        }
        sum += loss;
        if (grad) {
          for (std::size_t j = 0; j < dim_; ++j) term_grad[j] += dloss * x[j];
          bias_sum += dloss;
        }
      }
    }
    const double scale = term.coefficient / static_cast<double>(count);
    total += scale * sum;
    if (grad) {
      for (std::size_t j = 0; j < dim_; ++j) grad->weights[j] += scale * term_grad[j];
      grad->bias += scale * bias_sum;
    }
  }
  return total;
}

double EmpiricalRisk::value(const LinearClassifier& clf) const {
  return evaluate(clf, full_batch(), nullptr);
}

Gradient EmpiricalRisk::gradient(const LinearClassifier& clf) const {
  Gradient grad;
  evaluate(clf, full_batch(), &grad);
  return grad;
}

double EmpiricalRisk::value(const LinearClassifier& clf, const Batch& batch) const {
  return evaluate(clf, batch, nullptr);
}

Gradient EmpiricalRisk::gradient(const LinearClassifier& clf, const Batch& batch) const {
  Gradient grad;
  evaluate(clf, batch, &grad);
  return grad;
}

// ---------------------------------------------------------------------------

double empirical_pn_risk(const LinearClassifier& clf, std::span<const FeatureVector> positives,
                         std::span<const FeatureVector> negatives, double pi) {
  return EmpiricalRisk::pn(positives, negatives, pi).value(clf);
}

double empirical_pconf_risk(const LinearClassifier& clf, std::span<const FeatureVector> positives,
                            std::span<const double> confidences, double pi, ScaleForm form) {
  return EmpiricalRisk::pconf(positives, confidences, pi, form).value(clf);
}

double empirical_pbn_risk(const LinearClassifier& clf, std::span<const FeatureVector> positives,
                          std::span<const FeatureVector> biased_negatives, const SigmaField& field,
                          double k, ScaleForm form) {
  const auto wp = skew_weights(sigma_values(field, positives), k, field.clip_floor());
  const auto wb = skew_weights(sigma_values(field, biased_negatives), k, field.clip_floor());
  return EmpiricalRisk::pbn(positives, biased_negatives, wp, wb, field.params(), form).value(clf);
}

std::vector<double> sigma_values(const SigmaField& field, std::span<const FeatureVector> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& x : points) out.push_back(field.sigma_tilde(x).value);
  return out;
}

std::vector<double> skew_weights(std::span<const double> sigmas, double k, double clip_floor) {
  std::vector<double> out;
  out.reserve(sigmas.size());
  for (const double s : sigmas) out.push_back(skew_weight(s, k, clip_floor));
  return out;
}

}  // namespace pbn
