#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pbn/core.hpp"
#include "pbn/density.hpp"

namespace pbn {

/// How a per-sample weight c(x) enters a scaled risk R^-(c g).
///
///   margin: loss of the scaled margin, l(-c(x) g(x)).
///   loss:   weighted loss, c(x) l(-g(x)). This is the form under which the
///           PbN and Pconf risks equal the fully supervised risk exactly.
enum class ScaleForm { margin, loss };

enum class RiskKind { pn, pconf, pbn };

struct Gradient {
  std::vector<double> weights;
  double bias = 0.0;
};

/// Per-stratum index lists selecting a mini-batch.
using Batch = std::vector<std::vector<std::size_t>>;

/// A linear-model empirical risk written as a weighted sum of per-group
/// sample means of the logistic loss:
///
///   R(g) = sum_t coef_t * mean_{x in strata(t)} f_t(x),
///
/// where f_t is l(dir_t g(x)), optionally scaled per sample. Points are
/// grouped into strata (P, N or bN); a term may average over several strata
/// jointly, which is how the observed pool X_{s=+1} = X_P u X_bN is
/// represented without copying.
///
/// Strata are stored in canonical (lexicographic) order, so values and
/// gradients do not depend on the order in which samples were supplied.
class EmpiricalRisk {
 public:
  /// pi * mean_P l(g) + (1 - pi) * mean_N l(-g).
  static EmpiricalRisk pn(std::span<const FeatureVector> positives,
                          std::span<const FeatureVector> negatives, double pi);

  /// pi * mean_P [ l(g) + R^-((1 - r)/r g) ] with confidences r in (0, 1].
  static EmpiricalRisk pconf(std::span<const FeatureVector> positives,
                             std::span<const double> confidences, double pi,
                             ScaleForm form = ScaleForm::margin);

  /// pi * mean_P l(g) + rho * mean_bN l(-g)
  ///   + (pi + rho) * mean_{P u bN} R^-(w g)
  /// with frozen per-sample weights w (see skew_weight).
  static EmpiricalRisk pbn(std::span<const FeatureVector> positives,
                           std::span<const FeatureVector> biased_negatives,
                           std::span<const double> positive_weights,
                           std::span<const double> biased_negative_weights,
                           const ProblemParams& params, ScaleForm form = ScaleForm::margin);

  RiskKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  std::size_t stratum_count() const { return strata_.size(); }
  std::size_t stratum_size(std::size_t s) const { return strata_.at(s).points.size(); }
  std::size_t sample_count() const;

  double value(const LinearClassifier& clf) const;
  Gradient gradient(const LinearClassifier& clf) const;

  /// Value / gradient where every term's mean runs over the batch rows of
  /// its strata only.
  double value(const LinearClassifier& clf, const Batch& batch) const;
  Gradient gradient(const LinearClassifier& clf, const Batch& batch) const;

 private:
  struct Stratum {
    std::vector<FeatureVector> points;
    std::vector<double> scales;  // empty when unscaled
  };
  struct Term {
    double coefficient;
    double direction;  // +1: l(g), -1: l(-g)
    std::vector<std::size_t> strata;
    bool scaled;
  };

  EmpiricalRisk(RiskKind kind, std::vector<Stratum> strata, std::vector<Term> terms, ScaleForm form);

  Batch full_batch() const;
  double evaluate(const LinearClassifier& clf, const Batch& batch, Gradient* grad) const;

  RiskKind kind_;
  std::size_t dim_ = 0;
  std::vector<Stratum> strata_;
  std::vector<Term> terms_;
  ScaleForm form_;
};

/// Empirical PN risk with the logistic loss.
double empirical_pn_risk(const LinearClassifier& clf, std::span<const FeatureVector> positives,
                         std::span<const FeatureVector> negatives, double pi);

/// Empirical Pconf risk. Throws if any confidence is outside (0, 1].
double empirical_pconf_risk(const LinearClassifier& clf, std::span<const FeatureVector> positives,
                            std::span<const double> confidences, double pi,
                            ScaleForm form = ScaleForm::margin);

/// Empirical PbN risk with sigma~ taken from the field and raised to k
/// (k = 1 is the naive risk).
double empirical_pbn_risk(const LinearClassifier& clf, std::span<const FeatureVector> positives,
                          std::span<const FeatureVector> biased_negatives, const SigmaField& field,
                          double k, ScaleForm form = ScaleForm::margin);

/// sigma~ for each point; computed once and frozen before optimisation.
std::vector<double> sigma_values(const SigmaField& field, std::span<const FeatureVector> points);

/// skew_weight applied elementwise.
std::vector<double> skew_weights(std::span<const double> sigmas, double k, double clip_floor);

}  // namespace pbn
