#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pbn {

using FeatureVector = std::vector<double>;

/// Class label y.
enum class Label : std::int8_t { negative = -1, positive = 1 };

/// Observation indicator s. Positives are always observed; negatives are
/// observed only when they belong to the biased-negative sample.
enum class Observation : std::int8_t { unobserved = -1, observed = 1 };

constexpr int sign_of(Label y) { return static_cast<int>(y); }
constexpr int sign_of(Observation s) { return static_cast<int>(s); }

struct Sample {
  FeatureVector x;
  Label y = Label::positive;
  Observation s = Observation::observed;
  // Provenance tag: generating mixture component (1..4) for synthetic data,
  // room number for the wireless benchmark, 0 when unused.
  int group = 0;
};

using SampleList = std::vector<Sample>;

/// Class prior pi = p(y=+1) and observed-negative mass rho = p(y=-1, s=+1).
class ProblemParams {
 public:
  /// Throws std::invalid_argument unless 0 < pi < 1 and 0 < rho <= 1 - pi.
  ProblemParams(double pi, double rho);

  double pi() const { return pi_; }
  double rho() const { return rho_; }
  /// p(s=+1) = pi + rho.
  double observed_mass() const { return pi_ + rho_; }

 private:
  double pi_;
  double rho_;
};

/// Data bundle for one PbN trial. The observed pool X_{s=+1} is exactly
/// train_positive followed by train_biased_negative.
struct PbnSplits {
  SampleList train_positive;
  SampleList train_biased_negative;
  SampleList valid_positive;
  SampleList test;
  SampleList fnr_estimation;

  std::vector<FeatureVector> observed_pool() const;
};

/// Throws std::invalid_argument when a split breaks its labelling contract:
/// training/validation positives must be (y=+1, s=+1), biased negatives
/// (y=-1, s=+1), and test / FNR-estimation sets must contain both labels.
void check_splits(const PbnSplits& splits);

/// g(x) = a^T x + beta.
struct LinearClassifier {
  std::vector<double> weights;
  double bias = 0.0;

  LinearClassifier() = default;
  explicit LinearClassifier(std::size_t dim) : weights(dim, 0.0) {}
  LinearClassifier(std::vector<double> a, double beta) : weights(std::move(a)), bias(beta) {}

  std::size_t dim() const { return weights.size(); }
  bool finite() const;

  friend bool operator==(const LinearClassifier&, const LinearClassifier&) = default;
};

/// a^T x + beta. Throws std::invalid_argument on dimension mismatch.
double margin(const LinearClassifier& clf, std::span<const double> x);

/// Sign rule with zero margins resolved to +1.
Label classify(const LinearClassifier& clf, std::span<const double> x);

/// Fraction of samples whose predicted label equals y. Throws on empty input.
double accuracy(const LinearClassifier& clf, std::span<const Sample> samples);

/// Negated classifier (-a, -beta).
LinearClassifier flipped(const LinearClassifier& clf);

std::vector<FeatureVector> features(std::span<const Sample> samples);

}  // namespace pbn
