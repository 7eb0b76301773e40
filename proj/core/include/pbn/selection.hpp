#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pbn/core.hpp"
#include "pbn/training.hpp"

namespace pbn {

/// Strictly ascending list of positive exponents for sigma~^k.
class KGrid {
 public:
  explicit KGrid(std::vector<double> candidates);

  /// {0.3, 0.5, 0.7, 1.0, 1.5, 2.0, 4.0}
  static KGrid synthetic_default();
  /// {0.5, 0.7, 0.9, 1.0, 1.2, 1.5, 2.0}
  static KGrid benchmark_default();

  const std::vector<double>& candidates() const { return candidates_; }

 private:
  std::vector<double> candidates_;
};

enum class PhiSource { given, estimated, perturbed };

/// Prior knowledge of the false negative rate.
struct PhiPrior {
  double value = 0.0;
  PhiSource source = PhiSource::given;
  double factor = 1.0;  // c for perturbed priors

  /// Throws unless value lies in [0, 1].
  static PhiPrior given(double value);
};

struct KCandidate {
  double k = 1.0;
  bool trained = false;
  LinearClassifier classifier;
  double fnr = 0.0;
  std::string failure;  // set when training threw
};

struct KSelection {
  double k_star = 1.0;
  LinearClassifier classifier;
  double squared_error = 0.0;
  std::vector<KCandidate> candidates;
  std::vector<std::string> warnings;
};

using TrainForK = std::function<LinearClassifier(double)>;

/// Trains one classifier per grid value and records its FNR on the
/// validation positives. A candidate whose training throws is kept with
/// trained == false and a failure message.
std::vector<KCandidate> train_candidates(const KGrid& grid, const TrainForK& train_for_k,
                                         std::span<const Sample> valid_positive);

/// Picks the trained candidate minimising (FNR - phi)^2, ties toward the
/// smallest k. Throws std::runtime_error when no candidate trained.
KSelection choose_k(std::vector<KCandidate> candidates, const PhiPrior& phi);

/// train_candidates followed by choose_k.
KSelection select_k(const KGrid& grid, const TrainForK& train_for_k,
                    std::span<const Sample> valid_positive, const PhiPrior& phi);

/// Trains an ordinary PN classifier on a labelled set (class prior taken
/// from the label frequencies) and returns its 0-1 false negative rate on
/// that set's positives. Throws for single-class input.
PhiPrior estimate_phi(std::span<const Sample> fnr_dataset, const SgdConfig& config);

/// min(c * phi, 1), tagged as perturbed. Throws for c <= 0.
PhiPrior perturb_phi(const PhiPrior& phi, double c);

}  // namespace pbn
