#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>

#include "pbn/core.hpp"
#include "pbn/risk.hpp"

namespace pbn {

enum class InitKind { zeros, small_gaussian };

struct SgdConfig {
  double learning_rate = 0.01;
  int epochs = 200;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;
  InitKind init = InitKind::zeros;
  double init_scale = 0.01;  // standard deviation for small_gaussian
};

/// Thrown when the risk or the parameters stop being finite.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Called after every epoch with the epoch index (1-based), the current
/// parameters and the full empirical risk at those parameters.
using EpochObserver = std::function<void(int, const LinearClassifier&, double)>;

/// Mini-batch SGD on an empirical risk.
///
/// Each epoch shuffles every stratum independently and cuts it into the same
/// number of contiguous slices, so batch b holds slice b of every stratum and
/// each per-group mean in the batch risk is an unbiased estimate of the full
/// one. The number of batches per epoch is ceil(n / batch_size), capped at
/// the smallest stratum size. A batch_size at least as large as the data
/// gives plain full-batch gradient descent.
LinearClassifier train(const EmpiricalRisk& risk, const SgdConfig& config,
                       const EpochObserver& observer = {});

/// Mean 0-1 loss of the margins over a set of positives.
double evaluate_fnr(const LinearClassifier& clf, std::span<const Sample> positives);

}  // namespace pbn
