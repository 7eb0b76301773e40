#include "pbn/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pbn {

namespace {
void require_finite(double z, const char* where) {
  if (!std::isfinite(z)) throw std::invalid_argument(std::string(where) + ": non-finite argument");
}
}  // namespace

double logistic_loss(double z) {
  require_finite(z, "logistic_loss");
  return std::max(-z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double logistic_loss_grad(double z) {
  require_finite(z, "logistic_loss_grad");
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return -e / (1.0 + e);
  }
  return -1.0 / (1.0 + std::exp(z));
}

double zero_one_loss(double z) {
  if (z > 0.0) return 0.0;
  if (z < 0.0) return 1.0;
  return 0.5;
}

}  // namespace pbn
