#include "pbn/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pbn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double squared_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("density: dimension mismatch (" + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j] - y[j];
    sum += d * d;
  }
  return sum;
}

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

void check_variance(double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("Gaussian variance must be positive and finite");
  }
}

}  // namespace

double gaussian_log_pdf(std::span<const double> x, const GaussianComponent& component) {
  check_variance(component.variance);
  const double d = static_cast<double>(x.size());
  return -0.5 * d * std::log(2.0 * std::numbers::pi * component.variance) -
         squared_distance(x, component.mean) / (2.0 * component.variance);
}

double gaussian_pdf(std::span<const double> x, const GaussianComponent& component) {
  check_variance(component.variance);
  const double d = static_cast<double>(x.size());
  return std::pow(2.0 * std::numbers::pi * component.variance, -0.5 * d) *
         std::exp(-squared_distance(x, component.mean) / (2.0 * component.variance));
}

// ---------------------------------------------------------------------------

MixtureDensity::MixtureDensity(std::vector<GaussianComponent> components,
                               std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {
  if (components_.empty()) throw std::invalid_argument("mixture needs at least one component");
  if (weights_.size() != components_.size()) {
    throw std::invalid_argument("mixture weight count does not match component count");
  }
  double total = 0.0;
  for (const double w : weights_) {
    if (!(w >= 0.0)) throw std::invalid_argument("mixture weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mixture weights must sum to 1");
  const std::size_t dim = components_.front().mean.size();
  for (const auto& c : components_) {
    check_variance(c.variance);
    if (c.mean.size() != dim) throw std::invalid_argument("mixture components differ in dimension");
  }
}

MixtureDensity MixtureDensity::uniform(std::vector<GaussianComponent> components) {
  std::vector<double> weights(components.size(), 1.0 / static_cast<double>(components.size()));
  return MixtureDensity(std::move(components), std::move(weights));
}

double MixtureDensity::pdf(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < components_.size(); ++j) {
    if (weights_[j] > 0.0) sum += weights_[j] * gaussian_pdf(x, components_[j]);
  }
  return sum;
}

double MixtureDensity::log_pdf(std::span<const double> x) const {
  double acc = kNegInf;
  for (std::size_t j = 0; j < components_.size(); ++j) {
    if (weights_[j] > 0.0) {
      acc = log_add_exp(acc, std::log(weights_[j]) + gaussian_log_pdf(x, components_[j]));
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------

KdeDensity::KdeDensity(std::vector<FeatureVector> support, double bandwidth)
    : support_(std::move(support)), bandwidth_(bandwidth) {
  if (support_.empty()) throw std::invalid_argument("KDE support must be non-empty");
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
    throw std::invalid_argument("KDE bandwidth must be positive");
  }
  const std::size_t dim = support_.front().size();
  for (const auto& p : support_) {
    if (p.size() != dim) throw std::invalid_argument("KDE support points differ in dimension");
  }
}

double KdeDensity::pdf(std::span<const double> x) const {
  const double h2 = bandwidth_ * bandwidth_;
  const double norm =
      std::pow(2.0 * std::numbers::pi * h2, -0.5 * static_cast<double>(x.size()));
  double sum = 0.0;
  for (const auto& p : support_) sum += norm * std::exp(-squared_distance(x, p) / (2.0 * h2));
  return sum / static_cast<double>(support_.size());
}

double KdeDensity::log_pdf(std::span<const double> x) const {
  const double h2 = bandwidth_ * bandwidth_;
  // Two passes: find the largest exponent, then sum shifted terms.
  double best = kNegInf;
  std::vector<double> exponents;
  exponents.reserve(support_.size());
  for (const auto& p : support_) {
    const double e = -squared_distance(x, p) / (2.0 * h2);
    exponents.push_back(e);
    best = std::max(best, e);
  }
  double sum = 0.0;
  for (const double e : exponents) sum += std::exp(e - best);
  return best + std::log(sum) - std::log(static_cast<double>(support_.size())) -
         0.5 * static_cast<double>(x.size()) * std::log(2.0 * std::numbers::pi * h2);
}

double mixture_pdf(std::span<const double> x, const MixtureDensity& mixture) {
  return mixture.pdf(x);
}

double kde_pdf(std::span<const double> x, const KdeDensity& kde) { return kde.pdf(x); }

double pdf(const DensityModel& model, std::span<const double> x) {
  return std::visit([&](const auto& m) { return m.pdf(x); }, model);
}

double log_pdf(const DensityModel& model, std::span<const double> x) {
  return std::visit([&](const auto& m) { return m.log_pdf(x); }, model);
}

// ---------------------------------------------------------------------------

namespace {
void check_floor(double floor) {
  if (!(floor > 0.0 && floor < 1.0)) throw std::invalid_argument("clip floor must lie in (0, 1)");
}
}  // namespace

SigmaField::SigmaField(DensityModel positive, DensityModel biased_negative, ProblemParams params,
                       double clip_floor)
    : positive_(std::move(positive)),
      biased_negative_(std::move(biased_negative)),
      params_(params),
      clip_floor_(clip_floor) {
  check_floor(clip_floor_);
}

SigmaField::SigmaField(DensityModel positive, DensityModel biased_negative, DensityModel observed,
                       ProblemParams params, double clip_floor)
    : positive_(std::move(positive)),
      biased_negative_(std::move(biased_negative)),
      observed_(std::move(observed)),
      params_(params),
      clip_floor_(clip_floor) {
  check_floor(clip_floor_);
}

SigmaEstimate SigmaField::sigma_tilde(std::span<const double> x) const {
  const double pi = params_.pi();
  const double rho = params_.rho();
  const double log_p = log_pdf(positive_, x);
  const double log_bn = log_pdf(biased_negative_, x);
  const double log_bias = log_add_exp(std::log(pi) + log_p, std::log(1.0 - pi) + log_bn);
  if (log_bias == kNegInf) return {clip_floor_, true};

  double log_numerator = 0.0;
  if (observed_) {
    log_numerator = std::log(params_.observed_mass()) + log_pdf(*observed_, x);
  } else {
    log_numerator = log_add_exp(std::log(pi) + log_p, std::log(rho) + log_bn);
  }
  if (log_numerator == kNegInf) return {clip_floor_, true};
  return {std::min(1.0, std::exp(log_numerator - log_bias)), false};
}

double SigmaField::weight(std::span<const double> x, double k) const {
  return skew_weight(sigma_tilde(x).value, k, clip_floor_);
}

double skew_weight(double sigma, double k, double clip_floor) {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("k must be positive and finite");
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw std::invalid_argument("sigma must lie in [0, 1]");
  const double t = std::clamp(std::pow(sigma, k), clip_floor, 1.0);
  if (!(t > 0.0)) throw std::invalid_argument("skew_weight: sigma^k is zero with clipping disabled");
  return (1.0 - t) / t;
}

}  // namespace pbn
