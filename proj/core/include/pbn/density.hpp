#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "pbn/core.hpp"

namespace pbn {

/// Isotropic Gaussian N(mean, variance * I).
struct GaussianComponent {
  FeatureVector mean;
  double variance = 1.0;
};

/// (2 pi var)^{-d/2} exp(-|x - mu|^2 / (2 var)). Throws on var <= 0 or
/// dimension mismatch.
double gaussian_pdf(std::span<const double> x, const GaussianComponent& component);
double gaussian_log_pdf(std::span<const double> x, const GaussianComponent& component);

/// Finite mixture of isotropic Gaussians.
class MixtureDensity {
 public:
  /// Weights must be nonnegative, sum to 1 within 1e-12, and match the
  /// component count; all components must share one dimension.
  MixtureDensity(std::vector<GaussianComponent> components, std::vector<double> weights);

  /// Uniformly weighted mixture.
  static MixtureDensity uniform(std::vector<GaussianComponent> components);

  const std::vector<GaussianComponent>& components() const { return components_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t dim() const { return components_.front().mean.size(); }

  double pdf(std::span<const double> x) const;
  double log_pdf(std::span<const double> x) const;

 private:
  std::vector<GaussianComponent> components_;
  std::vector<double> weights_;
};

/// Gaussian-kernel density estimate with a fixed bandwidth h:
/// (1/n) sum_i (2 pi h^2)^{-d/2} exp(-|x - x_i|^2 / (2 h^2)).
class KdeDensity {
 public:
  KdeDensity(std::vector<FeatureVector> support, double bandwidth);

  const std::vector<FeatureVector>& support() const { return support_; }
  double bandwidth() const { return bandwidth_; }
  std::size_t dim() const { return support_.front().size(); }

  double pdf(std::span<const double> x) const;
  /// Log-sum-exp evaluation; finite even where pdf() underflows to zero.
  double log_pdf(std::span<const double> x) const;

 private:
  std::vector<FeatureVector> support_;
  double bandwidth_;
};

double mixture_pdf(std::span<const double> x, const MixtureDensity& mixture);
double kde_pdf(std::span<const double> x, const KdeDensity& kde);

using DensityModel = std::variant<MixtureDensity, KdeDensity>;

double pdf(const DensityModel& model, std::span<const double> x);
double log_pdf(const DensityModel& model, std::span<const double> x);

struct SigmaEstimate {
  double value = 1.0;
  // Both densities vanished at x; value is the clip floor.
  bool degenerate = false;
};

/// Skewed observation posterior
///
///   sigma~(x) = p(s=+1) p(x|s=+1) / p_bias(x),
///   p_bias(x) = pi p(x|y=+1) + (1 - pi) p(x|y=-1, s=+1).
///
/// Without an explicit observed-data density the numerator is taken as
/// pi p_P(x) + rho p_bN(x), which is p(s=+1) p(x|s=+1) for a consistent
/// model. With one (KDE path) the ratio is evaluated directly and capped at 1.
/// All evaluation happens in the log domain.
class SigmaField {
 public:
  SigmaField(DensityModel positive, DensityModel biased_negative, ProblemParams params,
             double clip_floor = 0.01);
  SigmaField(DensityModel positive, DensityModel biased_negative, DensityModel observed,
             ProblemParams params, double clip_floor = 0.01);

  SigmaEstimate sigma_tilde(std::span<const double> x) const;

  /// (1 - t) / t with t = clamp(sigma~(x)^k, clip_floor, 1). Throws for k <= 0.
  double weight(std::span<const double> x, double k) const;

  const ProblemParams& params() const { return params_; }
  double clip_floor() const { return clip_floor_; }

 private:
  DensityModel positive_;
  DensityModel biased_negative_;
  std::optional<DensityModel> observed_;
  ProblemParams params_;
  double clip_floor_;
};

/// Weight applied to an observed sample with posterior estimate sigma:
/// t = clamp(sigma^k, clip_floor, 1), returns (1 - t) / t. A clip_floor of 0
/// disables clipping (sigma must then be positive).
double skew_weight(double sigma, double k, double clip_floor);

}  // namespace pbn
