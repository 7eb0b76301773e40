#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>

#include "pbn/core.hpp"
#include "pbn/density.hpp"

namespace pbn {

/// Degree of class overlap between the positive Gaussian at the origin and
/// the four-component negative mixture.
enum class Overlap { large, small };

/// Biased negatives come from one mixture component (1-based index).
struct SingleComponent {
  int index = 1;
};

/// Biased negatives pick their component with these probabilities.
struct Proportional {
  std::array<double, 4> probabilities{0.25, 0.25, 0.25, 0.25};
};

using BiasMode = std::variant<SingleComponent, Proportional>;

struct SplitSizes {
  std::size_t n_positive = 500;
  std::size_t n_biased_negative = 100;
  std::size_t n_valid = 500;
  std::size_t n_test_positive = 500;
  std::size_t n_test_negative = 500;
  std::size_t n_fnr_positive = 500;
  std::size_t n_fnr_negative = 500;
};

struct SituationSpec {
  Overlap overlap = Overlap::large;
  BiasMode bias = SingleComponent{1};
  SplitSizes sizes{};
};

using NegativeMeans = std::array<FeatureVector, 4>;

/// large: [1,1], [1.5,1.5], [2,2], [2.5,2.5]; small: [2,2], [3,3], [4,4], [5,5].
NegativeMeans negative_means(Overlap overlap);

/// The four proportional-bias settings of Situations 3 and 4, in table order.
std::array<std::array<double, 4>, 4> proportional_settings();

/// Per-draw component probabilities of a bias mode. Throws if invalid.
std::array<double, 4> bias_probabilities(const BiasMode& bias);

/// n draws from N(0, I_2), labelled (y=+1, s=+1).
SampleList sample_positive(std::size_t n, std::uint64_t seed);

/// n draws from the uniform four-component mixture, labelled y=-1 and
/// s=-1 (unobserved). group holds the 1-based component.
SampleList sample_negative(std::size_t n, const NegativeMeans& means, std::uint64_t seed);

/// n biased negatives, labelled (y=-1, s=+1).
SampleList sample_biased_negative(std::size_t n, const NegativeMeans& means, const BiasMode& bias,
                                  std::uint64_t seed);

struct Situation {
  PbnSplits splits;
  ProblemParams params;
  MixtureDensity positive_density;         // p(x | y=+1)
  MixtureDensity biased_negative_density;  // p(x | y=-1, s=+1)
  MixtureDensity negative_density;         // p(x | y=-1)
};

/// pi * n_bN / n_P: the observed-negative mass implied by the sample ratio.
double default_rho(double pi, std::size_t n_positive, std::size_t n_biased_negative);

/// Builds every split from independent sub-seeds. pi is the positive
/// fraction of the test set; rho defaults to default_rho unless overridden.
Situation make_situation(const SituationSpec& spec, std::uint64_t seed,
                         std::optional<double> rho = std::nullopt);

/// Tab-delimited rows "x_1 ... x_d y s".
void write_samples(std::ostream& out, std::span<const Sample> samples);

}  // namespace pbn
