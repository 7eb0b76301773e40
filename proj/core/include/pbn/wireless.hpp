#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbn/core.hpp"

namespace pbn {

/// One row of the UCI Wireless Indoor Localization data: seven received
/// signal strengths and the room (1..4) where they were recorded.
struct WirelessRecord {
  std::array<int, 7> signals{};
  int room = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Whitespace-delimited rows of eight integers. Blank lines are skipped.
/// Throws ParseError naming the offending line for a wrong field count, a
/// non-integer field or a room outside 1..4, and for input with no rows.
std::vector<WirelessRecord> parse_wireless(std::istream& in);
std::vector<WirelessRecord> parse_wireless(const std::filesystem::path& path);

/// Room 2 is the positive class. The room number is kept in Sample::group;
/// observation flags are assigned later when splits are drawn.
SampleList binarize(std::span<const WirelessRecord> records);

/// Per-feature affine map x -> (x - mean) / scale, fitted on one sample set.
class Standardizer {
 public:
  /// Fits on the given samples (intended: training P u bN only). A feature
  /// with zero variance gets scale 1, so it is only centred; such features
  /// are listed by constant_features().
  static Standardizer fit(std::span<const Sample> training);

  FeatureVector apply(std::span<const double> x) const;
  SampleList apply(std::span<const Sample> samples) const;

  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& scale() const { return scale_; }
  const std::vector<std::size_t>& constant_features() const { return constant_; }

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
  std::vector<std::size_t> constant_;
};

/// Which rooms supply the biased negatives.
enum class BenchmarkBias { room1_only, room3_only, room4_only, random };

struct BenchmarkSizes {
  std::size_t n_positive = 200;
  std::size_t n_biased_negative = 100;
  std::size_t n_valid = 100;
  std::size_t n_test_positive = 100;
  std::size_t n_test_negative = 300;
  std::size_t n_fnr_positive = 100;
  std::size_t n_fnr_negative = 300;
};

struct BenchmarkSpec {
  BenchmarkBias bias = BenchmarkBias::random;
  BenchmarkSizes sizes{};
};

/// Positions in the input sample list that each split was drawn from.
struct SplitIndices {
  std::vector<std::size_t> train_positive;
  std::vector<std::size_t> train_biased_negative;
  std::vector<std::size_t> valid_positive;
  std::vector<std::size_t> test;
  std::vector<std::size_t> fnr_estimation;
};

struct BenchmarkSplit {
  PbnSplits splits;
  ProblemParams params;
  SplitIndices indices;
};

/// Draws disjoint splits without replacement. Biased negatives come from the
/// designated room, or uniformly from the pooled negative rooms for
/// BenchmarkBias::random; test and FNR negatives come from the remaining
/// negatives of every room. pi is the positive fraction of the test set and
/// rho defaults to pi * n_bN / n_P. Throws std::invalid_argument when a
/// stratum is too small.
BenchmarkSplit make_benchmark_split(std::span<const Sample> samples, const BenchmarkSpec& spec,
                                    std::uint64_t seed, std::optional<double> rho = std::nullopt);

/// Applies one standardizer (fitted on training P u bN) to every split.
PbnSplits standardize_splits(const PbnSplits& splits, Standardizer* fitted = nullptr);

}  // namespace pbn
