#include "pbn/wireless.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pbn/datagen.hpp"
#include "pbn/random.hpp"

namespace pbn {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

int parse_int(const std::string& token, std::size_t line) {
  int value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(line, "field '" + token + "' is not an integer");
  }
  return value;
}

}  // namespace

std::vector<WirelessRecord> parse_wireless(std::istream& in) {
  std::vector<WirelessRecord> records;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::istringstream fields(text);
    std::vector<std::string> tokens;
    for (std::string token; fields >> token;) tokens.push_back(token);
    if (tokens.empty()) continue;
    if (tokens.size() != 8) {
      throw ParseError(line, "expected 8 fields, found " + std::to_string(tokens.size()));
    }
    WirelessRecord record;
    for (std::size_t j = 0; j < 7; ++j) record.signals[j] = parse_int(tokens[j], line);
    record.room = parse_int(tokens[7], line);
    if (record.room < 1 || record.room > 4) {
      throw ParseError(line, "room " + std::to_string(record.room) + " is outside 1..4");
    }
    records.push_back(record);
  }
  if (records.empty()) throw ParseError(line, "no records found");
  return records;
}

std::vector<WirelessRecord> parse_wireless(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open wireless data file " + path.string());
  return parse_wireless(in);
}

SampleList binarize(std::span<const WirelessRecord> records) {
  SampleList out;
  out.reserve(records.size());
  for (const auto& r : records) {
    Sample s;
    s.x.assign(r.signals.begin(), r.signals.end());
    s.y = r.room == 2 ? Label::positive : Label::negative;
    s.s = s.y == Label::positive ? Observation::observed : Observation::unobserved;
    s.group = r.room;
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------

Standardizer Standardizer::fit(std::span<const Sample> training) {
  if (training.empty()) throw std::invalid_argument("Standardizer::fit: empty training set");
  const std::size_t dim = training.front().x.size();
  const auto n = static_cast<double>(training.size());
  Standardizer st;
  st.mean_.assign(dim, 0.0);
  st.scale_.assign(dim, 1.0);
  for (const auto& s : training) {
    if (s.x.size() != dim) throw std::invalid_argument("Standardizer::fit: dimension mismatch");
    for (std::size_t j = 0; j < dim; ++j) st.mean_[j] += s.x[j];
  }
  for (double& m : st.mean_) m /= n;
  std::vector<double> var(dim, 0.0);
  for (const auto& s : training) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = s.x[j] - st.mean_[j];
      var[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    // Population variance, so the training set maps to unit variance exactly.
    const double v = var[j] / n;
    if (v > 0.0) {
      st.scale_[j] = std::sqrt(v);
    } else {
      st.constant_.push_back(j);
    }
  }
  return st;
}

FeatureVector Standardizer::apply(std::span<const double> x) const {
  if (x.size() != mean_.size()) throw std::invalid_argument("Standardizer::apply: dimension mismatch");
  FeatureVector out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean_[j]) / scale_[j];
  return out;
}

SampleList Standardizer::apply(std::span<const Sample> samples) const {
  SampleList out(samples.begin(), samples.end());
  for (auto& s : out) s.x = apply(s.x);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::size_t> take(std::vector<std::size_t>& pool, std::size_t n, const char* what) {
  if (pool.size() < n) {
    throw std::invalid_argument(std::string("benchmark split: not enough samples for ") + what +
                                " (need " + std::to_string(n) + ", have " +
                                std::to_string(pool.size()) + ")");
  }
  std::vector<std::size_t> out(pool.end() - static_cast<std::ptrdiff_t>(n), pool.end());
  pool.resize(pool.size() - n);
  return out;
}

SampleList gather(std::span<const Sample> samples, std::span<const std::size_t> idx, Observation s) {
  SampleList out;
  out.reserve(idx.size());
  for (const auto i : idx) {
    Sample sample = samples[i];
    sample.s = s;
    out.push_back(std::move(sample));
  }
  return out;
}

int designated_room(BenchmarkBias bias) {
  switch (bias) {
    case BenchmarkBias::room1_only: return 1;
    case BenchmarkBias::room3_only: return 3;
    case BenchmarkBias::room4_only: return 4;
    case BenchmarkBias::random: return 0;
  }
  return 0;
}

}  // namespace

BenchmarkSplit make_benchmark_split(std::span<const Sample> samples, const BenchmarkSpec& spec,
                                    std::uint64_t seed, std::optional<double> rho) {
  const BenchmarkSizes& n = spec.sizes;
  Rng rng(seed);

  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    (samples[i].y == Label::positive ? positives : negatives).push_back(i);
  }
  shuffle(std::span<std::size_t>(positives), rng);
  shuffle(std::span<std::size_t>(negatives), rng);

  SplitIndices idx;
  idx.train_positive = take(positives, n.n_positive, "training positives");
  idx.valid_positive = take(positives, n.n_valid, "validation positives");
  const auto test_pos = take(positives, n.n_test_positive, "test positives");
  const auto fnr_pos = take(positives, n.n_fnr_positive, "FNR-estimation positives");

  const int room = designated_room(spec.bias);
  if (room == 0) {
    idx.train_biased_negative = take(negatives, n.n_biased_negative, "biased negatives");
  } else {
    std::vector<std::size_t> in_room;
    for (const auto i : negatives) {
      if (samples[i].group == room) in_room.push_back(i);
    }
    idx.train_biased_negative = take(in_room, n.n_biased_negative, "biased negatives in room");
    // Keep the shuffled order of the remaining negatives.
    std::vector<std::size_t> remaining;
    remaining.reserve(negatives.size() - n.n_biased_negative);
    for (const auto i : negatives) {
      if (std::find(idx.train_biased_negative.begin(), idx.train_biased_negative.end(), i) ==
          idx.train_biased_negative.end()) {
        remaining.push_back(i);
      }
    }
    negatives = std::move(remaining);
  }
  const auto test_neg = take(negatives, n.n_test_negative, "test negatives");
  const auto fnr_neg = take(negatives, n.n_fnr_negative, "FNR-estimation negatives");

  idx.test = test_pos;
  idx.test.insert(idx.test.end(), test_neg.begin(), test_neg.end());
  idx.fnr_estimation = fnr_pos;
  idx.fnr_estimation.insert(idx.fnr_estimation.end(), fnr_neg.begin(), fnr_neg.end());

  PbnSplits splits;
  splits.train_positive = gather(samples, idx.train_positive, Observation::observed);
  splits.train_biased_negative = gather(samples, idx.train_biased_negative, Observation::observed);
  splits.valid_positive = gather(samples, idx.valid_positive, Observation::observed);
  splits.test = gather(samples, test_pos, Observation::observed);
  for (auto& s : gather(samples, test_neg, Observation::unobserved)) splits.test.push_back(std::move(s));
  splits.fnr_estimation = gather(samples, fnr_pos, Observation::observed);
  for (auto& s : gather(samples, fnr_neg, Observation::unobserved)) {
    splits.fnr_estimation.push_back(std::move(s));
  }

  const double pi = static_cast<double>(n.n_test_positive) /
                    static_cast<double>(n.n_test_positive + n.n_test_negative);
  const ProblemParams params(pi, rho.value_or(default_rho(pi, n.n_positive, n.n_biased_negative)));
  return {std::move(splits), params, std::move(idx)};
}

PbnSplits standardize_splits(const PbnSplits& splits, Standardizer* fitted) {
  SampleList training = splits.train_positive;
  training.insert(training.end(), splits.train_biased_negative.begin(),
                  splits.train_biased_negative.end());
  const Standardizer st = Standardizer::fit(training);
  PbnSplits out;
  out.train_positive = st.apply(splits.train_positive);
  out.train_biased_negative = st.apply(splits.train_biased_negative);
  out.valid_positive = st.apply(splits.valid_positive);
  out.test = st.apply(splits.test);
  out.fnr_estimation = st.apply(splits.fnr_estimation);
  if (fitted) *fitted = st;
  return out;
}

}  // namespace pbn
