#include "pbn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <ostream>
#include <thread>
#include <variant>

#include "pbn/datagen.hpp"
#include "pbn/density.hpp"
#include "pbn/random.hpp"
#include "pbn/stats.hpp"
#include "pbn/wireless.hpp"

namespace pbn {

namespace {

enum SeedTag : std::uint64_t { kData = 101, kPhi, kPn, kNaive, kAdjusted };

struct Condition {
  std::string label;
  std::variant<SituationSpec, BenchmarkSpec> spec;
};

bool is_synthetic(ExperimentId id) { return id != ExperimentId::wireless; }

ExperimentId base_experiment(ExperimentId id) {
  switch (id) {
    case ExperimentId::phi_sensitivity_large: return ExperimentId::situation1;
    case ExperimentId::phi_sensitivity_small: return ExperimentId::situation2;
    default: return id;
  }
}

std::string mean_label(const FeatureVector& m) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "[%.1f, %.1f]", m[0], m[1]);
  return buf;
}

std::string probability_label(const std::array<double, 4>& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "[%.2f, %.2f, %.2f, %.2f]", p[0], p[1], p[2], p[3]);
  return buf;
}

std::vector<Condition> conditions_for(ExperimentId id) {
  const ExperimentId base = base_experiment(id);
  std::vector<Condition> out;
  if (base == ExperimentId::situation1 || base == ExperimentId::situation2) {
    const Overlap overlap = base == ExperimentId::situation1 ? Overlap::large : Overlap::small;
    const auto means = negative_means(overlap);
    for (int j = 1; j <= 4; ++j) {
      out.push_back({mean_label(means[static_cast<std::size_t>(j - 1)]),
                     SituationSpec{overlap, SingleComponent{j}, {}}});
    }
  } else if (base == ExperimentId::situation3 || base == ExperimentId::situation4) {
    const Overlap overlap = base == ExperimentId::situation3 ? Overlap::large : Overlap::small;
    for (const auto& p : proportional_settings()) {
      out.push_back({probability_label(p), SituationSpec{overlap, Proportional{p}, {}}});
    }
  } else {
    out.push_back({"Room 1", BenchmarkSpec{BenchmarkBias::room1_only, {}}});
    out.push_back({"Room 3", BenchmarkSpec{BenchmarkBias::room3_only, {}}});
    out.push_back({"Room 4", BenchmarkSpec{BenchmarkBias::room4_only, {}}});
    out.push_back({"random", BenchmarkSpec{BenchmarkBias::random, {}}});
  }
  return out;
}

std::string experiment_title(ExperimentId id) {
  switch (id) {
    case ExperimentId::situation1: return "Situation 1: large overlap, single-component bias";
    case ExperimentId::situation2: return "Situation 2: small overlap, single-component bias";
    case ExperimentId::situation3: return "Situation 3: large overlap, proportional bias";
    case ExperimentId::situation4: return "Situation 4: small overlap, proportional bias";
    case ExperimentId::phi_sensitivity_large: return "phi sensitivity, large overlap";
    case ExperimentId::phi_sensitivity_small: return "phi sensitivity, small overlap";
    case ExperimentId::wireless: return "Wireless Indoor Localization";
  }
  return {};
}

struct TrialData {
  PbnSplits splits;
  ProblemParams params;
  std::optional<SigmaField> field;
};

struct Workbench {
  ExperimentConfig config;
  std::vector<Condition> conditions;
  SampleList wireless;  // binarized benchmark records
  KGrid grid;
  SigmaSource sigma;
};

Workbench make_workbench(const ExperimentConfig& config) {
  validate(config);
  const bool synthetic = is_synthetic(config.experiment);
  Workbench wb{config,
               conditions_for(config.experiment),
               {},
               config.k_grid.value_or(synthetic ? KGrid::synthetic_default()
                                                : KGrid::benchmark_default()),
               config.sigma.value_or(synthetic ? SigmaSource::analytic : SigmaSource::kde)};
  if (!synthetic) {
    if (config.data_path.empty() || !std::filesystem::exists(config.data_path)) {
      throw std::runtime_error("wireless experiment needs the UCI wifi_localization.txt file (--data); '" +
                               config.data_path.string() + "' not found");
    }
    const auto records = parse_wireless(config.data_path);
    wb.wireless = binarize(records);
  }
  return wb;
}

std::uint64_t trial_key(const ExperimentConfig& config, std::size_t trial) {
  return config.vary_trial_seeds ? static_cast<std::uint64_t>(trial) : 0;
}

std::uint64_t seed_for(const Workbench& wb, std::size_t condition, std::size_t trial,
                       SeedTag tag) {
  return derive_seed(wb.config.seed, {condition, trial_key(wb.config, trial), tag});
}

TrialData prepare(const Workbench& wb, std::size_t condition, std::size_t trial) {
  const std::uint64_t data_seed = seed_for(wb, condition, trial, kData);
  const auto& spec = wb.conditions[condition].spec;

  if (const auto* situation = std::get_if<SituationSpec>(&spec)) {
    Situation s = make_situation(*situation, data_seed, wb.config.rho);
    TrialData data{std::move(s.splits), s.params, std::nullopt};
    if (wb.sigma == SigmaSource::analytic) {
      data.field.emplace(s.positive_density, s.biased_negative_density, data.params,
                         wb.config.clip_floor);
    }
    return data;
  }
  BenchmarkSplit b =
      make_benchmark_split(wb.wireless, std::get<BenchmarkSpec>(spec), data_seed, wb.config.rho);
  TrialData data{wb.config.standardize ? standardize_splits(b.splits) : std::move(b.splits),
                 b.params, std::nullopt};
  if (wb.sigma == SigmaSource::analytic) {
    throw std::invalid_argument("analytic sigma is only available for synthetic experiments");
  }
  return data;
}

void attach_kde(const Workbench& wb, TrialData& data) {
  if (data.field) return;
  const double h = wb.config.bandwidth;
  data.field.emplace(KdeDensity(features(data.splits.train_positive), h),
                     KdeDensity(features(data.splits.train_biased_negative), h),
                     KdeDensity(data.splits.observed_pool(), h), data.params, wb.config.clip_floor);
}

SgdConfig optimizer_with_seed(const Workbench& wb, std::uint64_t seed) {
  SgdConfig cfg = wb.config.optimizer;
  cfg.seed = seed;
  return cfg;
}

/// Everything a trial needs for the three estimators, with sigma~ frozen.
struct TrialModels {
  TrialData data;
  std::vector<FeatureVector> train_pos;
  std::vector<FeatureVector> combined_pos;
  std::vector<FeatureVector> train_bn;
  std::vector<double> sigma_train_pos;
  std::vector<double> sigma_combined_pos;
  std::vector<double> sigma_bn;
  PhiPrior phi;
};

TrialModels build_models(const Workbench& wb, std::size_t condition, std::size_t trial) {
  TrialModels m{prepare(wb, condition, trial), {}, {}, {}, {}, {}, {}, {}};
  attach_kde(wb, m.data);
  const auto& sp = m.data.splits;
  m.train_pos = features(sp.train_positive);
  m.combined_pos = m.train_pos;
  for (const auto& s : sp.valid_positive) m.combined_pos.push_back(s.x);
  m.train_bn = features(sp.train_biased_negative);
  m.sigma_combined_pos = sigma_values(*m.data.field, m.combined_pos);
  m.sigma_train_pos.assign(m.sigma_combined_pos.begin(),
                           m.sigma_combined_pos.begin() + static_cast<std::ptrdiff_t>(m.train_pos.size()));
  m.sigma_bn = sigma_values(*m.data.field, m.train_bn);
  m.phi = wb.config.phi ? PhiPrior::given(*wb.config.phi)
                        : estimate_phi(sp.fnr_estimation,
                                       optimizer_with_seed(wb, seed_for(wb, condition, trial, kPhi)));
  return m;
}

LinearClassifier train_pn(const Workbench& wb, const TrialModels& m, std::uint64_t seed) {
  return train(EmpiricalRisk::pn(m.combined_pos, m.train_bn, m.data.params.pi()),
               optimizer_with_seed(wb, seed));
}

LinearClassifier train_pbn(const Workbench& wb, const TrialModels& m, bool combined, double k,
                           std::uint64_t seed) {
  const double floor = wb.config.clip_floor;
  const auto& pos = combined ? m.combined_pos : m.train_pos;
  const auto& sig = combined ? m.sigma_combined_pos : m.sigma_train_pos;
  return train(EmpiricalRisk::pbn(pos, m.train_bn, skew_weights(sig, k, floor),
                                  skew_weights(m.sigma_bn, k, floor), m.data.params, wb.config.form),
               optimizer_with_seed(wb, seed));
}

std::vector<KCandidate> adjusted_candidates(const Workbench& wb, const TrialModels& m,
                                            std::uint64_t seed) {
  return train_candidates(
      wb.grid, [&](double k) { return train_pbn(wb, m, false, k, seed); },
      m.data.splits.valid_positive);
}

struct TrialOutcome {
  bool ok = false;
  std::string error;
  double phi = 0.0;
  std::vector<double> accuracy;  // one per column
  std::vector<std::string> warnings;
};

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

using TrialFn = std::function<TrialOutcome(std::size_t condition, std::size_t trial)>;

ExperimentReport aggregate(const Workbench& wb, const std::vector<std::string>& column_names,
                           const TrialFn& run_trial, std::optional<std::size_t> reference_column) {
  const std::size_t trials = static_cast<std::size_t>(wb.config.trials);
  const std::size_t total = wb.conditions.size() * trials;
  std::vector<TrialOutcome> outcomes(total);
  parallel_for(total, wb.config.threads, [&](std::size_t task) {
    const std::size_t condition = task / trials;
    const std::size_t trial = task % trials;
    try {
      outcomes[task] = run_trial(condition, trial);
      outcomes[task].ok = true;
    } catch (const std::exception& e) {
      outcomes[task].ok = false;
      outcomes[task].error = e.what();
    }
  });

  ExperimentReport report;
  report.title = experiment_title(wb.config.experiment);
  report.trials_run = total;
  for (std::size_t task = 0; task < total; ++task) {
    const auto& o = outcomes[task];
    const std::string where = wb.conditions[task / trials].label + " trial " +
                              std::to_string(task % trials);
    if (!o.ok) {
      ++report.trials_failed;
      report.warnings.push_back(where + " failed: " + o.error);
    }
    for (const auto& w : o.warnings) report.warnings.push_back(where + ": " + w);
  }
  if (static_cast<double>(report.trials_failed) >
      wb.config.max_failure_fraction * static_cast<double>(total)) {
    throw ExperimentAborted("aborting: " + std::to_string(report.trials_failed) + " of " +
                            std::to_string(total) + " trials failed" +
                            (report.warnings.empty() ? "" : " (first: " + report.warnings.front() + ")"));
  }

  for (std::size_t c = 0; c < wb.conditions.size(); ++c) {
    SummaryRow row;
    row.condition = wb.conditions[c].label;
    std::vector<std::vector<double>> samples(column_names.size());
    std::vector<double> phis;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto& o = outcomes[c * trials + t];
      if (!o.ok) continue;
      for (std::size_t k = 0; k < column_names.size(); ++k) samples[k].push_back(100.0 * o.accuracy[k]);
      phis.push_back(100.0 * o.phi);
    }
    if (phis.empty()) throw ExperimentAborted("every trial failed for condition " + row.condition);
    for (std::size_t k = 0; k < column_names.size(); ++k) {
      row.columns.push_back({column_names[k], mean(samples[k]), sample_stddev(samples[k]), samples[k], false});
    }
    if (samples.front().size() >= 2) {
      const auto flags = significance_flags(samples, 0.05, reference_column);
      for (std::size_t k = 0; k < flags.size(); ++k) row.columns[k].bold = flags[k];
    }
    row.phi_mean = mean(phis);
    row.phi_std = sample_stddev(phis);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<ExperimentId> parse_experiment_id(std::string_view text) {
  for (const auto id : {ExperimentId::situation1, ExperimentId::situation2, ExperimentId::situation3,
                        ExperimentId::situation4, ExperimentId::phi_sensitivity_large,
                        ExperimentId::phi_sensitivity_small, ExperimentId::wireless}) {
    if (to_string(id) == text) return id;
  }
  return std::nullopt;
}

std::string_view to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::situation1: return "situation1";
    case ExperimentId::situation2: return "situation2";
    case ExperimentId::situation3: return "situation3";
    case ExperimentId::situation4: return "situation4";
    case ExperimentId::phi_sensitivity_large: return "phi_sensitivity_large";
    case ExperimentId::phi_sensitivity_small: return "phi_sensitivity_small";
    case ExperimentId::wireless: return "wireless";
  }
  return "unknown";
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::adjusted_pbn: return "A.PbN";
    case Method::naive_pbn: return "N.PbN";
    case Method::pn: return "PN";
  }
  return "unknown";
}

std::vector<std::string> condition_labels(ExperimentId id) {
  std::vector<std::string> out;
  for (const auto& c : conditions_for(id)) out.push_back(c.label);
  return out;
}

void validate(const ExperimentConfig& config) {
  if (config.trials < 2) throw std::invalid_argument("at least 2 trials are needed for a standard deviation");
  if (config.methods.empty()) throw std::invalid_argument("method list is empty");
  if (!(config.bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  if (!(config.clip_floor > 0.0 && config.clip_floor < 1.0)) {
    throw std::invalid_argument("clip floor must lie in (0, 1)");
  }
  if (config.phi && !(*config.phi >= 0.0 && *config.phi <= 1.0)) {
    throw std::invalid_argument("phi must lie in [0, 1]");
  }
  for (const double c : config.c_values) {
    if (!(c > 0.0)) throw std::invalid_argument("phi perturbation factors must be positive");
  }
  if (!(config.max_failure_fraction >= 0.0 && config.max_failure_fraction <= 1.0)) {
    throw std::invalid_argument("max failure fraction must lie in [0, 1]");
  }
  if (config.experiment == ExperimentId::wireless && config.sigma == SigmaSource::analytic) {
    throw std::invalid_argument("the wireless experiment has no analytic densities; use kde");
  }
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (config.experiment == ExperimentId::phi_sensitivity_large ||
      config.experiment == ExperimentId::phi_sensitivity_small) {
    return phi_sensitivity(config, config.c_values);
  }
  const Workbench wb = make_workbench(config);
  std::vector<std::string> names;
  for (const auto m : config.methods) names.emplace_back(to_string(m));

  auto run_trial = [&](std::size_t condition, std::size_t trial) {
    const TrialModels m = build_models(wb, condition, trial);
    TrialOutcome out;
    out.phi = m.phi.value;
    const auto& test = m.data.splits.test;
    for (const auto method : config.methods) {
      switch (method) {
        case Method::pn:
          out.accuracy.push_back(accuracy(train_pn(wb, m, seed_for(wb, condition, trial, kPn)), test));
          break;
        case Method::naive_pbn:
          out.accuracy.push_back(
              accuracy(train_pbn(wb, m, true, 1.0, seed_for(wb, condition, trial, kNaive)), test));
          break;
        case Method::adjusted_pbn: {
          KSelection sel = choose_k(
              adjusted_candidates(wb, m, seed_for(wb, condition, trial, kAdjusted)), m.phi);
          out.warnings.insert(out.warnings.end(), sel.warnings.begin(), sel.warnings.end());
          out.accuracy.push_back(accuracy(sel.classifier, test));
          break;
        }
      }
    }
    return out;
  };
  return aggregate(wb, names, run_trial, std::nullopt);
}

ExperimentReport phi_sensitivity(const ExperimentConfig& config, std::span<const double> c_values) {
  ExperimentConfig cfg = config;
  cfg.experiment = base_experiment(config.experiment);
  if (cfg.experiment != ExperimentId::situation1 && cfg.experiment != ExperimentId::situation2) {
    throw std::invalid_argument("phi sensitivity runs on the situation 1 or 2 protocol only");
  }
  const Workbench wb = make_workbench(cfg);

  std::vector<double> factors{1.0};
  for (const double c : c_values) {
    if (!(c > 0.0)) throw std::invalid_argument("phi perturbation factors must be positive");
    if (c != 1.0) factors.push_back(c);
  }
  std::vector<std::string> names;
  for (const double c : factors) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "c=%.1f", c);
    names.emplace_back(buf);
  }

  auto run_trial = [&](std::size_t condition, std::size_t trial) {
    const TrialModels m = build_models(wb, condition, trial);
    TrialOutcome out;
    out.phi = m.phi.value;
    const auto candidates = adjusted_candidates(wb, m, seed_for(wb, condition, trial, kAdjusted));
    for (const double c : factors) {
      const PhiPrior phi = c == 1.0 ? m.phi : perturb_phi(m.phi, c);
      KSelection sel = choose_k(candidates, phi);
      if (c == 1.0) out.warnings = sel.warnings;
      out.accuracy.push_back(accuracy(sel.classifier, m.data.splits.test));
    }
    return out;
  };
  ExperimentReport report = aggregate(wb, names, run_trial, std::size_t{0});
  report.title = experiment_title(config.experiment == cfg.experiment
                                      ? (cfg.experiment == ExperimentId::situation1
                                             ? ExperimentId::phi_sensitivity_large
                                             : ExperimentId::phi_sensitivity_small)
                                      : config.experiment);
  return report;
}

void export_boundaries(const ExperimentConfig& config, std::size_t condition, std::ostream& out) {
  ExperimentConfig cfg = config;
  cfg.experiment = base_experiment(config.experiment);
  cfg.trials = std::max(cfg.trials, 2);
  const Workbench wb = make_workbench(cfg);
  if (condition >= wb.conditions.size()) throw std::out_of_range("condition index out of range");

  const TrialModels m = build_models(wb, condition, 0);
  const auto precision = out.precision(17);
  auto emit = [&](std::string_view kind, std::string_view label, std::span<const double> values,
                  std::optional<double> tail) {
    out << kind << ',' << label;
    for (const double v : values) out << ',' << v;
    if (tail) out << ',' << *tail;
    out << '\n';
  };
  for (const auto method : cfg.methods) {
    LinearClassifier clf;
    switch (method) {
      case Method::pn: clf = train_pn(wb, m, seed_for(wb, condition, 0, kPn)); break;
      case Method::naive_pbn: clf = train_pbn(wb, m, true, 1.0, seed_for(wb, condition, 0, kNaive)); break;
      case Method::adjusted_pbn:
        clf = choose_k(adjusted_candidates(wb, m, seed_for(wb, condition, 0, kAdjusted)), m.phi).classifier;
        break;
    }
    emit("boundary", to_string(method), clf.weights, clf.bias);
  }
  for (const auto& s : m.data.splits.train_positive) emit("sample", "P", s.x, std::nullopt);
  for (const auto& s : m.data.splits.train_biased_negative) emit("sample", "bN", s.x, std::nullopt);
  for (const auto& s : m.data.splits.test) {
    if (s.y == Label::negative) emit("sample", "N", s.x, std::nullopt);
  }
  out.precision(precision);
}

}  // namespace pbn
