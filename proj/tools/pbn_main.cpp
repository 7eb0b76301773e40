#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "pbn/datagen.hpp"
#include "pbn/harness.hpp"

namespace {

struct RunOptions {
  std::string experiment;
  std::optional<int> trials;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  std::optional<double> rho;
  std::optional<double> phi;
  std::vector<double> k_grid;
  std::vector<double> c_values;
  std::vector<std::string> methods;
  std::string data;
  std::string sigma;
  double bandwidth = 0.1;
  double clip_floor = 0.01;
  std::string form = "margin";
  double learning_rate = pbn::ExperimentConfig{}.optimizer.learning_rate;
  int epochs = pbn::ExperimentConfig{}.optimizer.epochs;
  std::size_t batch_size = pbn::ExperimentConfig{}.optimizer.batch_size;
  unsigned threads = 0;
  bool no_standardize = false;
  bool fixed_seeds = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, RunOptions& o) {
  const std::map<std::string, std::string> experiments{
      {"situation1", "situation1"}, {"situation2", "situation2"},
      {"situation3", "situation3"}, {"situation4", "situation4"},
      {"phi_sensitivity_large", "phi_sensitivity_large"},
      {"phi_sensitivity_small", "phi_sensitivity_small"}, {"wireless", "wireless"}};
  cmd->add_option("--experiment", o.experiment, "Experiment id")
      ->required()
      ->check(CLI::IsMember(experiments));
  cmd->add_option("--trials", o.trials, "Trials per condition (default 10, wireless 100)")
      ->check(CLI::Range(2, 100000));
  cmd->add_option("--seed", o.seed, "Base seed");
  cmd->add_option("--rho", o.rho, "Override rho = p(y=-1, s=+1)");
  cmd->add_option("--phi", o.phi, "Fixed phi instead of the per-trial estimate")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--k-grid", o.k_grid, "Candidate skew exponents k")->delimiter(',');
  cmd->add_option("--methods", o.methods, "Subset of A.PbN,N.PbN,PN")->delimiter(',');
  cmd->add_option("--data", o.data, "Path to the UCI wifi_localization.txt file");
  cmd->add_option("--sigma", o.sigma, "Density source for sigma~")->check(CLI::IsMember({"analytic", "kde"}));
  cmd->add_option("--bandwidth", o.bandwidth, "KDE bandwidth")->check(CLI::PositiveNumber);
  cmd->add_option("--clip-floor", o.clip_floor, "Lower clamp on sigma~^k");
  cmd->add_option("--form", o.form, "Where the skew weight enters the negative loss")
      ->check(CLI::IsMember({"margin", "loss"}));
  cmd->add_option("--lr", o.learning_rate, "SGD learning rate")->check(CLI::PositiveNumber);
  cmd->add_option("--epochs", o.epochs, "SGD epochs")->check(CLI::Range(1, 1000000));
  cmd->add_option("--batch-size", o.batch_size, "Mini-batch size")->check(CLI::Range(1, 1000000));
  cmd->add_option("--threads", o.threads, "Worker threads (0: all cores)");
  cmd->add_flag("--no-standardize", o.no_standardize, "Skip feature standardization (wireless)");
  cmd->add_flag("--fixed-seeds", o.fixed_seeds, "Reuse trial 0's seeds for every trial");
}

pbn::ExperimentConfig to_config(const RunOptions& o) {
  pbn::ExperimentConfig c;
  c.experiment = *pbn::parse_experiment_id(o.experiment);
  c.trials = o.trials.value_or(c.experiment == pbn::ExperimentId::wireless ? 100 : 10);
  c.seed = o.seed;
  c.rho = o.rho;
  c.phi = o.phi;
  if (!o.k_grid.empty()) c.k_grid = pbn::KGrid(o.k_grid);
  if (!o.c_values.empty()) c.c_values = o.c_values;
  if (!o.methods.empty()) {
    c.methods.clear();
    for (const auto& name : o.methods) {
      if (name == "A.PbN") c.methods.push_back(pbn::Method::adjusted_pbn);
      else if (name == "N.PbN") c.methods.push_back(pbn::Method::naive_pbn);
      else if (name == "PN") c.methods.push_back(pbn::Method::pn);
      else throw std::invalid_argument("unknown method '" + name + "'");
    }
  }
  c.data_path = o.data;
  if (o.sigma == "analytic") c.sigma = pbn::SigmaSource::analytic;
  if (o.sigma == "kde") c.sigma = pbn::SigmaSource::kde;
  c.bandwidth = o.bandwidth;
  c.clip_floor = o.clip_floor;
  c.form = o.form == "loss" ? pbn::ScaleForm::loss : pbn::ScaleForm::margin;
  c.optimizer.learning_rate = o.learning_rate;
  c.optimizer.epochs = o.epochs;
  c.optimizer.batch_size = o.batch_size;
  c.threads = o.threads;
  c.standardize = !o.no_standardize;
  c.vary_trial_seeds = !o.fixed_seeds;
  pbn::validate(c);
  return c;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

int run(const RunOptions& o) {
  const pbn::ExperimentConfig config = to_config(o);
  const pbn::ExperimentReport report = pbn::run_experiment(config);
  const auto format = o.format == "markdown" ? pbn::TableFormat::markdown : pbn::TableFormat::csv;
  write_output(o.out, pbn::emit_table(report.rows, format));
  if (!o.quiet) {
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    std::cerr << report.title << ": " << report.trials_run - report.trials_failed << '/'
              << report.trials_run << " trials succeeded\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PbN classification experiments: positive and biased-negative data"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment and emit its summary table");
  add_common(run_cmd, run_opts);
  run_cmd->add_option("--out", run_opts.out, "Output file (default stdout)");
  run_cmd->add_option("--format", run_opts.format, "Table format")->check(CLI::IsMember({"csv", "markdown"}));
  run_cmd->add_option("--c-values", run_opts.c_values, "phi multipliers for phi_sensitivity_*")->delimiter(',');
  run_cmd->add_flag("--quiet", run_opts.quiet, "Suppress warnings and the trial summary on stderr");

  RunOptions boundary_opts;
  std::size_t condition = 0;
  std::string boundary_out;
  auto* boundary_cmd =
      app.add_subcommand("boundary", "Export one trial's decision boundaries and samples as CSV");
  add_common(boundary_cmd, boundary_opts);
  boundary_cmd->add_option("--condition", condition, "Condition index (table row, from 0)");
  boundary_cmd->add_option("--out", boundary_out, "Output file (default stdout)");

  std::string gen_experiment = "situation1";
  std::size_t gen_condition = 0;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("generate", "Write one synthetic situation's training data");
  gen_cmd->add_option("--experiment", gen_experiment, "situation1..situation4")
      ->check(CLI::IsMember({"situation1", "situation2", "situation3", "situation4"}));
  gen_cmd->add_option("--condition", gen_condition, "Condition index (table row, from 0)")->check(CLI::Range(0, 3));
  gen_cmd->add_option("--seed", gen_seed, "Seed");
  gen_cmd->add_option("--out", gen_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run(run_opts);
    if (*boundary_cmd) {
      std::ostringstream text;
      pbn::export_boundaries(to_config(boundary_opts), condition, text);
      write_output(boundary_out, text.str());
      return 0;
    }
    if (*gen_cmd) {
      const auto id = *pbn::parse_experiment_id(gen_experiment);
      const bool small = id == pbn::ExperimentId::situation2 || id == pbn::ExperimentId::situation4;
      const bool single = id == pbn::ExperimentId::situation1 || id == pbn::ExperimentId::situation2;
      pbn::SituationSpec spec;
      spec.overlap = small ? pbn::Overlap::small : pbn::Overlap::large;
      if (single) {
        spec.bias = pbn::SingleComponent{static_cast<int>(gen_condition) + 1};
      } else {
        spec.bias = pbn::Proportional{pbn::proportional_settings()[gen_condition]};
      }
      const pbn::Situation s = pbn::make_situation(spec, gen_seed);
      std::ostringstream text;
      pbn::write_samples(text, s.splits.train_positive);
      pbn::write_samples(text, s.splits.train_biased_negative);
      write_output(gen_out, text.str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "pbn: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
