#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.hpp"
#include "joints.hpp"
#include "pbn/density.hpp"
#include "pbn/harness.hpp"
#include "pbn/losses.hpp"
#include "pbn/oracle.hpp"
#include "pbn/risk.hpp"

using namespace pbn;
using pbn::testing::JointShape;
using pbn::testing::random_classifier;
using pbn::testing::random_joint;
using pbn::testing::random_point;

namespace {

using Clock = std::chrono::steady_clock;

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict = Verdict::fail;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

const ColumnStats& column(const SummaryRow& row, std::string_view name) {
  for (const auto& c : row.columns) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("missing column " + std::string(name));
}

ExperimentReport run(ExperimentId id, int trials) {
  ExperimentConfig config;
  config.experiment = id;
  config.trials = trials;
  config.seed = 1;
  return run_experiment(config);
}

// One shared run per experiment; several criteria read the same tables.
struct Runs {
  std::optional<ExperimentReport> situation1, situation2, situation4, sens_large, sens_small;
  double situation2_seconds = 0.0;

  const ExperimentReport& s1() {
    if (!situation1) situation1 = run(ExperimentId::situation1, 10);
    return *situation1;
  }
  const ExperimentReport& s2() {
    if (!situation2) {
      const auto start = Clock::now();
      situation2 = run(ExperimentId::situation2, 10);
      situation2_seconds = seconds_since(start);
    }
    return *situation2;
  }
  const ExperimentReport& s4() {
    if (!situation4) situation4 = run(ExperimentId::situation4, 10);
    return *situation4;
  }
  const ExperimentReport& large() {
    if (!sens_large) sens_large = run(ExperimentId::phi_sensitivity_large, 10);
    return *sens_large;
  }
  const ExperimentReport& small() {
    if (!sens_small) sens_small = run(ExperimentId::phi_sensitivity_small, 10);
    return *sens_small;
  }
};

Outcome decomposition_identity() {
  const auto start = Clock::now();
  Rng rng(20240101);
  double worst = 0.0;
  for (int j = 0; j < 100; ++j) {
    const auto joint = random_joint(rng, JointShape::decomposition);
    for (int c = 0; c < 10; ++c) worst = std::max(worst, verify_decomposition(joint, random_classifier(rng, 2)));
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-10 && elapsed < 5.0 ? Verdict::pass : Verdict::fail,
          fmt("max |R_PN - R_PbN| = %.3g over 1000 cases, %.3f s", worst, elapsed)};
}

Outcome pconf_identity() {
  const auto start = Clock::now();
  Rng rng(20240102);
  double worst = 0.0;
  for (int j = 0; j < 100; ++j) {
    const auto joint = random_joint(rng, JointShape::pconf);
    worst = std::max(worst, verify_pconf(joint, random_classifier(rng, 2)));
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-10 && elapsed < 5.0 ? Verdict::pass : Verdict::fail,
          fmt("max |R_PN - R_Pconf| = %.3g over 100 joints, %.3f s", worst, elapsed)};
}

std::vector<FeatureVector> cloud(Rng& rng, std::size_t n) {
  std::vector<FeatureVector> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_point(rng, 2, 4.0));
  return out;
}

Outcome gradient_correctness() {
  Rng rng(20240103);
  const MixtureDensity pos = MixtureDensity::uniform({{{0.0, 0.0}, 1.0}});
  const MixtureDensity bn = MixtureDensity::uniform({{{2.0, 2.0}, 1.0}, {{-2.0, 3.0}, 1.0}});
  double worst_pn = 0, worst_pconf = 0, worst_naive = 0, worst_adjusted = 0;
  for (int t = 0; t < 20; ++t) {
    const auto p = cloud(rng, 20), n = cloud(rng, 10);
    const auto clf = random_classifier(rng, 2, 1.0);
    const ProblemParams params(0.3 + 0.4 * rng.uniform(), 0.05 + 0.1 * rng.uniform());
    const SigmaField field(pos, bn, params);
    const auto sp = sigma_values(field, p), sn = sigma_values(field, n);
    std::vector<double> conf;
    for (std::size_t i = 0; i < p.size(); ++i) conf.push_back(0.05 + 0.95 * rng.uniform());
    const double k = 0.3 + 3.7 * rng.uniform();
    worst_pn = std::max(worst_pn, pbn::testing::fd_relative_error(EmpiricalRisk::pn(p, n, params.pi()), clf));
    for (const auto form : {ScaleForm::margin, ScaleForm::loss}) {
      worst_pconf = std::max(worst_pconf, pbn::testing::fd_relative_error(
                                              EmpiricalRisk::pconf(p, conf, params.pi(), form), clf));
      worst_naive = std::max(worst_naive, pbn::testing::fd_relative_error(
                                              EmpiricalRisk::pbn(p, n, skew_weights(sp, 1.0, 0.01),
                                                                 skew_weights(sn, 1.0, 0.01), params, form),
                                              clf));
      worst_adjusted = std::max(worst_adjusted, pbn::testing::fd_relative_error(
                                                    EmpiricalRisk::pbn(p, n, skew_weights(sp, k, 0.01),
                                                                       skew_weights(sn, k, 0.01), params, form),
                                                    clf));
    }
  }
  const double worst = std::max({worst_pn, worst_pconf, worst_naive, worst_adjusted});
  std::ostringstream detail;
  detail << "max relative error PN " << worst_pn << ", Pconf " << worst_pconf << ", naive PbN " << worst_naive
         << ", adjusted PbN " << worst_adjusted;
  return {worst <= 1e-6 ? Verdict::pass : Verdict::fail, detail.str()};
}

Outcome situation2_table(Runs& runs) {
  const auto& rows = runs.s2().rows;
  bool ok = runs.situation2_seconds < 300.0;
  std::ostringstream detail;
  detail.precision(4);
  detail << "A.PbN";
  for (const auto& row : rows) {
    const double a = column(row, "A.PbN").mean;
    detail << ' ' << a;
    ok = ok && a >= 93.0 - 3.0;
  }
  const double naive_far = column(rows.back(), "N.PbN").mean;
  ok = ok && naive_far <= 82.0 + 3.0;
  detail << "; N.PbN at " << rows.back().condition << ' ' << naive_far << "; PN";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double pn = column(rows[i], "PN").mean;
    detail << ' ' << pn;
    if (i > 0) ok = ok && pn < column(rows[i - 1], "PN").mean;
  }
  detail << "; " << runs.situation2_seconds << " s";
  return {ok ? Verdict::pass : Verdict::fail, detail.str()};
}

Outcome situation1_table(Runs& runs) {
  const auto& rows = runs.s1().rows;
  bool ok = true;
  std::ostringstream detail;
  detail.precision(4);
  detail << "A.PbN";
  for (const auto& row : rows) {
    const double a = column(row, "A.PbN").mean;
    detail << ' ' << a;
    ok = ok && a >= 82.0 - 3.0 && a <= 89.0 + 3.0;
  }
  const auto& far = rows.back();
  const double gap = column(far, "A.PbN").mean - column(far, "PN").mean;
  ok = ok && gap >= 3.0;
  detail << "; A.PbN - PN at " << far.condition << " = " << gap;
  return {ok ? Verdict::pass : Verdict::fail, detail.str()};
}

Outcome proportional_trend(Runs& runs) {
  bool ok = true;
  std::ostringstream detail;
  detail.precision(3);
  detail << "situation 4 A.PbN - N.PbN per row:";
  for (const auto& row : runs.s4().rows) {
    const double gap = column(row, "A.PbN").mean - column(row, "N.PbN").mean;
    detail << ' ' << gap;
    ok = ok && gap >= 5.0;
  }
  return {ok ? Verdict::pass : Verdict::fail, detail.str()};
}

Outcome phi_magnitudes(Runs& runs) {
  bool ok = true;
  std::ostringstream detail;
  detail.precision(3);
  auto check = [&](const ExperimentReport& report, const char* name, double lo, double hi) {
    detail << name << " phi-hat %";
    for (const auto& row : report.rows) {
      detail << ' ' << *row.phi_mean;
      ok = ok && *row.phi_mean >= lo && *row.phi_mean <= hi;
    }
    detail << "; ";
  };
  check(runs.s1(), "situation 1", 7.0, 14.0);
  check(runs.s2(), "situation 2", 1.0, 5.0);
  return {ok ? Verdict::pass : Verdict::fail, detail.str()};
}

Outcome phi_sensitivity_check(Runs& runs) {
  bool ok = true;
  std::ostringstream detail;
  detail.precision(3);
  detail << "small overlap max |c - c=1.0| for c in {1.3, 1.5}:";
  double worst = 0.0;
  for (const auto& row : runs.small().rows) {
    const double base = column(row, "c=1.0").mean;
    for (const auto* c : {"c=1.3", "c=1.5"}) worst = std::max(worst, std::abs(column(row, c).mean - base));
  }
  ok = worst <= 1.5;
  detail << ' ' << worst << "; large overlap c=1.0 - c=0.5 per row:";
  for (const auto& row : runs.large().rows) {
    const double drop = column(row, "c=1.0").mean - column(row, "c=0.5").mean;
    detail << ' ' << drop;
    ok = ok && drop >= 3.0;
  }
  return {ok ? Verdict::pass : Verdict::fail, detail.str()};
}

Outcome benchmark_table() {
  const char* path = std::getenv("PBN_WIRELESS_DATA");
  if (path == nullptr || *path == '\0') {
    return {Verdict::skip, "set PBN_WIRELESS_DATA to the UCI wifi_localization.txt file to run this check"};
  }
  ExperimentConfig config;
  config.experiment = ExperimentId::wireless;
  config.trials = 20;
  config.data_path = path;
  const auto report = run_experiment(config);
  auto row = [&](std::string_view label) -> const SummaryRow& {
    for (const auto& r : report.rows) {
      if (r.condition == label) return r;
    }
    throw std::runtime_error("missing row " + std::string(label));
  };
  const double gap1 = column(row("Room 1"), "A.PbN").mean - column(row("Room 1"), "PN").mean;
  const double gap4 = column(row("Room 4"), "A.PbN").mean - column(row("Room 4"), "PN").mean;
  const double room3 = column(row("Room 3"), "A.PbN").mean;
  const bool ok = gap1 >= 3.0 && gap4 >= 3.0 && room3 >= 96.0 - 5.0;
  return {ok ? Verdict::pass : Verdict::fail,
          fmt("A.PbN - PN: Room 1 %.2f, Room 4 %.2f; Room 3 A.PbN %.2f", gap1, gap4, room3)};
}

Outcome determinism() {
  bool ok = true;
  std::string detail;
  for (const auto id : {ExperimentId::situation3, ExperimentId::phi_sensitivity_small}) {
    ExperimentConfig config;
    config.experiment = id;
    config.trials = 3;
    config.seed = 99;
    const auto first = run_experiment(config);
    config.threads = 2;
    const auto second = run_experiment(config);
    for (const auto format : {TableFormat::csv, TableFormat::markdown}) {
      ok = ok && emit_table(first.rows, format) == emit_table(second.rows, format);
    }
    detail += std::string(to_string(id)) + (ok ? " identical; " : " differs; ");
  }
  return {ok ? Verdict::pass : Verdict::fail, detail};
}

Outcome loss_density_properties() {
  Rng rng(20240111);
  std::vector<std::string> broken;
  auto expect = [&](bool cond, const char* what) {
    if (!cond && std::find(broken.begin(), broken.end(), what) == broken.end()) broken.emplace_back(what);
  };

  for (int i = 0; i < 100000; ++i) {
    const double z1 = 60.0 * (rng.uniform() - 0.5), z2 = 60.0 * (rng.uniform() - 0.5), t = rng.uniform();
    expect(logistic_loss(t * z1 + (1 - t) * z2) <= t * logistic_loss(z1) + (1 - t) * logistic_loss(z2) + 1e-12,
           "convexity");
    expect(logistic_loss(z1) > 0.0, "positivity");
    const double lo = std::min(z1, z2), hi = std::max(z1, z2);
    expect(lo == hi || logistic_loss(lo) >= logistic_loss(hi), "monotone decrease");
    expect(zero_one_loss(z1) + zero_one_loss(-z1) == 1.0, "0-1 symmetry");
  }
  expect(logistic_loss(700.0) > 0.0, "positivity");
  expect(zero_one_loss(0.0) + zero_one_loss(-0.0) == 1.0, "0-1 symmetry");

  for (int i = 0; i < 1000; ++i) {
    const double pi = 0.05 + 0.9 * rng.uniform();
    const double rho = (1 - pi) * (0.01 + 0.99 * rng.uniform());
    const MixtureDensity pos = MixtureDensity::uniform({{random_point(rng, 2), 1.0}});
    const MixtureDensity bn =
        MixtureDensity::uniform({{random_point(rng, 2), 1.0}, {random_point(rng, 2), 1.0}});
    const SigmaField field(pos, bn, ProblemParams(pi, rho));
    const auto x = random_point(rng, 2, 6.0);
    const double s = field.sigma_tilde(x).value;
    expect(s > 0.0 && s <= 1.0, "sigma in (0, 1]");
    const double rho2 = rho + (1 - pi - rho) * rng.uniform();
    if (rho2 > 0.0) {
      expect(SigmaField(pos, bn, ProblemParams(pi, rho2)).sigma_tilde(x).value >= s, "sigma monotone in rho");
    }
    const double clamped = std::clamp(s, 0.01, 1.0);
    expect(std::abs(field.weight(x, 1.0) - (1 - clamped) / clamped) <= 1e-12 * std::max(1.0, (1 - clamped) / clamped),
           "k = 1 weight");
    const double k = 0.1 + 5.0 * rng.uniform();
    expect(field.weight(x, k) <= 99.0 + 1e-9 && field.weight(x, k) >= 0.0, "weight cap 99");
  }
  expect(skew_weight(1e-9, 3.0, 0.01) <= 99.0 + 1e-9, "weight cap 99");

  std::vector<FeatureVector> support;
  for (int i = 0; i < 5; ++i) support.push_back(random_point(rng, 2, 2.0));
  const KdeDensity kde(support, 1.0);
  const double lo = -8.0, hi = 8.0, area = (hi - lo) * (hi - lo);
  const int draws = 400000;
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) {
    const FeatureVector x{lo + (hi - lo) * rng.uniform(), lo + (hi - lo) * rng.uniform()};
    sum += kde_pdf(x, kde);
  }
  const double integral = area * sum / draws;
  expect(std::abs(integral - 1.0) <= 0.02, "KDE normalization");

  std::string detail = fmt("KDE integral %.4f", integral);
  for (const auto& b : broken) detail += "; violated: " + b;
  return {broken.empty() ? Verdict::pass : Verdict::fail, detail};
}

}  // namespace

int main() {
  Runs runs;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"decomposition identity", decomposition_identity},
      {"Pconf identity", pconf_identity},
      {"gradient correctness", gradient_correctness},
      {"situation 2 table", [&] { return situation2_table(runs); }},
      {"situation 1 table", [&] { return situation1_table(runs); }},
      {"situation 4 adjusted vs naive", [&] { return proportional_trend(runs); }},
      {"phi-hat magnitudes", [&] { return phi_magnitudes(runs); }},
      {"phi sensitivity", [&] { return phi_sensitivity_check(runs); }},
      {"wireless benchmark", benchmark_table},
      {"determinism", determinism},
      {"loss and density properties", loss_density_properties},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {Verdict::fail, std::string("error: ") + e.what()};
    }
    const char* verdict = outcome.verdict == Verdict::pass ? "PASS" : outcome.verdict == Verdict::skip ? "SKIP" : "FAIL";
    if (outcome.verdict == Verdict::fail) ++failures;
    std::printf("criterion %2zu %-30s %s  %s\n", i + 1, criteria[i].first, verdict, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
