#include <benchmark/benchmark.h>

#include "pbn/datagen.hpp"
#include "pbn/density.hpp"
#include "pbn/risk.hpp"
#include "pbn/training.hpp"

using namespace pbn;

namespace {

Situation situation() {
  SituationSpec spec{Overlap::large, SingleComponent{1}, {}};
  return make_situation(spec, 1, std::nullopt);
}

EmpiricalRisk pbn_risk(const Situation& s) {
  const SigmaField field(s.positive_density, s.biased_negative_density, s.params);
  const auto pos = features(s.splits.train_positive);
  const auto bn = features(s.splits.train_biased_negative);
  return EmpiricalRisk::pbn(pos, bn, skew_weights(sigma_values(field, pos), 1.0, 0.01),
                            skew_weights(sigma_values(field, bn), 1.0, 0.01), s.params);
}

void BM_PbnGradient(benchmark::State& state) {
  const auto risk = pbn_risk(situation());
  const LinearClassifier clf({0.3, -0.2}, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(risk.gradient(clf));
}
BENCHMARK(BM_PbnGradient);

void BM_KdeSigma(benchmark::State& state) {
  const auto s = situation();
  const double h = 0.1;
  const SigmaField field(KdeDensity(features(s.splits.train_positive), h),
                         KdeDensity(features(s.splits.train_biased_negative), h),
                         KdeDensity(s.splits.observed_pool(), h), s.params);
  const auto points = features(s.splits.valid_positive);
  for (auto _ : state) benchmark::DoNotOptimize(sigma_values(field, points));
}
BENCHMARK(BM_KdeSigma)->Unit(benchmark::kMillisecond);

void BM_SgdTraining(benchmark::State& state) {
  const auto risk = pbn_risk(situation());
  SgdConfig config{.learning_rate = 0.1};
  config.epochs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(train(risk, config));
}
BENCHMARK(BM_SgdTraining)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
