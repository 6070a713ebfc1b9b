/*
 * Copyright 2026 The vscreen Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Throughput of the hot paths.

#include <benchmark/benchmark.h>

#include "vscreen/bilstm.h"
#include "vscreen/explain.h"
#include "vscreen/harness.h"
#include "vscreen/model.h"
#include "vscreen/svm.h"
#include "vscreen/synthetic.h"
#include "vscreen/tree.h"

namespace {

using namespace vscreen;

const harness::Toolkit& Kit() {
  static const auto kit = harness::Toolkit::Load(DefaultAssetsDir());
  return *kit;
}

std::vector<corpus::UserRecord> Users(std::size_t per_class) {
  auto cfg = synth::SeparableConfig(1);
  cfg.positives = per_class;
  cfg.controls = per_class;
  return synth::GenerateTextCorpus(cfg);
}

void BM_ExtractSentences(benchmark::State& state) {
  const auto users = Users(50);
  std::size_t sentences = 0;
  for (auto _ : state) {
    const auto series = Kit().Extract(users, 1);
    for (const auto& s : series) sentences += s.rows();
  }
  state.counters["sentences/s"] =
      benchmark::Counter(static_cast<double>(sentences), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_ExtractSentences)->Unit(benchmark::kMillisecond);

struct Blobs {
  Matrix x;
  std::vector<int> y;
  explicit Blobs(int n, int f = 140) : x(n, f), y(static_cast<std::size_t>(n)) {
    Rng rng(2);
    for (int i = 0; i < n; ++i) {
      y[static_cast<std::size_t>(i)] = i % 2;
      for (int j = 0; j < f; ++j) x(i, j) = StandardNormal(rng) + (j < 5 && i % 2 ? 0.7 : 0);
    }
  }
};

void BM_RandomForest(benchmark::State& state) {
  const Blobs data(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ml::TrainRandomForest(data.x, data.y, ml::ForestParams{}, 1, 1));
  }
}
BENCHMARK(BM_RandomForest)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);

void BM_GradientBoosting(benchmark::State& state) {
  const Blobs data(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ml::TrainGradientBoosting(data.x, data.y, ml::BoostingParams{}, 1));
  }
}
BENCHMARK(BM_GradientBoosting)->Arg(1600)->Unit(benchmark::kMillisecond);

void BM_SvmRbf(benchmark::State& state) {
  const Blobs data(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ml::TrainSvmRbf(data.x, data.y, ml::SvmParams{}, 1));
  }
}
BENCHMARK(BM_SvmRbf)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);

void BM_BiLstmStep(benchmark::State& state) {
  seq::BiLstmConfig cfg;
  cfg.input_dim = 140;
  cfg.hidden = static_cast<int>(state.range(0));
  const seq::BiLstmNet net(cfg, 1);
  Rng rng(3);
  std::vector<Matrix> seqs;
  std::vector<int> labels;
  for (int u = 0; u < 32; ++u) {
    Matrix s(140, 8 + u % 8);
    for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = StandardNormal(rng);
    seqs.push_back(s);
    labels.push_back(u % 2);
  }
  std::vector<const Matrix*> batch;
  for (const auto& s : seqs) batch.push_back(&s);
  std::vector<Matrix> grads;
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.LossAndGradient(batch, labels, &rng, &grads));
  }
}
BENCHMARK(BM_BiLstmStep)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_LocalSurrogate(benchmark::State& state) {
  const explain::MaskPredictor predict = [](const std::vector<explain::Mask>& masks) {
    Vector y(static_cast<Eigen::Index>(masks.size()));
    for (std::size_t i = 0; i < masks.size(); ++i) {
      y(static_cast<Eigen::Index>(i)) = 0.3 * masks[i][0] + 0.1 * masks[i][4];
    }
    return y;
  };
  const explain::SurrogateConfig cfg;
  const auto kernel = explain::KernelConfig::ForGroups(8);
  uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(explain::FitLocalSurrogate(predict, 8, cfg, kernel, ++seed));
  }
}
BENCHMARK(BM_LocalSurrogate)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
