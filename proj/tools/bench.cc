// tools/bench.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Times every parallel kernel against its serial reference and confirms
// bitwise agreement. The serial forms are the ground truth the tests pin;
// this binary shows what the parallel forms buy.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "augment/audio_ops.h"
#include "backend/backend.h"
#include "base/parallel.h"
#include "base/rng.h"
#include "fusion/fusion.h"
#include "metrics/metrics.h"
#include "metrics/trials.h"

namespace lid {
namespace {

double TimeMs(const std::function<void()>& fn) {
  double best = 1e300;
  for (int rep = 0; rep < 3; ++rep) {
    auto start = std::chrono::steady_clock::now();
    fn();
    auto stop = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(stop - start).count();
    if (ms < best) best = ms;
  }
  return best;
}

void Report(const char* name, double serial_ms, double parallel_ms,
            bool identical) {
  std::printf("%-16s %10.1f ms %10.1f ms %7.2fx  %s\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms,
              identical ? "bitwise equal" : "MISMATCH");
}

std::vector<double> RandomSignal(std::int64_t n, Rng* rng) {
  std::vector<double> x(n);
  for (auto& v : x) v = 0.5 * rng->Gaussian();
  return x;
}

ScoreMatrix RandomScores(int n, int k, Rng* rng) {
  ScoreMatrix scores;
  std::vector<std::string> names(k);
  for (int i = 0; i < k; ++i) names[i] = "L" + std::to_string(i);
  scores.languages = LanguageList(names);
  scores.values.resize(n, k);
  for (int t = 0; t < n; ++t)
    for (int j = 0; j < k; ++j) scores.values(t, j) = rng->Gaussian();
  for (int t = 0; t < n; ++t) scores.ids.push_back("u" + std::to_string(t));
  return scores;
}

void RunAll() {
  Rng rng(7);
  std::printf("threads: %d\n", MaxThreads());
  std::printf("%-16s %13s %13s %8s\n", "kernel", "serial", "parallel",
              "speedup");

  {
    std::vector<double> x = RandomSignal(120000, &rng);
    std::vector<double> kernel = RandomSignal(3000, &rng);
    std::vector<double> serial, parallel;
    double s = TimeMs([&] { serial = ConvolveTruncatedSerial(x, kernel); });
    double p = TimeMs([&] { parallel = ConvolveTruncated(x, kernel); });
    Report("convolve", s, p, serial == parallel);
  }
  {
    std::vector<double> x = RandomSignal(400000, &rng);
    std::int64_t out_len = static_cast<std::int64_t>(x.size() / 1.1);
    std::vector<double> serial, parallel;
    double s = TimeMs([&] { serial = SincResampleSerial(x, out_len, 1.1); });
    double p = TimeMs([&] { parallel = SincResample(x, out_len, 1.1); });
    Report("resample", s, p, serial == parallel);
  }
  {
    const int n = 8000, d = 256, k = 13;
    EmbeddingSet set;
    set.vectors.resize(n, d);
    for (int t = 0; t < n; ++t)
      for (int j = 0; j < d; ++j) set.vectors(t, j) = rng.Gaussian();
    for (int t = 0; t < n; ++t) set.ids.push_back("u" + std::to_string(t));
    BackendModel model;
    std::vector<std::string> names(k);
    for (int i = 0; i < k; ++i) names[i] = "L" + std::to_string(i);
    model.languages = LanguageList(names);
    model.mean = Eigen::VectorXd::Zero(d);
    model.weights = Eigen::MatrixXd::Random(k, d);
    model.bias = Eigen::VectorXd::Random(k);
    model.balance_weights = Eigen::VectorXd::Ones(k);
    ScoreMatrix serial, parallel;
    double s = TimeMs([&] { serial = ScoreSerial(model, set); });
    double p = TimeMs([&] { parallel = Score(model, set); });
    Report("score", s, p, serial.values == parallel.values);
  }
  {
    ScoreMatrix scores = RandomScores(4000, 13, &rng);
    TrialLabels labels;
    labels.ids = scores.ids;
    for (int t = 0; t < scores.NumRows(); ++t)
      labels.true_lang.push_back(t % 13);
    DetectionTrialSet trials = ExpandTrials(scores, labels, 0.5);
    double serial_v = 0, parallel_v = 0;
    double s = TimeMs([&] { serial_v = MinCavgSerial(trials, 0.5); });
    double p = TimeMs([&] { parallel_v = MinCavg(trials, 0.5); });
    Report("min-cavg", s, p, serial_v == parallel_v);
  }
  {
    const int n = 60000, k = 13, num_systems = 3;
    std::vector<ScoreMatrix> systems;
    for (int i = 0; i < num_systems; ++i) systems.push_back(RandomScores(n, k, &rng));
    for (int i = 1; i < num_systems; ++i) systems[i].ids = systems[0].ids;
    std::vector<int> label_ids(n);
    for (int t = 0; t < n; ++t) label_ids[t] = t % k;
    Eigen::VectorXd params = Eigen::VectorXd::Zero(num_systems + k);
    params.head(num_systems).setConstant(1.0 / num_systems);
    Eigen::VectorXd gs(num_systems + k), gp(num_systems + k);
    double serial_v = 0, parallel_v = 0;
    double s = TimeMs(
        [&] { serial_v = CllrObjectiveSerial(params, systems, label_ids, &gs); });
    double p = TimeMs(
        [&] { parallel_v = CllrObjective(params, systems, label_ids, &gp); });
    Report("cllr-objective", s, p, serial_v == parallel_v && gs == gp);
  }
}

}  // namespace
}  // namespace lid

int main() {
  lid::RunAll();
  return 0;
}
