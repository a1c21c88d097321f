// tests/acceptance.cc

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

// Release acceptance gate: ten end-to-end correctness criteria, one
// pass/fail line each, nonzero exit if any fails. Everything here is
// checked against independent oracles, analytic ground truth, or exact
// invariants; nothing is compared against recorded outputs of the library
// itself.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "augment/audio_ops.h"
#include "augment/augmix.h"
#include "augment/plan.h"
#include "augment/wav_io.h"
#include "backend/backend.h"
#include "backend/multinomial.h"
#include "base/rng.h"
#include "core/embedding_io.h"
#include "core/manifest.h"
#include "core/model_io.h"
#include "core/types.h"
#include "fusion/fusion.h"
#include "fusion/lbfgs.h"
#include "metrics/metrics.h"
#include "metrics/trials.h"
#include "nn/aam.h"
#include "nn/gradcheck.h"
#include "nn/pooling.h"
#include "oracles.h"
#include "pipeline/config.h"
#include "pipeline/fewshot.h"
#include "pipeline/pipeline.h"
#include "pipeline/synthetic.h"
#include "testutil.h"

namespace lid {
namespace {

using testing::MakeIds;
using testing::MakeLanguages;
using testing::OracleCavgAt;
using testing::OracleCllrBits;
using testing::OracleEerPercent;
using testing::OracleExpand;
using testing::OracleMinCavg;
using testing::OracleTrials;
using testing::RandomScoredSet;
using testing::ReadFileBytes;
using testing::ScoredSet;
using testing::TempDir;

using Outcome = std::pair<bool, std::string>;

std::string Fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

Eigen::MatrixXd GaussMat(int rows, int cols, Rng* rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; r++)
    for (int c = 0; c < cols; c++) m(r, c) = rng->Gaussian();
  return m;
}

Eigen::VectorXd GaussVec(int n, Rng* rng) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; i++) v(i) = rng->Gaussian();
  return v;
}

// Smallest analytic gradient magnitude at x0. Central differences at step
// 1e-5 carry ~1e-10 of cancellation noise, so instances with near-zero
// gradient coordinates are redrawn: they would measure floating-point
// noise, not the correctness of the analytic gradient.
double MinAbsGrad(const ScalarFn& f, const Eigen::VectorXd& x0) {
  Eigen::VectorXd g;
  f(x0, &g);
  return g.cwiseAbs().minCoeff();
}

// Criterion 1: Cavg, minCavg, EER and Cllr against the brute-force oracles
// on 200 randomized instances (N <= 100, K in 2..13), tolerance 1e-9.
Outcome MetricOracleEquivalence() {
  Rng rng(20260815);
  double max_diff = 0.0;
  for (int inst = 0; inst < 200; inst++) {
    int k = static_cast<int>(rng.UniformInt(2, 13));
    int n = static_cast<int>(rng.UniformInt(k, 100));
    ScoredSet set = RandomScoredSet(n, k, &rng, 2.0, 2.0 * rng.Uniform());
    double p_target = 0.1 + 0.8 * rng.Uniform();
    DetectionTrialSet trials = ExpandTrials(set.scores, set.labels, p_target);
    OracleTrials oracle = OracleExpand(set.scores.values, set.truth);

    double thresholds[2] = {0.0, -2.0 + 4.0 * rng.Uniform()};
    for (double thr : thresholds) {
      max_diff = std::max(max_diff, std::abs(Cavg(trials, p_target, thr) -
                                             OracleCavgAt(oracle, p_target, thr)));
    }
    max_diff = std::max(max_diff, std::abs(MinCavg(trials, p_target) -
                                           OracleMinCavg(oracle, p_target)));
    max_diff = std::max(
        max_diff, std::abs(EerPercent(trials) - OracleEerPercent(oracle)));
    max_diff = std::max(
        max_diff, std::abs(CllrBits(set.scores, set.labels) -
                           OracleCllrBits(set.scores.values, set.truth)));
  }
  return {max_diff < 1e-9,
          Fmt("max metric diff %.2e over 200 instances", max_diff)};
}

// Parameter spans of the active pooling tensors, in a fixed pack order.
std::vector<std::pair<double*, Eigen::Index>> PoolingSpans(PoolingParams* p) {
  using Span = std::pair<double*, Eigen::Index>;
  switch (p->variant) {
    case PoolingVariant::kAttentiveStats:
      return {Span{p->att_w.data(), p->att_w.size()},
              Span{p->att_b.data(), p->att_b.size()},
              Span{p->att_v.data(), p->att_v.size()}};
    case PoolingVariant::kMha:
      return {Span{p->mha_w1.data(), p->mha_w1.size()},
              Span{p->mha_heads.data(), p->mha_heads.size()}};
    case PoolingVariant::kGmha:
      return {Span{p->mha_w1.data(), p->mha_w1.size()},
              Span{p->mha_heads.data(), p->mha_heads.size()},
              Span{p->gmha_v.data(), p->gmha_v.size()},
              Span{p->gmha_u.data(), p->gmha_u.size()}};
  }
  return {};
}

std::vector<std::pair<double*, Eigen::Index>> PoolingGradSpans(
    PoolingGrads* g, PoolingVariant variant) {
  using Span = std::pair<double*, Eigen::Index>;
  switch (variant) {
    case PoolingVariant::kAttentiveStats:
      return {Span{g->att_w.data(), g->att_w.size()},
              Span{g->att_b.data(), g->att_b.size()},
              Span{g->att_v.data(), g->att_v.size()}};
    case PoolingVariant::kMha:
      return {Span{g->mha_w1.data(), g->mha_w1.size()},
              Span{g->mha_heads.data(), g->mha_heads.size()}};
    case PoolingVariant::kGmha:
      return {Span{g->mha_w1.data(), g->mha_w1.size()},
              Span{g->mha_heads.data(), g->mha_heads.size()},
              Span{g->gmha_v.data(), g->gmha_v.size()},
              Span{g->gmha_u.data(), g->gmha_u.size()}};
  }
  return {};
}

double PoolingGradWorst(PoolingVariant variant, int instances, Rng* rng) {
  double worst = 0.0;
  for (int inst = 0; inst < instances; inst++) {
    int t = static_cast<int>(rng->UniformInt(3, 8));
    int h = static_cast<int>(rng->UniformInt(4, 10));
    int n_att = static_cast<int>(rng->UniformInt(3, 6));
    int n_heads = static_cast<int>(rng->UniformInt(1, 4));

    PoolingParams base = RandomPooling(variant, h, n_att, n_heads, rng);
    Eigen::MatrixXd frames = GaussMat(t, h, rng);
    Eigen::VectorXd g = GaussVec(PoolingOutputDim(base, h), rng);
    Eigen::VectorXd x0;

    auto pack = [&]() {
      auto spans = PoolingSpans(&base);
      Eigen::Index total = frames.size();
      for (const auto& s : spans) total += s.second;
      x0.resize(total);
      Eigen::Map<Eigen::MatrixXd>(x0.data(), t, h) = frames;
      Eigen::Index pos = frames.size();
      for (const auto& s : spans) {
        std::copy(s.first, s.first + s.second, x0.data() + pos);
        pos += s.second;
      }
    };

    ScalarFn f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
      Eigen::MatrixXd fr = Eigen::Map<const Eigen::MatrixXd>(x.data(), t, h);
      PoolingParams p = base;
      auto ps = PoolingSpans(&p);
      Eigen::Index at = fr.size();
      for (const auto& s : ps) {
        std::copy(x.data() + at, x.data() + at + s.second, s.first);
        at += s.second;
      }
      double value = g.dot(PoolForward(fr, p));
      if (grad != nullptr) {
        PoolingGrads pg = PoolBackward(fr, p, g);
        grad->resize(x.size());
        Eigen::Map<Eigen::MatrixXd>(grad->data(), t, h) = pg.frames;
        auto gs = PoolingGradSpans(&pg, p.variant);
        Eigen::Index gat = fr.size();
        for (const auto& s : gs) {
          std::copy(s.first, s.first + s.second, grad->data() + gat);
          gat += s.second;
        }
      }
      return value;
    };

    // Redraw until the instance sits away from the ReLU kinks and every
    // gradient coordinate is resolvable by central differences.
    pack();
    for (int attempt = 0; attempt < 200; attempt++) {
      bool kink_free = variant == PoolingVariant::kAttentiveStats ||
                       (frames * base.mha_w1.transpose())
                               .array()
                               .abs()
                               .minCoeff() > 1e-3;
      if (kink_free && MinAbsGrad(f, x0) > 1e-3) break;
      base = RandomPooling(variant, h, n_att, n_heads, rng);
      frames = GaussMat(t, h, rng);
      g = GaussVec(PoolingOutputDim(base, h), rng);
      pack();
    }
    worst = std::max(worst, CheckGradient(f, x0, 1e-5, 30, rng).max_rel_error);
  }
  return worst;
}

// Criterion 2: analytic gradients of the multinomial loss, the fusion Cllr
// objective, all three pooling variants and the AAM loss against central
// differences: step 1e-5, 20 random instances each, rel error < 1e-6.
Outcome GradientChecks() {
  Rng rng(777);
  double worst = 0.0;

  for (int inst = 0; inst < 20; inst++) {
    int k = static_cast<int>(rng.UniformInt(2, 5));
    int p = static_cast<int>(rng.UniformInt(2, 6));
    int n = static_cast<int>(rng.UniformInt(2 * k, 40));
    Eigen::MatrixXd features;
    std::vector<int> labels(n);
    Eigen::VectorXd balance;
    double l2 = 0.0;
    ScalarFn f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
      Eigen::MatrixXd w = Eigen::Map<const Eigen::MatrixXd>(x.data(), k, p);
      Eigen::VectorXd b = x.tail(k);
      Eigen::MatrixXd gw;
      Eigen::VectorXd gb;
      double value = MultinomialLoss(features, labels, balance, l2, w, b,
                                     grad ? &gw : nullptr, grad ? &gb : nullptr);
      if (grad != nullptr) {
        grad->resize(x.size());
        Eigen::Map<Eigen::MatrixXd>(grad->data(), k, p) = gw;
        grad->tail(k) = gb;
      }
      return value;
    };
    Eigen::VectorXd x0;
    for (int attempt = 0; attempt < 200; attempt++) {
      features = GaussMat(n, p, &rng);
      std::vector<std::int64_t> counts(k, 0);
      for (int i = 0; i < n; i++) {
        labels[i] = i < k ? i : static_cast<int>(rng.UniformInt(0, k - 1));
        counts[labels[i]]++;
      }
      balance = RebalanceWeights(counts, MakeLanguages(k));
      l2 = 0.05 * rng.Uniform();
      x0 = 0.5 * GaussVec(k * p + k, &rng);
      if (MinAbsGrad(f, x0) > 3e-3) break;
    }
    worst = std::max(worst, CheckGradient(f, x0, 1e-5, 25, &rng).max_rel_error);
  }

  for (int inst = 0; inst < 20; inst++) {
    int s = static_cast<int>(rng.UniformInt(1, 3));
    int k = static_cast<int>(rng.UniformInt(2, 6));
    int n = static_cast<int>(rng.UniformInt(2 * k, 50));
    std::vector<int> labels(n);
    std::vector<ScoreMatrix> systems(s);
    ScalarFn f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
      return CllrObjective(x, systems, labels, grad);
    };
    Eigen::VectorXd x0;
    for (int attempt = 0; attempt < 200; attempt++) {
      for (int i = 0; i < n; i++)
        labels[i] = i < k ? i : static_cast<int>(rng.UniformInt(0, k - 1));
      for (int j = 0; j < s; j++) {
        systems[j].ids = MakeIds(n);
        systems[j].languages = MakeLanguages(k);
        systems[j].values = 2.0 * GaussMat(n, k, &rng);
      }
      x0 = GaussVec(s + k, &rng);
      if (MinAbsGrad(f, x0) > 1e-3) break;
    }
    worst = std::max(worst, CheckGradient(f, x0, 1e-5, 25, &rng).max_rel_error);
  }

  for (PoolingVariant variant :
       {PoolingVariant::kAttentiveStats, PoolingVariant::kMha,
        PoolingVariant::kGmha}) {
    worst = std::max(worst, PoolingGradWorst(variant, 20, &rng));
  }

  const double pi = std::acos(-1.0);
  for (int inst = 0; inst < 20; inst++) {
    int k = static_cast<int>(rng.UniformInt(2, 6));
    int h = static_cast<int>(rng.UniformInt(3, 8));
    int label = static_cast<int>(rng.UniformInt(0, k - 1));
    AamParams params;
    ScalarFn f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
      Eigen::VectorXd e = x.head(h);
      AamParams p = params;
      p.class_weights =
          Eigen::Map<const Eigen::MatrixXd>(x.data() + h, k, h);
      AamResult r = AamLoss(e, label, p);
      if (grad != nullptr) {
        grad->resize(x.size());
        grad->head(h) = r.grad_embedding;
        Eigen::Map<Eigen::MatrixXd>(grad->data() + h, k, h) =
            r.grad_class_weights;
      }
      return r.loss;
    };
    Eigen::VectorXd x0(h + k * h);
    // Moderate scales keep the softmax away from double-precision
    // saturation; reject draws near the fallback-branch boundary and the
    // sine pole, where the loss is only piecewise smooth, and draws whose
    // smallest gradient coordinate drowns in central-difference noise.
    for (int attempt = 0; attempt < 200; attempt++) {
      params.margin = 0.5 * rng.Uniform();
      params.scale = 2.0 + 3.0 * rng.Uniform();
      params.class_weights = GaussMat(k, h, &rng);
      Eigen::VectorXd emb = GaussVec(h, &rng);
      x0.head(h) = emb;
      Eigen::Map<Eigen::MatrixXd>(x0.data() + h, k, h) = params.class_weights;
      if (emb.norm() < 0.3 ||
          params.class_weights.rowwise().norm().minCoeff() < 0.3)
        continue;
      double cos_y = params.class_weights.row(label).normalized().dot(
          emb.normalized());
      if (std::abs(cos_y) > 0.99) continue;
      if (std::abs(cos_y - std::cos(pi - params.margin)) < 5e-3) continue;
      if (MinAbsGrad(f, x0) > 5e-4) break;
    }
    worst = std::max(worst, CheckGradient(f, x0, 1e-5, 30, &rng).max_rel_error);
  }

  return {worst < 1e-6, Fmt("max rel error %.2e across 120 instances", worst)};
}

// Criterion 3: the quasi-Newton minimizer on random strictly convex
// quadratics (dim <= 50, solution within 1e-8) and Rosenbrock-2D
// (f < 1e-12 within 200 iterations).
Outcome OptimizerCorrectness() {
  Rng rng(31337);
  double worst_x = 0.0;
  bool ok = true;
  for (int inst = 0; inst < 20; inst++) {
    int d = static_cast<int>(rng.UniformInt(2, 50));
    Eigen::MatrixXd a = GaussMat(d, d, &rng);
    Eigen::MatrixXd q =
        a * a.transpose() / d + 0.5 * Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd x_star = GaussVec(d, &rng);
    Objective f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
      Eigen::VectorXd r = x - x_star;
      *grad = q * r;
      return 0.5 * r.dot(q * r);
    };
    OptimizerConfig config;
    config.grad_tol = 1e-12;
    config.max_iter = 500;
    OptResult r = LbfgsMinimize(f, GaussVec(d, &rng), config);
    double err = (r.x - x_star).lpNorm<Eigen::Infinity>();
    worst_x = std::max(worst_x, err);
    ok = ok && err < 1e-8;
  }

  Objective rosenbrock = [](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    double u = 1.0 - x(0);
    double v = x(1) - x(0) * x(0);
    grad->resize(2);
    (*grad)(0) = -2.0 * u - 400.0 * x(0) * v;
    (*grad)(1) = 200.0 * v;
    return u * u + 100.0 * v * v;
  };
  Eigen::VectorXd start(2);
  start << -1.2, 1.0;
  OptimizerConfig rc;
  rc.grad_tol = 1e-9;
  rc.max_iter = 200;
  OptResult rr = LbfgsMinimize(rosenbrock, start, rc);
  ok = ok && rr.f < 1e-12 && rr.iterations <= 200;

  return {ok, Fmt("worst quadratic |x-x*| %.2e, rosenbrock f %.2e", worst_x,
                  rr.f)};
}

ScoreMatrix MiscalibratedSystem(const std::vector<std::string>& ids,
                                const std::vector<int>& truth, int k,
                                double overconfidence, double noise,
                                Rng* rng) {
  ScoreMatrix s;
  s.ids = ids;
  s.languages = MakeLanguages(k);
  int n = static_cast<int>(ids.size());
  s.values.resize(n, k);
  for (int t = 0; t < n; t++)
    for (int j = 0; j < k; j++)
      s.values(t, j) = overconfidence *
                       ((j == truth[t] ? 2.0 : 0.0) + noise * rng->Gaussian());
  return s;
}

// Criterion 4: over 50 seeds of miscalibrated synthetic scores, trained
// calibration strictly reduces dev Cllr for every system, and the fused
// Cllr never exceeds the best single calibrated system by more than 1e-9.
Outcome FusionMonotonicity() {
  Rng rng(4242);
  int reduced_seeds = 0;
  bool fused_ok = true;
  double worst_gap = -1e300;
  for (int seed = 0; seed < 50; seed++) {
    int k = 3 + (seed % 4);
    int n = 150;
    TrialLabels labels;
    labels.ids = MakeIds(n);
    std::vector<int> truth(n);
    for (int t = 0; t < n; t++)
      truth[t] = t < k ? t : static_cast<int>(rng.UniformInt(0, k - 1));
    labels.true_lang = truth;

    std::vector<ScoreMatrix> systems;
    systems.push_back(MiscalibratedSystem(labels.ids, truth, k,
                                          4.0 + 6.0 * rng.Uniform(),
                                          0.4 + 0.4 * rng.Uniform(), &rng));
    systems.push_back(MiscalibratedSystem(labels.ids, truth, k,
                                          4.0 + 6.0 * rng.Uniform(),
                                          0.4 + 0.4 * rng.Uniform(), &rng));

    OptimizerConfig config;
    config.grad_tol = 1e-9;
    config.max_iter = 500;
    bool all_reduced = true;
    double best_single = 1e300;
    for (const ScoreMatrix& sys : systems) {
      double raw = CllrBits(sys, labels);
      FusionTraining cal = CalibrateSystem(sys, labels, config);
      all_reduced = all_reduced && cal.final_cllr_bits < raw;
      best_single = std::min(best_single, cal.final_cllr_bits);
    }
    if (all_reduced) reduced_seeds++;

    FusionTraining fused = TrainFusion(systems, labels, config);
    worst_gap = std::max(worst_gap, fused.final_cllr_bits - best_single);
    fused_ok = fused_ok && fused.final_cllr_bits <= best_single + 1e-9;
  }
  return {reduced_seeds == 50 && fused_ok,
          Fmt("calibration reduced Cllr in %.0f/50 seeds, worst fusion gap "
              "%.2e bits",
              reduced_seeds, worst_gap)};
}

void WriteSplit(const SyntheticData& data, const std::string& manifest_path,
                const std::string& embeddings_path) {
  std::vector<Utterance> utterances(data.embeddings.ids.size());
  for (size_t i = 0; i < utterances.size(); i++) {
    utterances[i].id = data.embeddings.ids[i];
    utterances[i].label = data.embeddings.labels[i];
  }
  WriteManifest(manifest_path, utterances, data.languages);
  WriteEmbeddings(embeddings_path, data.embeddings);
}

// Criterion 5: a 13-language Gaussian run at separation/noise 4 through the
// full file-based pipeline reaches Cavg < 0.01 and EER < 1% as a 5-seed
// mean.
Outcome EndToEndPipeline() {
  double cavg_sum = 0.0;
  double eer_sum = 0.0;
  for (int seed = 0; seed < 5; seed++) {
    TempDir work;
    TempDir out;
    SyntheticSpec spec;
    spec.n_languages = 13;
    spec.dim = 32;
    spec.per_class_count = 60;
    spec.class_separation = 4.0;
    spec.noise_scale = 1.0;
    spec.seed = 1000 + seed;
    SyntheticSpec eval = spec;
    eval.per_class_count = 40;
    WriteSplit(GenerateSynthetic(spec, "train"), work.Path("train.jsonl"),
               work.Path("train.emb"));
    WriteSplit(GenerateSynthetic(eval, "dev"), work.Path("dev.jsonl"),
               work.Path("dev.emb"));
    WriteSplit(GenerateSynthetic(eval, "test"), work.Path("test.jsonl"),
               work.Path("test.emb"));
    PipelineInputs inputs;
    inputs.train_manifest = work.Path("train.jsonl");
    inputs.train_embeddings = work.Path("train.emb");
    inputs.dev_manifest = work.Path("dev.jsonl");
    inputs.dev_embeddings = work.Path("dev.emb");
    inputs.test_manifest = work.Path("test.jsonl");
    inputs.test_embeddings = work.Path("test.emb");

    PipelineConfig config;
    config.languages = GenerateSynthetic(spec, "train").languages.Names();
    config.seed = spec.seed;
    PipelineResult result = RunPipeline(config, inputs, out.Path());
    cavg_sum += result.report.c_avg;
    eer_sum += result.report.eer_percent;
  }
  double cavg = cavg_sum / 5.0;
  double eer = eer_sum / 5.0;
  return {cavg < 0.01 && eer < 1.0,
          Fmt("5-seed mean Cavg %.4f, EER %.3f%%", cavg, eer)};
}

// Criterion 6: few-shot enrollment on the synthetic generator: EER < 1% at
// five utterances per language and non-increasing in enrollment size, with
// one ROC interpolation step of slack.
Outcome FewshotTrend() {
  SyntheticSpec spec;
  spec.n_languages = 13;
  spec.dim = 32;
  spec.per_class_count = 20;
  spec.class_separation = 4.0;
  spec.noise_scale = 1.0;
  spec.seed = 77;
  BackendConfig backend;
  std::vector<int> sizes = {1, 2, 5, 10, 20};
  FewshotResult result = RunFewshot(spec, sizes, 5, 0.5, backend);

  double eer_at_5 = 0.0;
  for (const FewshotRow& row : result.rows)
    if (row.size == 5) eer_at_5 = row.eer_percent;
  // One miss-rate step of the pooled ROC, in percent.
  double slack = 100.0 / (13.0 * kFewshotEvalPerClass);
  bool monotone = true;
  for (size_t i = 1; i < result.rows.size(); i++)
    monotone = monotone && result.rows[i].eer_percent <=
                               result.rows[i - 1].eer_percent + slack;
  return {eer_at_5 < 1.0 && monotone,
          Fmt("EER at 5 shots %.3f%%, first size %.3f%%", eer_at_5,
              result.rows[0].eer_percent)};
}

std::vector<double> UniformSamples(int n, double amplitude, Rng* rng) {
  std::vector<double> s(n);
  for (int i = 0; i < n; i++)
    s[i] = amplitude * (2.0 * rng->Uniform() - 1.0);
  return s;
}

// Criterion 7: augmentation invariants: m = 0 is a bit-exact no-op, the
// achieved SNR is within 0.01 dB of requested over 50 random cases, batch
// runs are byte-identical under a fixed seed, and outputs stay in [-1, 1].
Outcome AugmentationInvariants() {
  Rng rng(55);

  AudioBuffer clean;
  clean.samples = UniformSamples(4000, 0.5, &rng);
  AugmentPlan identity_plan;
  TransformStep fake;
  fake.kind = TransformKind::kReverb;
  fake.resource = "/nonexistent/resource.wav";
  identity_plan.paths = {{fake}};
  identity_plan.path_weights = {1.0};
  identity_plan.interp_m = 0.0;
  AudioBuffer mixed = AugMix(clean, identity_plan);
  bool identity_ok = mixed.samples == clean.samples &&
                     mixed.sample_rate == clean.sample_rate;

  double worst_snr = 0.0;
  for (int inst = 0; inst < 50; inst++) {
    int n = static_cast<int>(rng.UniformInt(2000, 6000));
    AudioBuffer x;
    x.samples = UniformSamples(n, 0.1, &rng);
    AudioBuffer noise;
    noise.samples.resize(n);
    for (int i = 0; i < n; i++) noise.samples[i] = 0.05 * rng.Gaussian();
    double snr = 15.0 * rng.Uniform();
    AudioBuffer out = ApplyNoise(x, noise, snr, rng.Uniform());
    std::vector<double> added(n);
    for (int i = 0; i < n; i++) added[i] = out.samples[i] - x.samples[i];
    double achieved = 20.0 * std::log10(Rms(x.samples) / Rms(added));
    worst_snr = std::max(worst_snr, std::abs(achieved - snr));
  }

  // Resource pools and input audio for the batch run.
  TempDir res;
  std::filesystem::create_directories(res.Path("rir"));
  std::filesystem::create_directories(res.Path("noise"));
  AudioBuffer rir1;
  rir1.samples.assign(200, 0.0);
  rir1.samples[40] = 0.9;
  WriteWav(res.Path("rir/echo.wav"), rir1);
  AudioBuffer rir2;
  rir2.samples.resize(256);
  for (size_t i = 0; i < rir2.samples.size(); i++)
    rir2.samples[i] = 0.05 * rng.Gaussian() * std::exp(-0.02 * i);
  WriteWav(res.Path("rir/room.wav"), rir2);
  AudioBuffer nz1;
  nz1.samples.resize(8000);
  for (int i = 0; i < 8000; i++)
    nz1.samples[i] = std::clamp(0.3 * rng.Gaussian(), -0.95, 0.95);
  WriteWav(res.Path("noise/babble.wav"), nz1);
  AudioBuffer nz2;
  nz2.samples.resize(8000);
  for (int i = 0; i < 8000; i++)
    nz2.samples[i] = 0.4 * std::sin(2.0 * std::acos(-1.0) * 90.0 * i / 16000.0);
  WriteWav(res.Path("noise/hum.wav"), nz2);

  TempDir audio;
  std::vector<Utterance> utterances(3);
  for (int u = 0; u < 3; u++) {
    AudioBuffer buf;
    buf.samples =
        UniformSamples(6000 + 1000 * u, 0.4, &rng);
    utterances[u].id = "utt" + std::to_string(u);
    utterances[u].audio_path = audio.Path(utterances[u].id + ".wav");
    WriteWav(*utterances[u].audio_path, buf);
  }

  AugmentConfig config;
  config.rir_dir = res.Path("rir");
  config.noise_dir = res.Path("noise");
  config.seed = 424242;
  TempDir out1;
  TempDir out2;
  RunAugmentBatch(utterances, config, out1.Path());
  RunAugmentBatch(utterances, config, out2.Path());
  // Plan records embed the absolute output path; rewrite the second run's
  // directory onto the first before the byte comparison.
  std::string plans1 = ReadFileBytes(out1.Path("plans.jsonl"));
  std::string plans2 = ReadFileBytes(out2.Path("plans.jsonl"));
  size_t at = 0;
  while ((at = plans2.find(out2.Path(), at)) != std::string::npos) {
    plans2.replace(at, out2.Path().size(), out1.Path());
    at += out1.Path().size();
  }
  bool batch_ok = plans1 == plans2;
  for (const Utterance& u : utterances) {
    batch_ok = batch_ok && ReadFileBytes(out1.Path(u.id + ".wav")) ==
                               ReadFileBytes(out2.Path(u.id + ".wav"));
  }

  bool bounded = true;
  for (int inst = 0; inst < 20; inst++) {
    AugmentPlan plan = SamplePlan(config, 9000 + inst);
    AudioBuffer loud;
    loud.samples = UniformSamples(5000, 0.9, &rng);
    AudioBuffer out = AugMix(loud, plan);
    bounded = bounded && out.samples.size() == loud.samples.size();
    for (double v : out.samples) bounded = bounded && v >= -1.0 && v <= 1.0;
  }

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "worst SNR error %.4f dB; identity %d, batch %d, bounds %d",
                worst_snr, identity_ok ? 1 : 0, batch_ok ? 1 : 0,
                bounded ? 1 : 0);
  return {identity_ok && worst_snr <= 0.01 && batch_ok && bounded, buf};
}

int Argmax(const Eigen::VectorXd& v) {
  int best = 0;
  for (int i = 1; i < v.size(); i++)
    if (v(i) > v(best)) best = i;
  return best;
}

// Criterion 8: inverse-frequency rebalancing strictly reduces the
// minority-class error on a fixed imbalanced overlapping-Gaussian instance,
// and argmax decisions are invariant to duplicating one class's samples
// (checked on grid points with decision margin > 1e-6).
Outcome RebalancingBehavior() {
  SyntheticSpec imb;
  imb.n_languages = 2;
  imb.dim = 4;
  imb.per_class_counts = {400, 40};
  imb.class_separation = 0.5;
  imb.noise_scale = 1.0;
  imb.seed = 5;
  SyntheticData train = GenerateSynthetic(imb, "train");
  SyntheticSpec eval = imb;
  eval.per_class_counts = {1000, 1000};
  SyntheticData test = GenerateSynthetic(eval, "test");

  Eigen::VectorXd plain = Eigen::VectorXd::Ones(2);
  Eigen::VectorXd balanced =
      RebalanceWeights({400, 40}, train.languages);
  MultinomialFit unweighted =
      FitMultinomial(train.embeddings.vectors, train.embeddings.labels, 2,
                     plain, 1e-4, 1000, 1e-9);
  MultinomialFit rebalanced =
      FitMultinomial(train.embeddings.vectors, train.embeddings.labels, 2,
                     balanced, 1e-4, 1000, 1e-9);
  auto minority_error = [&](const MultinomialFit& fit) {
    int errors = 0, count = 0;
    for (int t = 0; t < test.embeddings.NumRows(); t++) {
      if (test.embeddings.labels[t] != 1) continue;
      count++;
      Eigen::VectorXd s =
          fit.weights * test.embeddings.vectors.row(t).transpose() + fit.bias;
      if (Argmax(s) != 1) errors++;
    }
    return static_cast<double>(errors) / count;
  };
  double err_plain = minority_error(unweighted);
  double err_rebal = minority_error(rebalanced);

  // Duplication invariance. With l2 = 0 the duplicated objective is a
  // positive rescaling of the original, so the minimizers coincide.
  SyntheticSpec dup_spec;
  dup_spec.n_languages = 3;
  dup_spec.dim = 3;
  dup_spec.per_class_counts = {30, 60, 45};
  dup_spec.class_separation = 1.0;
  dup_spec.seed = 9;
  SyntheticData dup = GenerateSynthetic(dup_spec, "dup");
  const Eigen::MatrixXd& feats = dup.embeddings.vectors;
  const std::vector<int>& labels = dup.embeddings.labels;

  MultinomialFit fit_a = FitMultinomial(
      feats, labels, 3, RebalanceWeights({30, 60, 45}, dup.languages), 0.0,
      5000, 1e-8);
  Eigen::MatrixXd feats2(feats.rows() + 60, feats.cols());
  feats2.topRows(feats.rows()) = feats;
  feats2.middleRows(feats.rows(), 30) = feats.topRows(30);
  feats2.bottomRows(30) = feats.topRows(30);
  std::vector<int> labels2 = labels;
  labels2.insert(labels2.end(), 60, 0);
  MultinomialFit fit_b = FitMultinomial(
      feats2, labels2, 3, RebalanceWeights({90, 60, 45}, dup.languages), 0.0,
      5000, 1e-8);

  Rng rng(123);
  int checked = 0, agreed = 0;
  for (int g = 0; g < 500; g++) {
    Eigen::VectorXd point = 2.0 * GaussVec(3, &rng);
    Eigen::VectorXd sa = fit_a.weights * point + fit_a.bias;
    Eigen::VectorXd sb = fit_b.weights * point + fit_b.bias;
    auto margin = [](Eigen::VectorXd s) {
      std::sort(s.data(), s.data() + s.size());
      return s(s.size() - 1) - s(s.size() - 2);
    };
    if (margin(sa) <= 1e-6 || margin(sb) <= 1e-6) continue;
    checked++;
    if (Argmax(sa) == Argmax(sb)) agreed++;
  }

  // With l2 = 0 the weighted objective flattens near the optimum faster
  // than the line search can resolve; a small residual gradient is the fp
  // floor, not a fit failure.
  bool tight = std::max(fit_a.grad_inf_norm, fit_b.grad_inf_norm) <= 1e-5;
  bool ok = err_rebal < err_plain && tight && checked >= 100 &&
            agreed == checked;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "minority error %.3f -> %.3f; duplication agreement %d/%d",
                err_plain, err_rebal, agreed, checked);
  return {ok, buf};
}

// Criterion 9: MHA pooling over 512-dim frames with 5 heads emits
// 5 x 512 x 2 = 5120-dim vectors.
Outcome ShapeContracts() {
  Rng rng(3);
  PoolingParams params =
      RandomPooling(PoolingVariant::kMha, 512, 64, 5, &rng);
  int dim = PoolingOutputDim(params, 512);
  Eigen::MatrixXd frames = GaussMat(30, 512, &rng);
  Eigen::VectorXd out = PoolForward(frames, params);
  bool ok = dim == 5120 && out.size() == 5120 && out.allFinite();
  return {ok, Fmt("output dim %.0f", static_cast<double>(out.size()))};
}

// Criterion 10: 100 random BackendModel/FusionModel save/load round trips
// reproduce every field bit-identically.
Outcome SerializationRoundTrips() {
  TempDir dir;
  Rng rng(10);
  bool ok = true;
  for (int inst = 0; inst < 100; inst++) {
    int k = static_cast<int>(rng.UniformInt(2, 8));
    int d = static_cast<int>(rng.UniformInt(3, 24));
    BackendModel m;
    m.mean = GaussVec(d, &rng);
    int feat = d;
    if (inst % 2 == 0) {
      int p = static_cast<int>(rng.UniformInt(1, std::min(k - 1, d)));
      m.lda = GaussMat(d, p, &rng);
      feat = p;
    }
    m.weights = GaussMat(k, feat, &rng);
    m.bias = GaussVec(k, &rng);
    m.languages = MakeLanguages(k);
    Eigen::VectorXd w(k);
    for (int i = 0; i < k; i++) w(i) = 0.1 + rng.Uniform();
    m.balance_weights = w * (k / w.sum());
    m.center_before_normalize = inst % 3 == 0;
    std::string path = dir.Path("backend.json");
    SaveModel(m, path);
    BackendModel back = LoadBackendModel(path);
    ok = ok && back.mean == m.mean && back.weights == m.weights &&
         back.bias == m.bias && back.balance_weights == m.balance_weights &&
         back.languages == m.languages &&
         back.center_before_normalize == m.center_before_normalize &&
         back.lda.has_value() == m.lda.has_value();
    if (m.lda.has_value() && back.lda.has_value())
      ok = ok && *back.lda == *m.lda;

    FusionModel f;
    int s = static_cast<int>(rng.UniformInt(1, 5));
    f.alphas = GaussVec(s, &rng);
    f.betas = GaussVec(k, &rng);
    f.languages = MakeLanguages(k);
    std::string fpath = dir.Path("fusion.json");
    SaveModel(f, fpath);
    FusionModel fback = LoadFusionModel(fpath);
    ok = ok && fback.alphas == f.alphas && fback.betas == f.betas &&
         fback.languages == f.languages;
  }
  return {ok, "100 backend + 100 fusion round trips"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace lid

int main() {
  using lid::Criterion;
  std::vector<Criterion> criteria = {
      {1, "metrics match brute-force oracles", lid::MetricOracleEquivalence},
      {2, "analytic gradients match central differences",
       lid::GradientChecks},
      {3, "optimizer solves quadratics and Rosenbrock",
       lid::OptimizerCorrectness},
      {4, "calibration reduces Cllr, fusion beats best input",
       lid::FusionMonotonicity},
      {5, "synthetic pipeline reaches near-zero error",
       lid::EndToEndPipeline},
      {6, "few-shot EER low at 5 shots and non-increasing",
       lid::FewshotTrend},
      {7, "augmentation identity, SNR accuracy, determinism, bounds",
       lid::AugmentationInvariants},
      {8, "rebalancing helps minority, duplication invariant",
       lid::RebalancingBehavior},
      {9, "MHA pooling emits 5x512x2 vectors", lid::ShapeContracts},
      {10, "model serialization round-trips bit-identically",
       lid::SerializationRoundTrips},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    bool ok = false;
    std::string detail;
    try {
      auto result = c.run();
      ok = result.first;
      detail = result.second;
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %2d: %-55s %s\n", ok ? "PASS" : "FAIL", c.id,
                c.name, detail.c_str());
    std::fflush(stdout);
    if (!ok) failures++;
  }
  if (failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
  } else {
    std::printf("acceptance: %d of 10 criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
