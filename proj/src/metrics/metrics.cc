// src/metrics/metrics.cc

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

#include "metrics/metrics.h"

#include <algorithm>
#include <cmath>

#include "base/error.h"
#include "base/numeric.h"
#include "base/parallel.h"

namespace lid {

namespace {

// Sorted-llr view of a trial set for O(log n) miss/fa counting.
struct SortedTrials {
  std::vector<std::vector<double>> targets;                  // [K], sorted
  std::vector<std::vector<std::vector<double>>> nontargets;  // [K][K], sorted

  explicit SortedTrials(const DetectionTrialSet& trials)
      : targets(trials.targets), nontargets(trials.nontargets) {
    for (auto& v : targets) std::sort(v.begin(), v.end());
    for (auto& m : nontargets)
      for (auto& v : m) std::sort(v.begin(), v.end());
  }

  // Fraction of values < threshold.
  static double FracBelow(const std::vector<double>& sorted, double thr) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), thr);
    return static_cast<double>(it - sorted.begin()) / sorted.size();
  }

  double CavgAt(double p_target, double thr) const {
    int k = static_cast<int>(targets.size());
    double total = 0.0;
    for (int det = 0; det < k; det++) {
      double p_miss = FracBelow(targets[det], thr);
      double fa_sum = 0.0;
      for (int truth = 0; truth < k; truth++) {
        if (truth == det) continue;
        // Non-empty whenever every language has at least one target trial,
        // which CheckTargetCoverage enforces before any CavgAt call.
        fa_sum += 1.0 - FracBelow(nontargets[det][truth], thr);
      }
      total += p_target * p_miss + (1.0 - p_target) / (k - 1) * fa_sum;
    }
    return total / k;
  }
};

void CheckTargetCoverage(const DetectionTrialSet& trials) {
  LID_REQUIRE(trials.num_languages >= 2, "trial set needs K >= 2, got ",
              trials.num_languages);
  for (int det = 0; det < trials.num_languages; det++)
    LID_REQUIRE(!trials.targets[det].empty(),
                "language index ", det, " has zero target trials");
}

// Candidate thresholds covering every distinct operating point: each
// distinct llr plus one value above the maximum (nothing fires there).
std::vector<double> SweepCandidates(const DetectionTrialSet& trials) {
  std::vector<double> cand;
  cand.reserve(trials.pooled.size() + 1);
  for (const Trial& t : trials.pooled) cand.push_back(t.llr);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  double top = cand.back();
  cand.push_back(top + std::max(1.0, std::abs(top)));
  return cand;
}

double MinCavgImpl(const DetectionTrialSet& trials, double p_target,
                   double* best_threshold, bool parallel) {
  CheckTargetCoverage(trials);
  SortedTrials sorted(trials);
  std::vector<double> cand = SweepCandidates(trials);
  std::vector<double> values(cand.size());
  auto eval = [&](std::int64_t i) {
    values[i] = sorted.CavgAt(p_target, cand[i]);
  };
  if (parallel) {
    ParallelFor(static_cast<std::int64_t>(cand.size()), eval);
  } else {
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(cand.size()); i++)
      eval(i);
  }
  size_t best = 0;
  for (size_t i = 1; i < values.size(); i++)
    if (values[i] < values[best]) best = i;
  if (best_threshold) *best_threshold = cand[best];
  return values[best];
}

}  // namespace

double Cavg(const DetectionTrialSet& trials, double p_target,
            double threshold) {
  LID_REQUIRE(p_target > 0.0 && p_target < 1.0,
              "p_target must lie in (0, 1), got ", p_target);
  CheckTargetCoverage(trials);
  return SortedTrials(trials).CavgAt(p_target, threshold);
}

double MinCavg(const DetectionTrialSet& trials, double p_target,
               double* best_threshold) {
  LID_REQUIRE(p_target > 0.0 && p_target < 1.0,
              "p_target must lie in (0, 1), got ", p_target);
  return MinCavgImpl(trials, p_target, best_threshold, true);
}

double MinCavgSerial(const DetectionTrialSet& trials, double p_target,
                     double* best_threshold) {
  LID_REQUIRE(p_target > 0.0 && p_target < 1.0,
              "p_target must lie in (0, 1), got ", p_target);
  return MinCavgImpl(trials, p_target, best_threshold, false);
}

double EerPercent(const DetectionTrialSet& trials) {
  std::vector<double> targets, nontargets;
  for (const Trial& t : trials.pooled)
    (t.is_target ? targets : nontargets).push_back(t.llr);
  LID_REQUIRE(!targets.empty() && !nontargets.empty(),
              "EER needs both target and non-target trials (got ",
              targets.size(), " targets, ", nontargets.size(),
              " non-targets)");
  std::sort(targets.begin(), targets.end());
  std::sort(nontargets.begin(), nontargets.end());

  auto frac_below = [](const std::vector<double>& v, double thr) {
    auto it = std::lower_bound(v.begin(), v.end(), thr);
    return static_cast<double>(it - v.begin()) / v.size();
  };

  std::vector<double> cand;
  cand.reserve(targets.size() + nontargets.size() + 1);
  cand.insert(cand.end(), targets.begin(), targets.end());
  cand.insert(cand.end(), nontargets.begin(), nontargets.end());
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  double top = cand.back();
  cand.push_back(top + std::max(1.0, std::abs(top)));

  // Walk operating points from (Pmiss=0, Pfa=1); stop at the first point
  // with Pmiss >= Pfa and interpolate linearly with its predecessor.
  double prev_miss = 0.0, prev_fa = 1.0;
  for (double thr : cand) {
    double miss = frac_below(targets, thr);
    double fa = 1.0 - frac_below(nontargets, thr);
    if (miss >= fa) {
      double denom = (miss - prev_miss) + (prev_fa - fa);
      if (denom <= 0.0) return 100.0 * 0.5 * (miss + fa);
      double t = (prev_fa - prev_miss) / denom;
      return 100.0 * (prev_miss + t * (miss - prev_miss));
    }
    prev_miss = miss;
    prev_fa = fa;
  }
  // Unreachable: the sentinel point has Pmiss=1 >= Pfa=0.
  return 100.0;
}

double CllrBits(const ScoreMatrix& scores, const TrialLabels& labels) {
  Validate(scores);
  int k = scores.NumLanguages();
  LID_REQUIRE(k >= 2, "Cllr needs K >= 2, got ", k);
  Validate(labels, k);
  std::vector<int> label_pos = AlignByIds(scores.ids, labels);

  std::vector<int> counts(k, 0);
  for (int t = 0; t < scores.NumRows(); t++)
    counts[labels.true_lang[label_pos[t]]]++;
  for (int lang = 0; lang < k; lang++)
    LID_REQUIRE(counts[lang] > 0, "language '", scores.languages.Name(lang),
                "' has zero trials");

  double total = 0.0;
  for (int t = 0; t < scores.NumRows(); t++) {
    int truth = labels.true_lang[label_pos[t]];
    Eigen::VectorXd p = Softmax(scores.values.row(t).transpose());
    double post = std::max(p[truth], 1e-300);
    total += -std::log(post) / kLn2 / counts[truth];
  }
  return total / k;
}

double Accuracy(const ScoreMatrix& scores, const TrialLabels& labels) {
  Validate(scores);
  Validate(labels, scores.NumLanguages());
  std::vector<int> label_pos = AlignByIds(scores.ids, labels);
  int correct = 0;
  for (int t = 0; t < scores.NumRows(); t++) {
    Eigen::Index best = ArgmaxLowest(scores.values.row(t).transpose());
    if (best == labels.true_lang[label_pos[t]]) correct++;
  }
  return static_cast<double>(correct) / scores.NumRows();
}

}  // namespace lid
