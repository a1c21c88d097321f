// src/metrics/trials.cc

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

#include "metrics/trials.h"

#include <cmath>

#include "base/error.h"
#include "base/parallel.h"

namespace lid {

DetectionTrialSet ExpandTrials(const ScoreMatrix& scores,
                               const TrialLabels& labels, double p_target) {
  Validate(scores);
  LID_REQUIRE(p_target > 0.0 && p_target < 1.0,
              "p_target must lie in (0, 1), got ", p_target);
  int k = scores.NumLanguages();
  LID_REQUIRE(k >= 2, "need at least 2 languages for detection trials, got ",
              k);
  Validate(labels, k);
  LID_REQUIRE(scores.ids.size() == labels.ids.size(),
              "score matrix has ", scores.ids.size(), " ids but labels have ",
              labels.ids.size());
  std::vector<int> label_pos = AlignByIds(scores.ids, labels);

  int n = scores.NumRows();
  Eigen::MatrixXd llr(n, k);
  double log_km1 = std::log(static_cast<double>(k - 1));
  ParallelFor(n, [&](std::int64_t t) {
    const auto row = scores.values.row(t);
    for (int det = 0; det < k; det++) {
      // logsumexp over the K-1 competing languages, max-shifted.
      double m = -HUGE_VAL;
      for (int j = 0; j < k; j++)
        if (j != det && row[j] > m) m = row[j];
      double s = 0.0;
      for (int j = 0; j < k; j++)
        if (j != det) s += std::exp(row[j] - m);
      llr(t, det) = row[det] - (m + std::log(s) - log_km1);
    }
  });

  DetectionTrialSet out;
  out.num_languages = k;
  out.pooled.reserve(static_cast<size_t>(n) * k);
  out.targets.resize(k);
  out.nontargets.assign(k, std::vector<std::vector<double>>(k));
  for (int t = 0; t < n; t++) {
    int truth = labels.true_lang[label_pos[t]];
    for (int det = 0; det < k; det++) {
      bool is_target = (det == truth);
      out.pooled.push_back({llr(t, det), is_target});
      if (is_target)
        out.targets[det].push_back(llr(t, det));
      else
        out.nontargets[det][truth].push_back(llr(t, det));
    }
  }
  return out;
}

}  // namespace lid
