// src/metrics/report.h

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

#ifndef LIDKIT_METRICS_REPORT_H_
#define LIDKIT_METRICS_REPORT_H_

#include <string>

#include "core/types.h"
#include "metrics/trials.h"

namespace lid {

struct MetricReport {
  double c_avg = 0.0;      // actual cost, llr threshold 0
  double min_c_avg = 0.0;  // best shared threshold
  double eer_percent = 0.0;
  double cllr_bits = 0.0;
  double accuracy = 0.0;
};

// Full report from scores + labels. Actual Cavg is taken at llr threshold
// 0, the calibrated operating point.
MetricReport Evaluate(const ScoreMatrix& scores, const TrialLabels& labels,
                      double p_target);

// Aligned text table, Cavg to 4 decimals and EER to 2, matching the usual
// challenge-result layout.
std::string RenderTable(const MetricReport& report);
std::string ReportToJson(const MetricReport& report);

}  // namespace lid

#endif  // LIDKIT_METRICS_REPORT_H_
