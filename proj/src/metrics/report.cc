// src/metrics/report.cc

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

#include "metrics/report.h"

#include <cstdio>

#include <json.hpp>

#include "metrics/metrics.h"

namespace lid {

MetricReport Evaluate(const ScoreMatrix& scores, const TrialLabels& labels,
                      double p_target) {
  DetectionTrialSet trials = ExpandTrials(scores, labels, p_target);
  MetricReport report;
  report.c_avg = Cavg(trials, p_target, 0.0);
  report.min_c_avg = MinCavg(trials, p_target);
  report.eer_percent = EerPercent(trials);
  report.cllr_bits = CllrBits(scores, labels);
  report.accuracy = Accuracy(scores, labels);
  return report;
}

std::string RenderTable(const MetricReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%-8s  %-8s  %-6s  %-7s  %-6s\n"
                "%-8.4f  %-8.4f  %-6.2f  %-7.4f  %-6.4f\n",
                "Cavg", "minCavg", "EER", "Cllr", "Acc",
                r.c_avg, r.min_c_avg, r.eer_percent, r.cllr_bits, r.accuracy);
  return buf;
}

std::string ReportToJson(const MetricReport& r) {
  nlohmann::json j;
  j["c_avg"] = r.c_avg;
  j["min_c_avg"] = r.min_c_avg;
  j["eer_percent"] = r.eer_percent;
  j["cllr_bits"] = r.cllr_bits;
  j["accuracy"] = r.accuracy;
  return j.dump(2);
}

}  // namespace lid
