// src/pipeline/synthetic.cc

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

#include "pipeline/synthetic.h"

#include <cstdio>

#include "base/error.h"
#include "base/rng.h"

namespace lid {

namespace {

// K random Gaussian directions; orthonormalized when the dimension allows,
// otherwise only normalized. Rows are unit length either way.
Eigen::MatrixXd RandomDirections(int k, int dim, Rng* rng) {
  Eigen::MatrixXd dirs(k, dim);
  for (int i = 0; i < k; ++i) {
    for (int d = 0; d < dim; ++d) dirs(i, d) = rng->Gaussian();
  }
  for (int i = 0; i < k; ++i) {
    if (dim >= k) {
      for (int j = 0; j < i; ++j) {
        dirs.row(i) -= dirs.row(i).dot(dirs.row(j)) * dirs.row(j);
      }
    }
    double norm = dirs.row(i).norm();
    LID_REQUIRE(norm > 1e-12, "degenerate random direction");
    dirs.row(i) /= norm;
  }
  return dirs;
}

}  // namespace

SyntheticData GenerateSynthetic(const SyntheticSpec& spec,
                                const std::string& id_prefix) {
  LID_REQUIRE(spec.n_languages >= 2,
              "synthetic data needs at least two languages, got " +
                  std::to_string(spec.n_languages));
  LID_REQUIRE(spec.dim >= 1,
              "synthetic dim must be positive, got " + std::to_string(spec.dim));
  LID_REQUIRE(spec.class_separation >= 0.0, "class_separation must be >= 0");
  LID_REQUIRE(spec.noise_scale >= 0.0, "noise_scale must be >= 0");

  std::vector<int> counts = spec.per_class_counts;
  if (counts.empty()) counts.assign(spec.n_languages, spec.per_class_count);
  LID_REQUIRE(static_cast<int>(counts.size()) == spec.n_languages,
              "per_class_counts size " + std::to_string(counts.size()) +
                  " does not match n_languages " +
                  std::to_string(spec.n_languages));
  std::int64_t total = 0;
  for (int c : counts) {
    LID_REQUIRE(c >= 1, "per-class count must be >= 1, got " +
                            std::to_string(c));
    total += c;
  }

  SyntheticData data;
  std::vector<std::string> names(spec.n_languages);
  for (int k = 0; k < spec.n_languages; ++k) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "lang%02d", k);
    names[k] = buf;
  }
  data.languages = LanguageList(names);

  // Means depend only on (seed, n_languages, dim) so sets generated with
  // different prefixes share the same class geometry. The sqrt(dim) factor
  // makes class_separation the ratio of mean norm to expected noise norm
  // (a vector-level SNR), so difficulty does not drift with dimension.
  Rng mean_rng(DeriveSeed(spec.seed, "means"));
  data.class_means = spec.class_separation * std::sqrt(spec.dim) *
                     RandomDirections(spec.n_languages, spec.dim, &mean_rng);

  // Samples draw from a prefix-keyed stream so train/dev/test are disjoint.
  Rng sample_rng(DeriveSeed(spec.seed, id_prefix));
  data.embeddings.vectors.resize(total, spec.dim);
  data.embeddings.ids.reserve(total);
  data.embeddings.labels.reserve(total);
  std::int64_t row = 0;
  for (int k = 0; k < spec.n_languages; ++k) {
    for (int i = 0; i < counts[k]; ++i, ++row) {
      for (int d = 0; d < spec.dim; ++d) {
        data.embeddings.vectors(row, d) =
            data.class_means(k, d) + spec.noise_scale * sample_rng.Gaussian();
      }
      data.embeddings.ids.push_back(id_prefix + "_" + names[k] + "_" +
                                    std::to_string(i));
      data.embeddings.labels.push_back(k);
    }
  }
  Validate(data.embeddings);
  return data;
}

}  // namespace lid
