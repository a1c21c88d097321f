// src/nn/gradcheck.cc

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

#include "nn/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "backend/multinomial.h"
#include "base/error.h"
#include "base/rng.h"
#include "fusion/fusion.h"
#include "nn/aam.h"
#include "nn/pooling.h"

namespace lid {

namespace {

// Flat pack/unpack with a running cursor; pack and unpack calls must be
// issued in the same order.
void PackMatrix(const Eigen::MatrixXd& m, Eigen::VectorXd* x,
                Eigen::Index* pos) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) (*x)((*pos)++) = m(r, c);
  }
}

Eigen::MatrixXd UnpackMatrix(const Eigen::VectorXd& x, Eigen::Index* pos,
                             Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = x((*pos)++);
  }
  return m;
}

Eigen::MatrixXd RandomMatrix(Eigen::Index rows, Eigen::Index cols, Rng* rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng->Gaussian();
  }
  return m;
}

// Projects a pooling layer to a scalar through a fixed random functional
// r . output, so one check covers the whole Jacobian.
ScalarFn PoolingScalarFn(const PoolingParams& params,
                         const Eigen::VectorXd& r, Eigen::Index t,
                         Eigen::Index h) {
  return [params, r, t, h](const Eigen::VectorXd& x,
                           Eigen::VectorXd* grad) -> double {
    PoolingParams p = params;
    Eigen::Index pos = 0;
    Eigen::MatrixXd frames = UnpackMatrix(x, &pos, t, h);
    switch (p.variant) {
      case PoolingVariant::kAttentiveStats:
        p.att_w = UnpackMatrix(x, &pos, p.att_w.rows(), p.att_w.cols());
        p.att_b = UnpackMatrix(x, &pos, p.att_b.size(), 1);
        p.att_v = UnpackMatrix(x, &pos, p.att_v.size(), 1);
        break;
      case PoolingVariant::kGmha:
        p.gmha_v = UnpackMatrix(x, &pos, p.gmha_v.rows(), p.gmha_v.cols());
        p.gmha_u = UnpackMatrix(x, &pos, p.gmha_u.size(), 1);
        [[fallthrough]];
      case PoolingVariant::kMha:
        p.mha_w1 = UnpackMatrix(x, &pos, p.mha_w1.rows(), p.mha_w1.cols());
        p.mha_heads =
            UnpackMatrix(x, &pos, p.mha_heads.rows(), p.mha_heads.cols());
        break;
    }
    LID_REQUIRE(pos == x.size(), "pooling parameter pack size mismatch");

    double value = r.dot(PoolForward(frames, p));
    if (grad != nullptr) {
      PoolingGrads g = PoolBackward(frames, p, r);
      grad->resize(x.size());
      pos = 0;
      PackMatrix(g.frames, grad, &pos);
      switch (p.variant) {
        case PoolingVariant::kAttentiveStats:
          PackMatrix(g.att_w, grad, &pos);
          PackMatrix(g.att_b, grad, &pos);
          PackMatrix(g.att_v, grad, &pos);
          break;
        case PoolingVariant::kGmha:
          PackMatrix(g.gmha_v, grad, &pos);
          PackMatrix(g.gmha_u, grad, &pos);
          [[fallthrough]];
        case PoolingVariant::kMha:
          PackMatrix(g.mha_w1, grad, &pos);
          PackMatrix(g.mha_heads, grad, &pos);
          break;
      }
    }
    return value;
  };
}

Eigen::VectorXd PackPooling(const Eigen::MatrixXd& frames,
                            const PoolingParams& p) {
  Eigen::Index total = frames.size();
  switch (p.variant) {
    case PoolingVariant::kAttentiveStats:
      total += p.att_w.size() + p.att_b.size() + p.att_v.size();
      break;
    case PoolingVariant::kGmha:
      total += p.gmha_v.size() + p.gmha_u.size();
      [[fallthrough]];
    case PoolingVariant::kMha:
      total += p.mha_w1.size() + p.mha_heads.size();
      break;
  }
  Eigen::VectorXd x(total);
  Eigen::Index pos = 0;
  PackMatrix(frames, &x, &pos);
  switch (p.variant) {
    case PoolingVariant::kAttentiveStats:
      PackMatrix(p.att_w, &x, &pos);
      PackMatrix(p.att_b, &x, &pos);
      PackMatrix(p.att_v, &x, &pos);
      break;
    case PoolingVariant::kGmha:
      PackMatrix(p.gmha_v, &x, &pos);
      PackMatrix(p.gmha_u, &x, &pos);
      [[fallthrough]];
    case PoolingVariant::kMha:
      PackMatrix(p.mha_w1, &x, &pos);
      PackMatrix(p.mha_heads, &x, &pos);
      break;
  }
  return x;
}

GradCheckCase RunCase(const std::string& name, const ScalarFn& f,
                      const Eigen::VectorXd& x0, double step,
                      double threshold, Rng* rng) {
  GradCheckCase c;
  c.name = name;
  c.threshold = threshold;
  GradCheckReport report = CheckGradient(f, x0, step, 200, rng);
  c.max_rel_error = report.max_rel_error;
  c.coords_checked = report.coords_checked;
  c.passed = report.max_rel_error < threshold;
  return c;
}

GradCheckCase PoolingCase(PoolingVariant variant, Eigen::Index t,
                          Eigen::Index h, int n_att, int n_heads,
                          uint64_t seed) {
  Rng rng(DeriveSeed(seed, PoolingVariantName(variant)));
  PoolingParams params =
      RandomPooling(variant, static_cast<int>(h), n_att, n_heads, &rng);
  Eigen::MatrixXd frames = RandomMatrix(t, h, &rng);
  Eigen::VectorXd r(PoolingOutputDim(params, static_cast<int>(h)));
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = rng.Gaussian();
  return RunCase(PoolingVariantName(variant),
                 PoolingScalarFn(params, r, t, h), PackPooling(frames, params),
                 1e-5, 1e-6, &rng);
}

}  // namespace

GradCheckReport CheckGradient(const ScalarFn& f, const Eigen::VectorXd& x0,
                              double step, int max_coords, Rng* rng) {
  LID_REQUIRE(step > 0.0, "finite-difference step must be positive");
  Eigen::VectorXd analytic(x0.size());
  f(x0, &analytic);

  std::vector<Eigen::Index> coords(x0.size());
  std::iota(coords.begin(), coords.end(), 0);
  if (static_cast<int>(coords.size()) > max_coords && rng != nullptr) {
    // Partial Fisher-Yates: the first max_coords entries become a uniform
    // sample without replacement.
    for (int i = 0; i < max_coords; ++i) {
      int64_t j =
          rng->UniformInt(i, static_cast<int64_t>(coords.size()) - 1);
      std::swap(coords[i], coords[j]);
    }
    coords.resize(max_coords);
  }

  GradCheckReport report;
  report.coords_checked = static_cast<int>(coords.size());
  Eigen::VectorXd x = x0;
  for (Eigen::Index i : coords) {
    x(i) = x0(i) + step;
    double f_plus = f(x, nullptr);
    x(i) = x0(i) - step;
    double f_minus = f(x, nullptr);
    x(i) = x0(i);
    double numeric = (f_plus - f_minus) / (2.0 * step);
    double rel = std::abs(analytic(i) - numeric) /
                 std::max({std::abs(analytic(i)), std::abs(numeric), 1e-8});
    report.max_rel_error = std::max(report.max_rel_error, rel);
  }
  return report;
}

std::vector<GradCheckCase> RunGradCheckSuite(uint64_t seed) {
  std::vector<GradCheckCase> cases;

  {
    // Exact for linear functions: central differences have no truncation
    // error, so this isolates harness bugs from operator bugs.
    Rng rng(DeriveSeed(seed, "linear"));
    Eigen::VectorXd r(16);
    for (int i = 0; i < 16; ++i) r(i) = rng.Gaussian();
    ScalarFn linear = [r](const Eigen::VectorXd& x,
                          Eigen::VectorXd* grad) -> double {
      if (grad != nullptr) *grad = r;
      return r.dot(x);
    };
    Eigen::VectorXd x0(16);
    for (int i = 0; i < 16; ++i) x0(i) = rng.Gaussian();
    cases.push_back(RunCase("linear_sanity", linear, x0, 1e-5, 1e-10, &rng));
  }

  cases.push_back(
      PoolingCase(PoolingVariant::kAttentiveStats, 7, 4, 16, 1, seed));
  cases.push_back(PoolingCase(PoolingVariant::kMha, 11, 8, 16, 3, seed));
  cases.push_back(PoolingCase(PoolingVariant::kGmha, 9, 6, 12, 4, seed));

  {
    Rng rng(DeriveSeed(seed, "aam"));
    const int k = 5, h = 8;
    Eigen::MatrixXd weights = RandomMatrix(k, h, &rng);
    Eigen::VectorXd embedding(h);
    for (int i = 0; i < h; ++i) embedding(i) = rng.Gaussian();
    AamParams base;
    base.margin = 0.2;
    // Moderate scale: the production value of 30 saturates the softmax,
    // leaving coordinates whose true gradient sits below what central
    // differences can resolve in double precision. The formula is
    // scale-generic, so this loses no coverage.
    base.scale = 4.0;
    ScalarFn f = [&, k, h](const Eigen::VectorXd& x,
                           Eigen::VectorXd* grad) -> double {
      AamParams p = base;
      Eigen::Index pos = 0;
      Eigen::VectorXd emb = UnpackMatrix(x, &pos, h, 1);
      p.class_weights = UnpackMatrix(x, &pos, k, h);
      AamResult res = AamLoss(emb, 2, p);
      if (grad != nullptr) {
        grad->resize(x.size());
        pos = 0;
        PackMatrix(res.grad_embedding, grad, &pos);
        PackMatrix(res.grad_class_weights, grad, &pos);
      }
      return res.loss;
    };
    Eigen::VectorXd x0(h + k * h);
    Eigen::Index pos = 0;
    PackMatrix(embedding, &x0, &pos);
    PackMatrix(weights, &x0, &pos);
    cases.push_back(RunCase("aam_loss", f, x0, 1e-5, 1e-6, &rng));
  }

  {
    Rng rng(DeriveSeed(seed, "multinomial"));
    const int n = 20, p = 4, k = 3;
    Eigen::MatrixXd features = RandomMatrix(n, p, &rng);
    std::vector<int> labels(n);
    for (int t = 0; t < n; ++t) {
      labels[t] = static_cast<int>(rng.UniformInt(0, k - 1));
    }
    Eigen::VectorXd balance(k);
    balance << 0.9, 1.2, 0.9;
    ScalarFn f = [&](const Eigen::VectorXd& x,
                     Eigen::VectorXd* grad) -> double {
      Eigen::Index pos = 0;
      Eigen::MatrixXd w = UnpackMatrix(x, &pos, k, p);
      Eigen::VectorXd b = UnpackMatrix(x, &pos, k, 1);
      Eigen::MatrixXd gw;
      Eigen::VectorXd gb;
      double loss = MultinomialLoss(features, labels, balance, 1e-4, w, b,
                                    grad != nullptr ? &gw : nullptr,
                                    grad != nullptr ? &gb : nullptr);
      if (grad != nullptr) {
        grad->resize(x.size());
        pos = 0;
        PackMatrix(gw, grad, &pos);
        PackMatrix(gb, grad, &pos);
      }
      return loss;
    };
    Eigen::VectorXd x0(k * p + k);
    Eigen::Index pos = 0;
    PackMatrix(RandomMatrix(k, p, &rng), &x0, &pos);
    PackMatrix(RandomMatrix(k, 1, &rng), &x0, &pos);
    cases.push_back(RunCase("multinomial_loss", f, x0, 1e-5, 1e-6, &rng));
  }

  {
    Rng rng(DeriveSeed(seed, "cllr"));
    const int n = 30, k = 3, s = 2;
    LanguageList languages({"l1", "l2", "l3"});
    std::vector<ScoreMatrix> systems(s);
    std::vector<int> label_ids(n);
    for (int t = 0; t < n; ++t) label_ids[t] = t % k;  // covers every class
    for (int si = 0; si < s; ++si) {
      systems[si].languages = languages;
      systems[si].values = RandomMatrix(n, k, &rng);
      for (int t = 0; t < n; ++t) {
        systems[si].ids.push_back(StrCat("u", t));
      }
    }
    ScalarFn f = [&](const Eigen::VectorXd& x,
                     Eigen::VectorXd* grad) -> double {
      return CllrObjective(x, systems, label_ids, grad);
    };
    Eigen::VectorXd x0(s + k);
    for (int i = 0; i < s + k; ++i) x0(i) = 0.3 * rng.Gaussian();
    x0(0) += 1.0;
    cases.push_back(RunCase("cllr_objective", f, x0, 1e-6, 1e-6, &rng));
  }

  return cases;
}

}  // namespace lid
