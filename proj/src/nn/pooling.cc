// src/nn/pooling.cc

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

#include "nn/pooling.h"

#include <cmath>
#include <vector>

#include "base/error.h"
#include "base/numeric.h"
#include "base/rng.h"

namespace lid {

namespace {

// Weighted first/second moments of the frames under attention weights,
// with the floored standard deviation.
struct WeightedStats {
  Eigen::VectorXd mu;       // H
  Eigen::VectorXd m2;       // H, weighted second moment
  Eigen::VectorXd sigma;    // H, sqrt(max(m2 - mu^2, eps_var))
  Eigen::ArrayXd var_gate;  // 1 where the floor is inactive, else 0
};

WeightedStats ComputeStats(const Eigen::MatrixXd& frames,
                           const Eigen::VectorXd& alpha, double eps_var) {
  WeightedStats s;
  s.mu = frames.transpose() * alpha;
  s.m2 = frames.array().square().matrix().transpose() * alpha;
  Eigen::ArrayXd var = s.m2.array() - s.mu.array().square();
  s.var_gate = (var > eps_var).cast<double>();
  s.sigma = var.max(eps_var).sqrt().matrix();
  return s;
}

// Backward through (mu, sigma) = stats(frames, alpha): accumulates into
// *grad_alpha and *grad_frames.
void StatsBackward(const Eigen::MatrixXd& frames, const Eigen::VectorXd& alpha,
                   const WeightedStats& s, const Eigen::VectorXd& grad_mu,
                   const Eigen::VectorXd& grad_sigma,
                   Eigen::VectorXd* grad_alpha, Eigen::MatrixXd* grad_frames) {
  // d sigma / d var = 1/(2 sigma), gated off where the floor clamps.
  Eigen::VectorXd g_var =
      (grad_sigma.array() / (2.0 * s.sigma.array()) * s.var_gate).matrix();
  Eigen::VectorXd g_mu_total = grad_mu - 2.0 * s.mu.cwiseProduct(g_var);
  *grad_alpha += frames * g_mu_total +
                 frames.array().square().matrix() * g_var;
  grad_frames->noalias() += alpha * g_mu_total.transpose();
  *grad_frames += ((2.0 * (frames.array().rowwise() *
                           g_var.transpose().array()))
                       .colwise() *
                   alpha.array())
                      .matrix();
}

// d softmax: grad_e_t = alpha_t * (grad_alpha_t - alpha . grad_alpha).
Eigen::VectorXd SoftmaxBackward(const Eigen::VectorXd& alpha,
                                const Eigen::VectorXd& grad_alpha) {
  double dot = alpha.dot(grad_alpha);
  return (alpha.array() * (grad_alpha.array() - dot)).matrix();
}

// Shared trunk and per-head statistics of the MHA family.
struct MhaState {
  Eigen::MatrixXd a;      // T x n_att, ReLU trunk
  Eigen::MatrixXd alpha;  // T x n_heads
  std::vector<WeightedStats> stats;
  Eigen::MatrixXd head_out;  // n_heads x 2H
};

MhaState MhaForward(const Eigen::MatrixXd& frames,
                    const PoolingParams& params) {
  const Eigen::Index h = frames.cols();
  MhaState st;
  st.a = (frames * params.mha_w1.transpose()).cwiseMax(0.0);
  Eigen::MatrixXd scores = st.a * params.mha_heads.transpose();
  st.alpha.resize(frames.rows(), params.n_heads);
  st.head_out.resize(params.n_heads, 2 * h);
  for (int j = 0; j < params.n_heads; ++j) {
    st.alpha.col(j) = Softmax(scores.col(j));
    st.stats.push_back(ComputeStats(frames, st.alpha.col(j), params.eps_var));
    st.head_out.row(j).head(h) = st.stats[j].mu.transpose();
    st.head_out.row(j).tail(h) = st.stats[j].sigma.transpose();
  }
  return st;
}

// Backward through the MHA trunk given gradients at the head outputs
// (n_heads x 2H). Fills frames/mha_w1/mha_heads gradients.
void MhaBackwardFromHeads(const Eigen::MatrixXd& frames,
                          const PoolingParams& params, const MhaState& st,
                          const Eigen::MatrixXd& grad_heads,
                          PoolingGrads* grads) {
  const Eigen::Index t = frames.rows();
  const Eigen::Index h = frames.cols();
  Eigen::MatrixXd grad_scores(t, params.n_heads);
  for (int j = 0; j < params.n_heads; ++j) {
    Eigen::VectorXd grad_alpha = Eigen::VectorXd::Zero(t);
    StatsBackward(frames, st.alpha.col(j), st.stats[j],
                  grad_heads.row(j).head(h).transpose(),
                  grad_heads.row(j).tail(h).transpose(), &grad_alpha,
                  &grads->frames);
    grad_scores.col(j) = SoftmaxBackward(st.alpha.col(j), grad_alpha);
  }
  grads->mha_heads = grad_scores.transpose() * st.a;
  // ReLU gate: the trunk is positive exactly where the pre-activation is.
  Eigen::MatrixXd grad_pre = ((grad_scores * params.mha_heads).array() *
                              (st.a.array() > 0.0).cast<double>())
                                 .matrix();
  grads->mha_w1 = grad_pre.transpose() * frames;
  grads->frames.noalias() += grad_pre * params.mha_w1;
}

PoolingGrads ZeroGrads(const Eigen::MatrixXd& frames,
                       const PoolingParams& params) {
  PoolingGrads g;
  g.frames = Eigen::MatrixXd::Zero(frames.rows(), frames.cols());
  switch (params.variant) {
    case PoolingVariant::kAttentiveStats:
      g.att_w = Eigen::MatrixXd::Zero(params.att_w.rows(), params.att_w.cols());
      g.att_b = Eigen::VectorXd::Zero(params.att_b.size());
      g.att_v = Eigen::VectorXd::Zero(params.att_v.size());
      break;
    case PoolingVariant::kGmha:
      g.gmha_v =
          Eigen::MatrixXd::Zero(params.gmha_v.rows(), params.gmha_v.cols());
      g.gmha_u = Eigen::VectorXd::Zero(params.gmha_u.size());
      [[fallthrough]];
    case PoolingVariant::kMha:
      g.mha_w1 =
          Eigen::MatrixXd::Zero(params.mha_w1.rows(), params.mha_w1.cols());
      g.mha_heads = Eigen::MatrixXd::Zero(params.mha_heads.rows(),
                                          params.mha_heads.cols());
      break;
  }
  return g;
}

}  // namespace

const char* PoolingVariantName(PoolingVariant variant) {
  switch (variant) {
    case PoolingVariant::kAttentiveStats: return "attentive_stats";
    case PoolingVariant::kMha: return "mha";
    case PoolingVariant::kGmha: return "gmha";
  }
  return "unknown";
}

void ValidatePooling(const PoolingParams& params, int frame_dim) {
  LID_REQUIRE(frame_dim >= 1, "frame dimension must be at least 1");
  LID_REQUIRE(params.n_att >= 1, "n_att must be at least 1");
  LID_REQUIRE(params.eps_var > 0.0, "eps_var must be positive");
  auto check = [&](const char* name, Eigen::Index got_r, Eigen::Index got_c,
                   Eigen::Index want_r, Eigen::Index want_c) {
    LID_REQUIRE(got_r == want_r && got_c == want_c, name, " has shape ",
                got_r, "x", got_c, ", expected ", want_r, "x", want_c);
  };
  switch (params.variant) {
    case PoolingVariant::kAttentiveStats:
      check("att_w", params.att_w.rows(), params.att_w.cols(), params.n_att,
            frame_dim);
      check("att_b", params.att_b.size(), 1, params.n_att, 1);
      check("att_v", params.att_v.size(), 1, params.n_att, 1);
      break;
    case PoolingVariant::kGmha:
      check("gmha_v", params.gmha_v.rows(), params.gmha_v.cols(),
            params.n_att, 2 * frame_dim);
      check("gmha_u", params.gmha_u.size(), 1, params.n_att, 1);
      [[fallthrough]];
    case PoolingVariant::kMha:
      LID_REQUIRE(params.n_heads >= 1, "n_heads must be at least 1");
      check("mha_w1", params.mha_w1.rows(), params.mha_w1.cols(),
            params.n_att, frame_dim);
      check("mha_heads", params.mha_heads.rows(), params.mha_heads.cols(),
            params.n_heads, params.n_att);
      break;
  }
}

int PoolingOutputDim(const PoolingParams& params, int frame_dim) {
  switch (params.variant) {
    case PoolingVariant::kAttentiveStats: return 2 * frame_dim;
    case PoolingVariant::kMha: return params.n_heads * 2 * frame_dim;
    case PoolingVariant::kGmha: return 2 * frame_dim;
  }
  return 0;
}

Eigen::VectorXd PoolForward(const Eigen::MatrixXd& frames,
                            const PoolingParams& params) {
  LID_REQUIRE(frames.rows() >= 1, "pooling needs at least one frame");
  LID_REQUIRE(frames.allFinite(), "frames contain non-finite values");
  ValidatePooling(params, static_cast<int>(frames.cols()));
  const Eigen::Index h = frames.cols();

  switch (params.variant) {
    case PoolingVariant::kAttentiveStats: {
      Eigen::MatrixXd hidden = ((frames * params.att_w.transpose()).rowwise() +
                                params.att_b.transpose())
                                   .array()
                                   .tanh()
                                   .matrix();
      Eigen::VectorXd alpha = Softmax(hidden * params.att_v);
      WeightedStats s = ComputeStats(frames, alpha, params.eps_var);
      Eigen::VectorXd out(2 * h);
      out.head(h) = s.mu;
      out.tail(h) = s.sigma;
      return out;
    }
    case PoolingVariant::kMha: {
      MhaState st = MhaForward(frames, params);
      Eigen::VectorXd out(params.n_heads * 2 * h);
      for (int j = 0; j < params.n_heads; ++j) {
        out.segment(j * 2 * h, 2 * h) = st.head_out.row(j).transpose();
      }
      return out;
    }
    case PoolingVariant::kGmha: {
      MhaState st = MhaForward(frames, params);
      Eigen::MatrixXd th = (st.head_out * params.gmha_v.transpose())
                               .array()
                               .tanh()
                               .matrix();
      Eigen::VectorXd gamma = Softmax(th * params.gmha_u);
      return st.head_out.transpose() * gamma;
    }
  }
  Die("unreachable pooling variant");
}

PoolingGrads PoolBackward(const Eigen::MatrixXd& frames,
                          const PoolingParams& params,
                          const Eigen::VectorXd& grad_out) {
  LID_REQUIRE(frames.rows() >= 1, "pooling needs at least one frame");
  ValidatePooling(params, static_cast<int>(frames.cols()));
  const Eigen::Index t = frames.rows();
  const Eigen::Index h = frames.cols();
  LID_REQUIRE(grad_out.size() == PoolingOutputDim(params,
                                                  static_cast<int>(h)),
              "grad_out size ", grad_out.size(), " does not match the ",
              "pooling output dimension ",
              PoolingOutputDim(params, static_cast<int>(h)));
  PoolingGrads grads = ZeroGrads(frames, params);

  switch (params.variant) {
    case PoolingVariant::kAttentiveStats: {
      Eigen::MatrixXd hidden = ((frames * params.att_w.transpose()).rowwise() +
                                params.att_b.transpose())
                                   .array()
                                   .tanh()
                                   .matrix();
      Eigen::VectorXd alpha = Softmax(hidden * params.att_v);
      WeightedStats s = ComputeStats(frames, alpha, params.eps_var);

      Eigen::VectorXd grad_alpha = Eigen::VectorXd::Zero(t);
      StatsBackward(frames, alpha, s, grad_out.head(h), grad_out.tail(h),
                    &grad_alpha, &grads.frames);
      Eigen::VectorXd grad_e = SoftmaxBackward(alpha, grad_alpha);
      grads.att_v = hidden.transpose() * grad_e;
      // Through tanh: grad_u_t = (1 - hidden_t^2) . (v * grad_e_t).
      Eigen::MatrixXd grad_u = ((1.0 - hidden.array().square()).colwise() *
                                grad_e.array())
                                   .matrix();
      grad_u.array().rowwise() *= params.att_v.transpose().array();
      grads.att_w = grad_u.transpose() * frames;
      grads.att_b = grad_u.colwise().sum().transpose();
      grads.frames.noalias() += grad_u * params.att_w;
      return grads;
    }
    case PoolingVariant::kMha: {
      MhaState st = MhaForward(frames, params);
      Eigen::MatrixXd grad_heads(params.n_heads, 2 * h);
      for (int j = 0; j < params.n_heads; ++j) {
        grad_heads.row(j) = grad_out.segment(j * 2 * h, 2 * h).transpose();
      }
      MhaBackwardFromHeads(frames, params, st, grad_heads, &grads);
      return grads;
    }
    case PoolingVariant::kGmha: {
      MhaState st = MhaForward(frames, params);
      Eigen::MatrixXd th = (st.head_out * params.gmha_v.transpose())
                               .array()
                               .tanh()
                               .matrix();
      Eigen::VectorXd gamma = Softmax(th * params.gmha_u);

      Eigen::VectorXd grad_gamma = st.head_out * grad_out;
      Eigen::VectorXd grad_s = SoftmaxBackward(gamma, grad_gamma);
      grads.gmha_u = th.transpose() * grad_s;
      Eigen::MatrixXd grad_pre = (((1.0 - th.array().square()).rowwise() *
                                   params.gmha_u.transpose().array())
                                      .colwise() *
                                  grad_s.array())
                                     .matrix();
      grads.gmha_v = grad_pre.transpose() * st.head_out;
      Eigen::MatrixXd grad_heads = gamma * grad_out.transpose();
      grad_heads.noalias() += grad_pre * params.gmha_v;
      MhaBackwardFromHeads(frames, params, st, grad_heads, &grads);
      return grads;
    }
  }
  Die("unreachable pooling variant");
}

PoolingParams RandomPooling(PoolingVariant variant, int frame_dim, int n_att,
                            int n_heads, Rng* rng) {
  PoolingParams p;
  p.variant = variant;
  p.n_att = n_att;
  p.n_heads = n_heads;
  auto fill = [&](Eigen::MatrixXd* m, int rows, int cols, double scale) {
    m->resize(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) (*m)(r, c) = scale * rng->Gaussian();
    }
  };
  auto fill_vec = [&](Eigen::VectorXd* v, int size, double scale) {
    v->resize(size);
    for (int i = 0; i < size; ++i) (*v)(i) = scale * rng->Gaussian();
  };
  switch (variant) {
    case PoolingVariant::kAttentiveStats:
      fill(&p.att_w, n_att, frame_dim, 1.0 / std::sqrt(frame_dim));
      fill_vec(&p.att_b, n_att, 0.1);
      fill_vec(&p.att_v, n_att, 1.0 / std::sqrt(n_att));
      break;
    case PoolingVariant::kGmha:
      fill(&p.gmha_v, n_att, 2 * frame_dim, 1.0 / std::sqrt(2.0 * frame_dim));
      fill_vec(&p.gmha_u, n_att, 1.0 / std::sqrt(n_att));
      [[fallthrough]];
    case PoolingVariant::kMha:
      fill(&p.mha_w1, n_att, frame_dim, 1.0 / std::sqrt(frame_dim));
      fill(&p.mha_heads, n_heads, n_att, 1.0 / std::sqrt(n_att));
      break;
  }
  ValidatePooling(p, frame_dim);
  return p;
}

}  // namespace lid
