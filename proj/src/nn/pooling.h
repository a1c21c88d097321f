// src/nn/pooling.h

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

#ifndef LIDKIT_NN_POOLING_H_
#define LIDKIT_NN_POOLING_H_

#include <Eigen/Dense>
#include <string>

namespace lid {

class Rng;

enum class PoolingVariant { kAttentiveStats, kMha, kGmha };

const char* PoolingVariantName(PoolingVariant variant);

// Parameters for the three pooling layers. Frames are a T x H matrix; only
// the tensors of the selected variant are used.
//
// attentive_stats: e_t = v^T tanh(W x_t + b)
//   att_w: n_att x H, att_b: n_att, att_v: n_att; output 2H.
// mha: a_t = ReLU(W1 x_t); head j scores e_t^j = heads.row(j) . a_t
//   mha_w1: n_att x H, mha_heads: n_heads x n_att; output n_heads * 2H,
//   head blocks (mu_j, sigma_j) concatenated in head order.
// gmha: second-level attention over the mha head outputs h_j,
//   gamma = softmax_j(u^T tanh(V h_j)), output sum_j gamma_j h_j (2H).
//   gmha_v: n_att x 2H, gmha_u: n_att, on top of the mha tensors.
struct PoolingParams {
  PoolingVariant variant = PoolingVariant::kAttentiveStats;
  int n_att = 128;
  int n_heads = 5;
  double eps_var = 1e-10;  // variance floor inside the sqrt

  Eigen::MatrixXd att_w;
  Eigen::VectorXd att_b;
  Eigen::VectorXd att_v;
  Eigen::MatrixXd mha_w1;
  Eigen::MatrixXd mha_heads;
  Eigen::MatrixXd gmha_v;
  Eigen::VectorXd gmha_u;
};

// Gradients with the same shapes as the corresponding parameters; only the
// tensors of the active variant are filled.
struct PoolingGrads {
  Eigen::MatrixXd frames;
  Eigen::MatrixXd att_w;
  Eigen::VectorXd att_b;
  Eigen::VectorXd att_v;
  Eigen::MatrixXd mha_w1;
  Eigen::MatrixXd mha_heads;
  Eigen::MatrixXd gmha_v;
  Eigen::VectorXd gmha_u;
};

// Throws unless the parameter shapes are consistent with the variant and
// the frame dimension H.
void ValidatePooling(const PoolingParams& params, int frame_dim);

int PoolingOutputDim(const PoolingParams& params, int frame_dim);

// Forward pass. frames is T x H with T >= 1; all entries finite.
Eigen::VectorXd PoolForward(const Eigen::MatrixXd& frames,
                            const PoolingParams& params);

// Analytic backward pass for the scalar function grad_out . output.
PoolingGrads PoolBackward(const Eigen::MatrixXd& frames,
                          const PoolingParams& params,
                          const Eigen::VectorXd& grad_out);

// Gaussian-initialized parameters (scale 1/sqrt(fan-in)) for tests and the
// verification CLI.
PoolingParams RandomPooling(PoolingVariant variant, int frame_dim, int n_att,
                            int n_heads, Rng* rng);

}  // namespace lid

#endif  // LIDKIT_NN_POOLING_H_
