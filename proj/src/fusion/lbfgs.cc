// src/fusion/lbfgs.cc

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

#include "fusion/lbfgs.h"

#include <cmath>
#include <deque>

#include "base/error.h"

namespace lid {

namespace {

struct Correction {
  Eigen::VectorXd s;  // x_{k+1} - x_k
  Eigen::VectorXd y;  // g_{k+1} - g_k
  double rho;         // 1 / (y^T s)
};

// H0 = gamma * I with gamma = s^T y / y^T y from the newest pair.
Eigen::VectorXd TwoLoop(const Eigen::VectorXd& grad,
                        const std::deque<Correction>& history) {
  Eigen::VectorXd q = grad;
  std::vector<double> alpha(history.size());
  for (int i = static_cast<int>(history.size()) - 1; i >= 0; --i) {
    alpha[i] = history[i].rho * history[i].s.dot(q);
    q -= alpha[i] * history[i].y;
  }
  if (!history.empty()) {
    const Correction& newest = history.back();
    q *= newest.s.dot(newest.y) / newest.y.squaredNorm();
  }
  for (size_t i = 0; i < history.size(); ++i) {
    double beta = history[i].rho * history[i].y.dot(q);
    q += (alpha[i] - beta) * history[i].s;
  }
  return q;
}

class Evaluator {
 public:
  Evaluator(const Objective& objective, const Eigen::VectorXd& x,
            const Eigen::VectorXd& direction)
      : objective_(objective), x_(x), direction_(direction) {}

  // phi(alpha) = f(x + alpha d); also exposes the trial gradient.
  double Phi(double alpha, double* dphi) {
    trial_x_ = x_ + alpha * direction_;
    double f = objective_(trial_x_, &trial_grad_);
    if (!std::isfinite(f) || !trial_grad_.allFinite()) {
      Die("non-finite objective at trial point (step ", alpha,
          ", f = ", f, ")");
    }
    *dphi = trial_grad_.dot(direction_);
    return f;
  }

  const Eigen::VectorXd& trial_x() const { return trial_x_; }
  const Eigen::VectorXd& trial_grad() const { return trial_grad_; }

 private:
  const Objective& objective_;
  const Eigen::VectorXd& x_;
  const Eigen::VectorXd& direction_;
  Eigen::VectorXd trial_x_;
  Eigen::VectorXd trial_grad_;
};

// Cubic-interpolation minimizer of phi on [a, b] given values and
// derivatives at both ends; falls back to bisection when degenerate.
double Interpolate(double a, double fa, double da, double b, double fb,
                   double db) {
  double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  double disc = d1 * d1 - da * db;
  if (disc >= 0.0) {
    double d2 = std::sqrt(disc) * (b > a ? 1.0 : -1.0);
    double t = b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2);
    double lo = std::min(a, b), hi = std::max(a, b);
    double margin = 0.1 * (hi - lo);
    if (std::isfinite(t) && t > lo + margin && t < hi - margin) return t;
  }
  return 0.5 * (a + b);
}

// Stage two of the strong-Wolfe search: [lo, hi] brackets a point
// satisfying both conditions, with phi(lo) the lower end value.
bool Zoom(Evaluator* eval, double phi0, double dphi0, double c1, double c2,
          double alpha_lo, double phi_lo, double dphi_lo, double alpha_hi,
          double phi_hi, double dphi_hi, double* alpha_out, double* phi_out,
          double* dphi_out) {
  const int kMaxZoom = 50;
  for (int i = 0; i < kMaxZoom; ++i) {
    double alpha = Interpolate(alpha_lo, phi_lo, dphi_lo, alpha_hi, phi_hi,
                               dphi_hi);
    double width = std::abs(alpha_hi - alpha_lo);
    if (width < 1e-16 * std::max(1.0, std::abs(alpha_lo))) return false;
    double dphi;
    double phi = eval->Phi(alpha, &dphi);
    if (phi > phi0 + c1 * alpha * dphi0 || phi >= phi_lo) {
      alpha_hi = alpha;
      phi_hi = phi;
      dphi_hi = dphi;
    } else {
      if (std::abs(dphi) <= -c2 * dphi0) {
        *alpha_out = alpha;
        *phi_out = phi;
        *dphi_out = dphi;
        return true;
      }
      if (dphi * (alpha_hi - alpha_lo) >= 0.0) {
        alpha_hi = alpha_lo;
        phi_hi = phi_lo;
        dphi_hi = dphi_lo;
      }
      alpha_lo = alpha;
      phi_lo = phi;
      dphi_lo = dphi;
    }
  }
  return false;
}

// Strong-Wolfe line search (bracket + zoom). On success the evaluator's
// trial state holds the accepted point.
bool WolfeSearch(Evaluator* eval, double phi0, double dphi0, double c1,
                 double c2, double alpha_init, double* alpha_out,
                 double* phi_out) {
  const int kMaxBracket = 30;
  const double kAlphaMax = 1e12;
  double alpha_prev = 0.0, phi_prev = phi0, dphi_prev = dphi0;
  double alpha = alpha_init;
  double dphi_final;
  for (int i = 0; i < kMaxBracket; ++i) {
    double dphi;
    double phi = eval->Phi(alpha, &dphi);
    if (phi > phi0 + c1 * alpha * dphi0 || (i > 0 && phi >= phi_prev)) {
      // A successful Zoom leaves the evaluator's trial state at the
      // accepted point.
      return Zoom(eval, phi0, dphi0, c1, c2, alpha_prev, phi_prev, dphi_prev,
                  alpha, phi, dphi, alpha_out, phi_out, &dphi_final);
    }
    if (std::abs(dphi) <= -c2 * dphi0) {
      *alpha_out = alpha;
      *phi_out = phi;
      return true;
    }
    if (dphi >= 0.0) {
      return Zoom(eval, phi0, dphi0, c1, c2, alpha, phi, dphi, alpha_prev,
                  phi_prev, dphi_prev, alpha_out, phi_out, &dphi_final);
    }
    alpha_prev = alpha;
    phi_prev = phi;
    dphi_prev = dphi;
    alpha = std::min(2.0 * alpha, kAlphaMax);
    if (alpha >= kAlphaMax) return false;
  }
  return false;
}

}  // namespace

const char* OptStatusName(OptStatus status) {
  switch (status) {
    case OptStatus::kConverged: return "converged";
    case OptStatus::kMaxIterations: return "max_iterations";
    case OptStatus::kLineSearchFailed: return "line_search_failed";
  }
  return "unknown";
}

OptResult LbfgsMinimize(const Objective& objective, const Eigen::VectorXd& x0,
                        const OptimizerConfig& config) {
  LID_REQUIRE(x0.size() > 0, "optimizer needs at least one variable");
  LID_REQUIRE(config.history > 0, "optimizer history must be positive");
  LID_REQUIRE(config.max_iter >= 0, "max_iter must be non-negative");
  LID_REQUIRE(0.0 < config.wolfe_c1 && config.wolfe_c1 < config.wolfe_c2 &&
                  config.wolfe_c2 < 1.0,
              "Wolfe constants must satisfy 0 < c1 < c2 < 1");

  OptResult result;
  result.x = x0;
  Eigen::VectorXd grad(x0.size());
  result.f = objective(result.x, &grad);
  if (!std::isfinite(result.f) || !grad.allFinite()) {
    Die("non-finite objective at the starting point (f = ", result.f, ")");
  }
  result.grad_inf_norm = grad.lpNorm<Eigen::Infinity>();
  if (result.grad_inf_norm < config.grad_tol) {
    result.status = OptStatus::kConverged;
    return result;
  }

  std::deque<Correction> history;
  for (int iter = 1; iter <= config.max_iter; ++iter) {
    Eigen::VectorXd direction = -TwoLoop(grad, history);
    double dphi0 = grad.dot(direction);
    if (dphi0 >= 0.0) {
      // Curvature information went stale; restart from steepest descent.
      history.clear();
      direction = -grad;
      dphi0 = grad.dot(direction);
    }
    // First step scales with the gradient; afterwards alpha = 1 is the
    // natural quasi-Newton trial step.
    double alpha_init =
        history.empty() && iter == 1
            ? std::min(1.0, 1.0 / grad.lpNorm<Eigen::Infinity>())
            : 1.0;

    Evaluator eval(objective, result.x, direction);
    double alpha, f_new;
    if (!WolfeSearch(&eval, result.f, dphi0, config.wolfe_c1, config.wolfe_c2,
                     alpha_init, &alpha, &f_new)) {
      result.status = OptStatus::kLineSearchFailed;
      return result;
    }

    Correction corr;
    corr.s = alpha * direction;
    corr.y = eval.trial_grad() - grad;
    double sy = corr.s.dot(corr.y);
    if (sy > 1e-10 * corr.s.norm() * corr.y.norm()) {
      corr.rho = 1.0 / sy;
      history.push_back(std::move(corr));
      if (static_cast<int>(history.size()) > config.history) {
        history.pop_front();
      }
    }

    result.x = eval.trial_x();
    result.f = f_new;
    grad = eval.trial_grad();
    result.iterations = iter;
    result.grad_inf_norm = grad.lpNorm<Eigen::Infinity>();
    if (result.grad_inf_norm < config.grad_tol) {
      result.status = OptStatus::kConverged;
      return result;
    }
  }
  result.status = OptStatus::kMaxIterations;
  return result;
}

}  // namespace lid
