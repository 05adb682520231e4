#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "ilab/strategies.hpp"

namespace ilab {

enum class MapoScheme { BridgeOrForward, Skorokhod };

// d assets with drift vector mu, invertible volatility matrix sigma, scalar
// risk-free rate r, terminal signal vector b and a per-component insider
// mask (full-information ops ignore the mask).
struct MultiAssetParams {
  Eigen::VectorXd mu;
  double r = 0.0;
  Eigen::MatrixXd sigma;
  double T = 0.0;
  Eigen::VectorXd b;
  std::vector<bool> mask;  // empty means all-insider

  Eigen::Index d() const { return mu.size(); }
  bool insider(Eigen::Index i) const {
    return mask.empty() || mask[std::size_t(i)];
  }
};
// Throws on dimension mismatch, non-finite entries, or condition number
// above 1e10 (the number is included in the message).
void validate(const MultiAssetParams& m);
double condition_number(const Eigen::MatrixXd& sigma);

struct PortfolioVector {
  Eigen::VectorXd pi;
  bool box_violation = false;      // some component outside [0,1]
  bool simplex_violation = false;  // components sum above 1
};

// Bridge/forward optimum: pi = (sigma sigma')^{-1}(mu - r 1) + (sigma')^{-1} b / T.
// Reported unconstrained; the flags record where the no-shorting box or the
// budget constraint would bind.
PortfolioVector mapo_pi_bridge_or_forward(const MultiAssetParams& m);

// Skorokhod optimum under no shorting: pi_i = 1{sigma_i b > -(mu_i - r) T}
// with ties resolved to 0 (sigma_i = row i).
PortfolioVector mapo_pi_skorokhod(const MultiAssetParams& m);

// Constant-parameter values:
//   BridgeOrForward: rT + T/2 ||(mu - r 1)' sigma^{-1} + b'/T||^2
//   Skorokhod:       rT + T sum_{active i} [(mu_i - r) + sigma_i b / T]
double mapo_value(const MultiAssetParams& m, MapoScheme scheme);

// Partial insider information: signal components with mask false are zeroed.
// Bridge/forward keeps the closed form with the masked signal. Skorokhod:
// insider components take the indicator rule, non-insider components solve
// the first-order conditions A_NN pi_N = (mu - r 1)_N - A_NI pi_I with
// A = sigma (I - M) sigma' (derived from the J functional below).
std::pair<PortfolioVector, double> mapo_partial_info(const MultiAssetParams& m,
                                                     MapoScheme scheme);

// The objective per unit time, M = insider-mask projector:
//   BridgeOrForward: J = r + pi'(mu-r1) + pi' sigma M b / T - ||sigma' pi||^2 / 2
//   Skorokhod:       J = r + pi'(mu-r1) + pi' sigma M b / T
//                        - pi' sigma (I-M) sigma' pi / 2
// With the full mask the Skorokhod J is affine (the anticipating correction
// cancels the quadratic), which is why its optimum needs the box.
double mapo_J(const MultiAssetParams& m, MapoScheme scheme,
              const Eigen::VectorXd& pi);
Eigen::VectorXd mapo_J_gradient(const MultiAssetParams& m, MapoScheme scheme,
                                const Eigen::VectorXd& pi);

// Feasible sets for the numeric oracle. The closed forms ignore the budget
// row, so equivalence tests use Unconstrained (bridge/forward) and Box
// (Skorokhod); BoxAndBudget adds sum(pi) <= 1.
enum class MapoFeasible { Unconstrained, Box, BoxAndBudget };

// Projected gradient ascent on J; independent correctness oracle for the
// closed-form portfolios. Converges to gradient norm (unconstrained) or
// projected-KKT residual (constrained) below 1e-8, else throws with the
// residual.
struct MaximizeResult {
  Eigen::VectorXd pi;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};
MaximizeResult numeric_maximize_J(const MultiAssetParams& m, MapoScheme scheme,
                                  MapoFeasible feasible);

// Parameter files: {"mu":[...],"r":...,"sigma":[[...]],"T":...,"b":[...],
// "mask":[...]} with mask optional.
MultiAssetParams mapo_params_from_json_text(const std::string& text);

}  // namespace ilab
