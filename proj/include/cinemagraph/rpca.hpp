#pragma once

#include <vector>

#include <Eigen/Core>

namespace cinemagraph {

enum class SvdStrategy {
  automatic,  // Gram path when the matrix is large and strongly rectangular
  exact,      // full thin SVD
  gram,       // eigen-decomposition of the smaller Gram matrix
};

struct RpcaParams {
  double lambda = 0.01;
  double tolerance = 1e-7;
  int max_iterations = 500;
  double mu_scale = 0.99;       // mu_0 = mu_scale * ||P||_2
  double mu_floor_ratio = 1e-9; // mu_bar = mu_floor_ratio * mu_0
  double mu_decay = 0.9;
  SvdStrategy svd = SvdStrategy::automatic;
};

struct RpcaTraceEntry {
  int iteration = 0;
  double mu = 0.0;
  double objective = 0.0;  // smoothed surrogate at the current iterate
  double residual = 0.0;   // ||A + E - P||_F / max(1, ||P||_F)
};

struct RpcaResult {
  Eigen::MatrixXd low_rank;
  Eigen::MatrixXd sparse;
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  std::vector<RpcaTraceEntry> trace;
};

/// Singular value thresholding: U diag(max(s - tau, 0)) V^T.
Eigen::MatrixXd svt(const Eigen::MatrixXd& m, double tau);
/// Same operator computed from the eigen-decomposition of the smaller Gram
/// matrix; cheaper when one dimension is much smaller than the other.
Eigen::MatrixXd svt_gram(const Eigen::MatrixXd& m, double tau);
/// Elementwise sign(x) * max(|x| - tau, 0).
Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& m, double tau);
double spectral_norm(const Eigen::MatrixXd& m);
double nuclear_norm(const Eigen::MatrixXd& m);

/// Accelerated proximal gradient with continuation for
///   min ||A||_* + lambda ||E||_1  s.t.  A + E = P.
/// Throws NumericalError on non-finite input or lambda <= 0.
RpcaResult rpca_apg(const Eigen::MatrixXd& p, const RpcaParams& params);

}  // namespace cinemagraph
