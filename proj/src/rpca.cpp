#include "cinemagraph/rpca.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cinemagraph/errors.hpp"

namespace cinemagraph {

namespace {

struct Shrunk {
  Eigen::MatrixXd value;
  double nuclear = 0.0;  // nuclear norm of value
};

Shrunk svt_exact(const Eigen::MatrixXd& m, double tau) {
  Eigen::MatrixXd u, v;
  Eigen::VectorXd s;
  if (std::min(m.rows(), m.cols()) <= 64) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU();
    v = svd.matrixV();
    s = svd.singularValues();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU();
    v = svd.matrixV();
    s = svd.singularValues();
  }
  Eigen::Index keep = 0;
  while (keep < s.size() && s(keep) > tau) ++keep;
  Shrunk out;
  if (keep == 0) {
    out.value = Eigen::MatrixXd::Zero(m.rows(), m.cols());
    return out;
  }
  const Eigen::VectorXd shrunk = s.head(keep).array() - tau;
  out.nuclear = shrunk.sum();
  out.value = u.leftCols(keep) * shrunk.asDiagonal() * v.leftCols(keep).transpose();
  return out;
}

Shrunk svt_via_gram(const Eigen::MatrixXd& m, double tau) {
  const bool wide = m.rows() <= m.cols();
  const Eigen::MatrixXd gram = wide ? Eigen::MatrixXd(m * m.transpose())
                                    : Eigen::MatrixXd(m.transpose() * m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) throw NumericalError("Gram eigen-decomposition failed");
  const Eigen::VectorXd ev = eig.eigenvalues();
  // scale[i] = max(s - tau, 0) / s for s = sqrt(ev)
  Eigen::VectorXd scale = Eigen::VectorXd::Zero(ev.size());
  Shrunk out;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double s = std::sqrt(std::max(ev(i), 0.0));
    if (s > tau) {
      scale(i) = (s - tau) / s;
      out.nuclear += s - tau;
    }
  }
  const Eigen::MatrixXd& w = eig.eigenvectors();
  const Eigen::MatrixXd proj = w * scale.asDiagonal() * w.transpose();
  out.value = wide ? Eigen::MatrixXd(proj * m) : Eigen::MatrixXd(m * proj);
  return out;
}

bool prefer_gram(const Eigen::MatrixXd& m, SvdStrategy strategy) {
  switch (strategy) {
    case SvdStrategy::exact:
      return false;
    case SvdStrategy::gram:
      return true;
    case SvdStrategy::automatic:
      break;
  }
  const auto lo = std::min(m.rows(), m.cols());
  const auto hi = std::max(m.rows(), m.cols());
  return lo >= 32 && hi >= 4 * lo;
}

Shrunk shrink(const Eigen::MatrixXd& m, double tau, SvdStrategy strategy) {
  return prefer_gram(m, strategy) ? svt_via_gram(m, tau) : svt_exact(m, tau);
}

}  // namespace

Eigen::MatrixXd svt(const Eigen::MatrixXd& m, double tau) { return svt_exact(m, tau).value; }

Eigen::MatrixXd svt_gram(const Eigen::MatrixXd& m, double tau) {
  return svt_via_gram(m, tau).value;
}

Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& m, double tau) {
  return m.unaryExpr([tau](double x) {
    if (x > tau) return x - tau;
    if (x < -tau) return x + tau;
    return 0.0;
  });
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

double nuclear_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().sum();
}

RpcaResult rpca_apg(const Eigen::MatrixXd& p, const RpcaParams& params) {
  if (!(params.lambda > 0.0) || !std::isfinite(params.lambda)) {
    throw NumericalError("RPCA lambda must be positive and finite");
  }
  if (!p.allFinite()) throw NumericalError("RPCA input contains non-finite values");
  if (params.max_iterations <= 0) throw NumericalError("RPCA needs max_iterations > 0");

  RpcaResult result;
  result.low_rank = Eigen::MatrixXd::Zero(p.rows(), p.cols());
  result.sparse = Eigen::MatrixXd::Zero(p.rows(), p.cols());
  const double p_norm = p.norm();
  if (p.size() == 0 || p_norm == 0.0) {
    result.converged = true;
    return result;
  }

  // Lipschitz constant of the smooth coupling term is 2, so steps are 1/2.
  constexpr double kStep = 0.5;
  double mu = params.mu_scale * spectral_norm(p);
  const double mu_floor = params.mu_floor_ratio * mu;
  double t = 1.0, t_prev = 1.0;
  Eigen::MatrixXd a = result.low_rank, e = result.sparse;
  Eigen::MatrixXd a_prev = a, e_prev = e;

  for (int k = 1; k <= params.max_iterations; ++k) {
    const double momentum = (t_prev - 1.0) / t;
    const Eigen::MatrixXd ya = a + momentum * (a - a_prev);
    const Eigen::MatrixXd ye = e + momentum * (e - e_prev);
    const Eigen::MatrixXd grad = ya + ye - p;

    Shrunk next_a = shrink(ya - kStep * grad, mu * kStep, params.svd);
    Eigen::MatrixXd next_e = soft_threshold(ye - kStep * grad, params.lambda * mu * kStep);
    if (!next_a.value.allFinite() || !next_e.allFinite()) {
      throw NumericalError("RPCA iterate became non-finite at iteration " + std::to_string(k));
    }

    const double change = std::sqrt((next_a.value - a).squaredNorm() + (next_e - e).squaredNorm());
    const double scale = std::max(1.0, std::sqrt(a.squaredNorm() + e.squaredNorm()));

    a_prev = std::move(a);
    e_prev = std::move(e);
    a = std::move(next_a.value);
    e = std::move(next_e);

    const double residual = (a + e - p).norm() / std::max(1.0, p_norm);
    RpcaTraceEntry entry;
    entry.iteration = k;
    entry.mu = mu;
    entry.objective = mu * (next_a.nuclear + params.lambda * e.lpNorm<1>()) +
                      0.5 * (a + e - p).squaredNorm();
    entry.residual = residual;
    result.trace.push_back(entry);
    result.iterations = k;
    result.final_residual = residual;

    const bool at_floor = mu <= mu_floor;
    t_prev = t;
    t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    mu = std::max(params.mu_decay * mu, mu_floor);

    if (at_floor && change / scale < params.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.low_rank = std::move(a);
  result.sparse = std::move(e);
  return result;
}

}  // namespace cinemagraph
