#include "sysid/ident.hpp"

#include <cmath>
#include <limits>

#include "sysid/errors.hpp"

namespace sysid {

Estimate least_squares(const Trajectory& traj, double ridge) {
  const int N = traj.horizon();
  const int n = traj.n();
  const int p = traj.p();
  if (N < 1) throw DomainError("least_squares: need at least one transition");
  if (traj.states.cols() != N + 1) throw DimensionError("least_squares: states must have N+1 columns");
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw DomainError("least_squares: ridge must be >= 0");

  const int d = n + p;
  // Rows of zt are the regressors z_t' = [x_t', u_t'].
  MatrixXd zt(N, d);
  zt.leftCols(n) = traj.states.leftCols(N).transpose();
  if (p > 0) zt.rightCols(p) = traj.inputs.transpose();
  const MatrixXd yt = traj.states.rightCols(N).transpose();

  Estimate est;
  est.ridge = ridge;
  est.N = N;
  {
    const MatrixXd gram = zt.transpose() * zt;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    const double hi = es.eigenvalues()(d - 1);
    est.gram_condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  }

  MatrixXd theta_t;  // d x n, theta_t' = [F G]
  if (ridge > 0.0) {
    MatrixXd lhs = MatrixXd::Zero(N + d, d);
    lhs.topRows(N) = zt;
    lhs.bottomRows(d).diagonal().setConstant(std::sqrt(ridge));
    MatrixXd rhs = MatrixXd::Zero(N + d, n);
    rhs.topRows(N) = yt;
    theta_t = lhs.householderQr().solve(rhs);
  } else {
    Eigen::ColPivHouseholderQR<MatrixXd> qr(zt);
    qr.setThreshold(1e-12);
    if (qr.rank() < d) {
      throw RegressionError("rank-deficient regression: regressor rank " +
                            std::to_string(qr.rank()) + " < " + std::to_string(d));
    }
    theta_t = qr.solve(yt);
  }
  est.A_hat = theta_t.topRows(n).transpose();
  est.B_hat = theta_t.bottomRows(p).transpose();
  return est;
}

double estimation_error(const Estimate& est, const MatrixXd& a_true) {
  if (a_true.rows() != est.A_hat.rows() || a_true.cols() != est.A_hat.cols()) {
    throw DimensionError("estimation_error: dimension mismatch");
  }
  return spectral_norm(a_true - est.A_hat);
}

}  // namespace sysid
