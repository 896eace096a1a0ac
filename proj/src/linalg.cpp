#include "sysid/linalg.hpp"

#include <algorithm>

#include "sysid/errors.hpp"

namespace sysid {

double spectral_norm(const MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  return svd.singularValues()(0);
}

double sigma_min(const MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1);
}

double spectral_radius(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::EigenSolver<MatrixXd> es(a, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

int rank_above(const MatrixXd& m, double threshold) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  return static_cast<int>(std::count_if(sv.begin(), sv.end(),
                                        [threshold](double s) { return s > threshold; }));
}

MatrixXd jordan_block(int n, double lambda) {
  MatrixXd j = lambda * MatrixXd::Identity(n, n);
  for (int i = 0; i + 1 < n; ++i) j(i, i + 1) = 1.0;
  return j;
}

MatrixXd unit_column(int n, int i) {
  if (i < 1 || i > n) throw DimensionError("unit_column: index out of range");
  MatrixXd e = MatrixXd::Zero(n, 1);
  e(i - 1, 0) = 1.0;
  return e;
}

MatrixXd hstack(const MatrixXd& left, const MatrixXd& right) {
  if (left.rows() != right.rows()) throw DimensionError("hstack: row count mismatch");
  MatrixXd out(left.rows(), left.cols() + right.cols());
  out.leftCols(left.cols()) = left;
  out.rightCols(right.cols()) = right;
  return out;
}

}  // namespace sysid
