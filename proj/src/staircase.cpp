#include "sysid/ctrb.hpp"

#include <algorithm>

#include "sysid/errors.hpp"

namespace sysid {

namespace {

int count_above(const VectorXd& sv, double thr) {
  return static_cast<int>(std::count_if(sv.begin(), sv.end(), [thr](double s) { return s > thr; }));
}

}  // namespace

StaircaseForm staircase(const MatrixXd& a, const MatrixXd& h, double tol) {
  if (a.rows() != a.cols()) throw DimensionError("A must be square");
  if (h.rows() != a.rows()) throw DimensionError("H must have as many rows as A");
  if (!(tol > 0.0)) throw DomainError("staircase: tol must be positive");

  const Eigen::Index n = a.rows();
  StaircaseForm out;
  out.tol = tol;
  out.U = MatrixXd::Identity(n, n);
  out.A_tilde = a;
  out.H_tilde = h;
  const double thr = tol * std::max(spectral_norm(a), spectral_norm(h));

  if (h.cols() > 0 && n > 0) {
    Eigen::JacobiSVD<MatrixXd> svd(h, Eigen::ComputeFullU);
    const int r1 = count_above(svd.singularValues(), thr);
    if (r1 > 0) {
      out.U = svd.matrixU();
      out.A_tilde = out.U.transpose() * a * out.U;
      out.H_tilde = out.U.transpose() * h;
      out.H_tilde.bottomRows(n - r1).setZero();
      out.block_sizes.push_back(r1);
    }
  }

  Eigen::Index offset = out.block_sizes.empty() ? 0 : out.block_sizes.front();
  while (!out.block_sizes.empty() && offset < n) {
    const int r_prev = out.block_sizes.back();
    const Eigen::Index prev = offset - r_prev;
    const Eigen::Index rest = n - offset;
    const MatrixXd coupling = out.A_tilde.block(offset, prev, rest, r_prev);
    Eigen::JacobiSVD<MatrixXd> svd(coupling, Eigen::ComputeFullU);
    const int ri = count_above(svd.singularValues(), thr);
    if (ri == 0) break;

    MatrixXd q = MatrixXd::Identity(n, n);
    q.bottomRightCorner(rest, rest) = svd.matrixU();
    out.A_tilde = q.transpose() * out.A_tilde * q;
    out.H_tilde = q.transpose() * out.H_tilde;
    out.U = out.U * q;
    out.A_tilde.block(offset + ri, prev, rest - ri, r_prev).setZero();
    out.block_sizes.push_back(ri);
    offset += ri;
  }

  out.controllable = (offset == n && n > 0);
  if (out.controllable) out.kappa = static_cast<int>(out.block_sizes.size());
  return out;
}

}  // namespace sysid
