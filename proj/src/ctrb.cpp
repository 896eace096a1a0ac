#include "sysid/ctrb.hpp"

#include <cmath>
#include <numbers>

#include "sysid/errors.hpp"

namespace sysid {

namespace {

void check_pair(const MatrixXd& a, const MatrixXd& h) {
  if (a.rows() != a.cols()) throw DimensionError("A must be square");
  if (h.rows() != a.rows()) throw DimensionError("H must have as many rows as A");
}

}  // namespace

MatrixXd controllability_matrix(const MatrixXd& a, const MatrixXd& h, int k) {
  check_pair(a, h);
  if (k < 1) throw DomainError("controllability_matrix: k must be >= 1");
  const Eigen::Index r = h.cols();
  MatrixXd c(a.rows(), k * r);
  MatrixXd block = h;
  for (int i = 0; i < k; ++i) {
    c.middleCols(i * r, r) = block;
    if (i + 1 < k) block = a * block;
  }
  return c;
}

MatrixXd gramian(const MatrixXd& a, const MatrixXd& h, int k) {
  check_pair(a, h);
  if (k < 1) throw DomainError("gramian: k must be >= 1");
  MatrixXd g = MatrixXd::Zero(a.rows(), a.rows());
  MatrixXd block = h;
  for (int i = 0; i < k; ++i) {
    g.noalias() += block * block.transpose();
    if (i + 1 < k) block = a * block;
  }
  return 0.5 * (g + g.transpose());
}

std::optional<int> controllability_index(const MatrixXd& a, const MatrixXd& h, double tol) {
  check_pair(a, h);
  if (!(tol > 0.0)) throw DomainError("controllability_index: tol must be positive");
  const int n = static_cast<int>(a.rows());
  int prev = -1;
  for (int k = 1; k <= n; ++k) {
    const MatrixXd c = controllability_matrix(a, h, k);
    const int rank = rank_above(c, tol * spectral_norm(c));
    if (rank == n) return k;
    // Once the rank stops growing it never grows again.
    if (rank == prev) return std::nullopt;
    prev = rank;
  }
  return std::nullopt;
}

double toeplitz_sigma_min(double rho, std::complex<double> s, int n) {
  if (n < 1) throw DomainError("toeplitz_sigma_min: n must be >= 1");
  const double d = std::abs(rho - s);
  return d * d + rho * rho - 2.0 * std::abs(rho) * d * std::cos(std::numbers::pi / (n + 1));
}

}  // namespace sysid
