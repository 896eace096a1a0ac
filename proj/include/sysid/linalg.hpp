#pragma once

#include <Eigen/Dense>

namespace sysid {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Largest singular value; 0 for empty matrices.
double spectral_norm(const MatrixXd& m);

// Smallest singular value among the min(rows, cols) singular values.
double sigma_min(const MatrixXd& m);

double spectral_radius(const MatrixXd& a);

// Number of singular values strictly greater than `threshold`.
int rank_above(const MatrixXd& m, double threshold);

// J_n(lambda): lambda on the diagonal, ones on the superdiagonal.
MatrixXd jordan_block(int n, double lambda);

// 1-based canonical vector e_i in R^n as an n x 1 matrix.
MatrixXd unit_column(int n, int i);

// Column blocks side by side; both must have the same number of rows.
MatrixXd hstack(const MatrixXd& left, const MatrixXd& right);

}  // namespace sysid
