#pragma once

#include <optional>

#include "sysid/lti.hpp"

namespace sysid {

inline constexpr double kDefaultRidge = 1e-3;

struct Estimate {
  MatrixXd A_hat;
  MatrixXd B_hat;
  double ridge = 0.0;
  int N = 0;
  // Condition number of the regressor Gram matrix sum z_t z_t' with
  // z_t = [x_t; u_t] (before adding the ridge); +inf when singular.
  double gram_condition = 0.0;
  std::optional<double> error_vs;
};

// argmin over (F, G) of sum_t ||x_{t+1} - F x_t - G u_t||^2 + ridge (||F||_F^2 + ||G||_F^2).
// Solved as a stacked least-squares problem [Z'; sqrt(ridge) I] by Householder QR,
// never through the normal equations. ridge = 0 with a rank-deficient
// regressor throws RegressionError.
Estimate least_squares(const Trajectory& traj, double ridge = kDefaultRidge);

// ||A_true - A_hat||_2
double estimation_error(const Estimate& est, const MatrixXd& a_true);

}  // namespace sysid
