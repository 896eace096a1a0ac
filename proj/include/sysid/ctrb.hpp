#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "sysid/linalg.hpp"

namespace sysid {

// C_k = [H, AH, ..., A^{k-1} H], n x (k r).
MatrixXd controllability_matrix(const MatrixXd& a, const MatrixXd& h, int k);

// Gamma_k = sum_{i<k} A^i H H' A'^i.
MatrixXd gramian(const MatrixXd& a, const MatrixXd& h, int k);

// Smallest k with rank(C_k) = n, rank counting singular values above
// tol * sigma_max(C_k). nullopt when the rank stalls below n.
std::optional<int> controllability_index(const MatrixXd& a, const MatrixXd& h,
                                         double tol = 1e-8);

struct StaircaseForm {
  MatrixXd U;
  MatrixXd A_tilde;  // U' A U
  MatrixXd H_tilde;  // U' H
  std::vector<int> block_sizes;
  std::optional<int> kappa;  // set iff controllable
  bool controllable = false;
  double tol = 0.0;
};

// Orthogonal staircase reduction by repeated SVD of the coupling block.
// Singular values above tol * max(||A||_2, ||H||_2) count towards r_i. An
// uncontrollable pair yields the partial staircase up to the stall.
StaircaseForm staircase(const MatrixXd& a, const MatrixXd& h, double tol = 1e-8);

// sigma_min([A - sI, H]) for complex s.
double excitation_sigma_min(const MatrixXd& a, const MatrixXd& h, std::complex<double> s);

struct DistanceEstimate {
  double value = 0.0;
  std::complex<double> minimizer_s;
  double grid_resolution = 0.0;
  bool refined = false;
};

// Upper estimate of d(A,H) = inf_s sigma_min([A - sI, H]). Grid over the
// half-disk |s| <= ||A|| + ||H||, Im s >= 0 (the objective is symmetric under
// conjugation for real data), then Nelder-Mead from the best three grid local
// minima. grid_resolution <= 0 selects 0.02 * radius.
DistanceEstimate distance_to_uncontrollability(const MatrixXd& a, const MatrixXd& h,
                                               double grid_resolution = 0.0,
                                               bool refine = true);

// Smallest eigenvalue of T_s = [A - sI, H][A - sI, H]^* for the perturbed
// integrator A = rho (I + N), H = rho e_n, in closed form:
// |rho - s|^2 + rho^2 - 2 |rho| |rho - s| cos(pi / (n + 1)).
double toeplitz_sigma_min(double rho, std::complex<double> s, int n);

}  // namespace sysid
