#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sysid/lti.hpp"

namespace sysid {

// ||A^k||_2 <= (e k)^{n-1} max(M^n, 1) for ||A||_2 <= M, rho(A) <= 1.
double powers_bound(double M, int n, int k);

// ||Gamma_k||_2 <= e^{2n-2} k^{2n-1} max(M^{2n}, 1).
double gramian_upper_bound(double M, int n, int k);

// Bound on Gamma_k(2,2) for the hard chain: (2 rho)^{2n-2} / (1 - 4 rho^2).
double gramian22_decay_bound(double rho, int n);

struct IntegratorDistance {
  double value;  // rho sin(pi / (n + 1))
  double lower;  // 2 rho / (n + 1)
  double upper;  // rho pi / (n + 1)
};

IntegratorDistance integrator_distance_closed_form(double rho, int n);

// 4^{n-3} / (3 eps^2) ln(1/delta). With proof_form, the expression carried
// through the lower-bound argument instead: 4^{n-2} / (6 eps^2) ln(1/(3 delta)).
double exp_hard_lower_bound(int n, double eps, double delta, bool proof_form = false);

struct BoundCertificate {
  double M = 0.0;
  double mu = 0.0;
  int kappa = 0;
  Eigen::Matrix3d xi;
  Eigen::Vector3d alpha1;
  double bound = 0.0;  // upper bound on ||C_kappa^+||_2
};

// xi = [[1, 1, 1/mu], [M/mu, (2+M)/mu, M/mu], [0, 0, 1/mu]],
// alpha1 = [1/mu, M/mu^2, 1/mu], bound = ||xi^{kappa-1}||_2 ||alpha1||_2.
BoundCertificate sigma_min_certificate(double M, double mu, int kappa);

struct KlResult {
  double value = 0.0;
  std::vector<double> per_step;
  int N = 0;
};

// KL(P_S1 || P_S2) over N transitions for pairs with A1 - A2 = H G and a
// shared H (unit-variance noise). Sigma_0 = 0, Sigma_{k+1} = A1 Sigma_k A1' +
// HH' + input_std^2 BB', per step 0.5 tr(G Sigma_k G').
// Throws KlInapplicableError when A1 - A2 is outside the range of H.
KlResult kl_trajectory(const LtiSystem& s1, const LtiSystem& s2, int N, double input_std = 0.0);

// Smallest N <= N_max with KL >= ln(1/(3 delta)); nullopt past N_max.
std::optional<long long> minimax_required_samples(const LtiSystem& s1, const LtiSystem& s2,
                                                  double delta, long long N_max,
                                                  double input_std = 0.0);

}  // namespace sysid
