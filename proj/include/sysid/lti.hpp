#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "sysid/linalg.hpp"

namespace sysid {

inline constexpr double kSpectralRadiusTol = 1e-9;
inline constexpr double kDefaultRankTol = 1e-8;

// x_{k+1} = A x_k + B u_k + H w_k with ||A||, ||B||, ||H|| <= M, rho(A) <= 1,
// and B, H of full column rank. p = 0 (no inputs) and r = 0 are allowed for
// analysis-only systems. Immutable once built; obtain through make_system().
class LtiSystem {
 public:
  const MatrixXd& A() const { return a_; }
  const MatrixXd& B() const { return b_; }
  const MatrixXd& H() const { return h_; }
  int n() const { return static_cast<int>(a_.rows()); }
  int p() const { return static_cast<int>(b_.cols()); }
  int r() const { return static_cast<int>(h_.cols()); }
  // max(||A||_2, ||B||_2, ||H||_2)
  double M() const { return m_; }

  // [H B], the combined excitation map.
  MatrixXd excitation() const { return hstack(h_, b_); }

 private:
  LtiSystem(MatrixXd a, MatrixXd b, MatrixXd h, double m)
      : a_(std::move(a)), b_(std::move(b)), h_(std::move(h)), m_(m) {}
  friend LtiSystem make_system(const MatrixXd&, const MatrixXd&, const MatrixXd&, double);

  MatrixXd a_;
  MatrixXd b_;
  MatrixXd h_;
  double m_;
};

// Validates dimensions, rho(A) <= 1 + kSpectralRadiusTol and full column rank
// of B and H (singular values > rank_tol * max(1, ||.||_2)).
// Throws DimensionError, ExplosiveSystemError or RankDeficientError.
LtiSystem make_system(const MatrixXd& a, const MatrixXd& b, const MatrixXd& h,
                      double rank_tol = kDefaultRankTol);

// Per-coordinate standard deviations of the white-noise input u_k and of the
// process noise w_k.
struct NoiseSpec {
  double input_std = 1.0;
  double noise_std = 1.0;

  static NoiseSpec from_variances(double input_var, double noise_var);
  void validate() const;
};

// One rollout: states holds x_0..x_N as columns (n x (N+1)), inputs holds
// u_0..u_{N-1} (p x N). x_0 = 0.
struct Trajectory {
  MatrixXd states;
  MatrixXd inputs;
  std::uint64_t seed = 0;

  int horizon() const { return static_cast<int>(inputs.cols()); }
  int n() const { return static_cast<int>(states.rows()); }
  int p() const { return static_cast<int>(inputs.rows()); }
};

// Draw order per step k: the p input coordinates of u_k, then the r
// coordinates of w_k, all from one GaussianStream(seed).
Trajectory simulate(const LtiSystem& sys, int horizon, const NoiseSpec& noise,
                    std::uint64_t seed);

// CSV with header t,x1..xn,u1..up and one row per step t = 0..N; the input
// fields of the last row are empty. Values use 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& is, const std::string& source = "<trajectory>");

}  // namespace sysid
