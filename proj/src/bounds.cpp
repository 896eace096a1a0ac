#include "sysid/bounds.hpp"

#include <cmath>
#include <numbers>

#include "sysid/errors.hpp"

namespace sysid {

namespace {

void check_mnk(double M, int n, int k, const char* name) {
  if (!(M >= 0.0) || n < 1 || k < 1) {
    throw DomainError(std::string(name) + ": need M >= 0, n >= 1, k >= 1");
  }
}

}  // namespace

double powers_bound(double M, int n, int k) {
  check_mnk(M, n, k, "powers_bound");
  return std::pow(std::numbers::e * k, n - 1) * std::max(std::pow(M, n), 1.0);
}

double gramian_upper_bound(double M, int n, int k) {
  check_mnk(M, n, k, "gramian_upper_bound");
  return std::exp(2.0 * n - 2.0) * std::pow(static_cast<double>(k), 2 * n - 1) *
         std::max(std::pow(M, 2 * n), 1.0);
}

double gramian22_decay_bound(double rho, int n) {
  if (!(rho > 0.0 && rho < 0.5)) throw DomainError("gramian22_decay_bound: rho must lie in (0, 1/2)");
  if (n < 2) throw DomainError("gramian22_decay_bound: n must be >= 2");
  return std::pow(2.0 * rho, 2 * n - 2) / (1.0 - 4.0 * rho * rho);
}

IntegratorDistance integrator_distance_closed_form(double rho, int n) {
  if (!(rho > 0.0) || n < 1) throw DomainError("integrator distance: need rho > 0, n >= 1");
  const double np1 = n + 1.0;
  return {rho * std::sin(std::numbers::pi / np1), 2.0 * rho / np1, rho * std::numbers::pi / np1};
}

double exp_hard_lower_bound(int n, double eps, double delta, bool proof_form) {
  if (n < 3) throw DomainError("exp_hard_lower_bound: n must be >= 3");
  if (!(eps > 0.0)) throw DomainError("exp_hard_lower_bound: eps must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("exp_hard_lower_bound: delta must lie in (0, 1)");
  if (proof_form) {
    if (!(delta < 1.0 / 3.0)) throw DomainError("exp_hard_lower_bound: proof form needs delta < 1/3");
    return std::pow(4.0, n - 2) / (6.0 * eps * eps) * std::log(1.0 / (3.0 * delta));
  }
  return std::pow(4.0, n - 3) / (3.0 * eps * eps) * std::log(1.0 / delta);
}

BoundCertificate sigma_min_certificate(double M, double mu, int kappa) {
  if (!(M > 0.0) || !(mu > 0.0)) throw DomainError("certificate: M and mu must be positive");
  if (kappa < 1) throw DomainError("certificate: kappa must be >= 1");
  BoundCertificate c;
  c.M = M;
  c.mu = mu;
  c.kappa = kappa;
  c.xi << 1.0, 1.0, 1.0 / mu,
          M / mu, (2.0 + M) / mu, M / mu,
          0.0, 0.0, 1.0 / mu;
  c.alpha1 << 1.0 / mu, M / (mu * mu), 1.0 / mu;
  Eigen::Matrix3d p = Eigen::Matrix3d::Identity();
  for (int i = 1; i < kappa; ++i) p = p * c.xi;
  c.bound = spectral_norm(p) * c.alpha1.norm();
  return c;
}

}  // namespace sysid
