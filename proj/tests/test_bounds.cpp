#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gen.hpp"
#include "sysid/bounds.hpp"
#include "sysid/ctrb.hpp"
#include "sysid/errors.hpp"
#include "sysid/zoo.hpp"

using namespace sysid;

namespace {

MatrixXd matrix_power(const MatrixXd& a, int k) {
  MatrixXd p = MatrixXd::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) p = p * a;
  return p;
}

}  // namespace

TEST(PowersBound, Examples) {
  EXPECT_DOUBLE_EQ(powers_bound(0.7, 1, 9), 1.0);
  EXPECT_NEAR(powers_bound(2.0, 2, 3), 3 * std::numbers::e * 4, 1e-12);
  EXPECT_NEAR(powers_bound(2.0, 2, 3), 32.6194, 1e-4);
  const MatrixXd j = jordan_block(6, 1.0);
  const double actual = spectral_norm(matrix_power(j, 20));
  EXPECT_NEAR(actual, 17064.544828196867, 1e-6);
  EXPECT_LT(actual, powers_bound(spectral_norm(j), 6, 20));
  EXPECT_THROW(powers_bound(-1.0, 2, 2), DomainError);
}

TEST(GramianUpperBound, Examples) {
  EXPECT_DOUBLE_EQ(gramian_upper_bound(1.0, 1, 5), 5.0);
  const LtiSystem s = zoo_scaled_jordan(4);
  // M = max(||0.5 J_4(1)||, ||e_4||) = max(0.9397, 1) = 1.
  EXPECT_NEAR(spectral_norm(s.A()), 0.9396926207859083, 1e-14);
  const double m = std::max(spectral_norm(s.A()), spectral_norm(s.H()));
  EXPECT_DOUBLE_EQ(m, 1.0);
  const double g10 = spectral_norm(gramian(s.A(), s.H(), 10));
  EXPECT_NEAR(g10, 1.741784056476445, 1e-12);
  EXPECT_LE(g10, gramian_upper_bound(m, 4, 10));
  for (int k = 1; k < 40; ++k) EXPECT_GT(gramian_upper_bound(1.3, 3, k + 1), gramian_upper_bound(1.3, 3, k));
}

TEST(Gramian22DecayBound, Examples) {
  EXPECT_NEAR(gramian22_decay_bound(0.25, 5), std::pow(0.5, 8) / 0.75, 1e-16);
  EXPECT_NEAR(gramian22_decay_bound(0.25, 5), 5.2083e-3, 1e-7);
  for (int n = 2; n < 20; ++n) {
    EXPECT_NEAR(gramian22_decay_bound(0.3, n + 1) / gramian22_decay_bound(0.3, n), 0.36, 1e-12);
  }
  EXPECT_THROW(gramian22_decay_bound(0.5, 4), DomainError);
}

TEST(Gramian22DecayBound, DominatesExactHardChainEntries) {
  // Direct summation oracle values for Gamma_100(2,2), rho = 0.25.
  const double exact[] = {0.000422716049382716,   3.8306355738454504e-05, 3.6558979830310416e-06,
                          3.6100174973327235e-07, 3.6465064655530904e-08, 3.741440501887426e-09,
                          3.8822881966254286e-10};
  for (int n = 4; n <= 10; ++n) {
    const LtiSystem s = zoo_hard_chain(n, 0.25);
    const double g22 = gramian(s.A(), s.H(), 100)(1, 1);
    EXPECT_NEAR(g22, exact[n - 4], 1e-12 * exact[n - 4]);
    EXPECT_LE(g22, gramian22_decay_bound(0.25, n));
  }
}

TEST(IntegratorDistance, ClosedFormAndSandwich) {
  EXPECT_NEAR(integrator_distance_closed_form(1.0, 3).value, 0.707107, 1e-6);
  for (int n = 1; n <= 100; ++n) {
    const IntegratorDistance d = integrator_distance_closed_form(0.8, n);
    EXPECT_LE(d.lower, d.value + 1e-15);
    EXPECT_LE(d.value, d.upper);
  }
}

TEST(IntegratorDistance, MatchesGridSearch) {
  for (int n = 1; n <= 8; ++n) {
    auto [a, h] = zoo_perturbed_integrator(n, 0.6);
    EXPECT_NEAR(distance_to_uncontrollability(a, h).value,
                integrator_distance_closed_form(0.6, n).value, 1e-3)
        << "n=" << n;
  }
}

TEST(ExpHard, Examples) {
  EXPECT_NEAR(exp_hard_lower_bound(10, 0.1, 0.05), std::pow(4.0, 7) / 0.03 * std::log(20.0), 1e-6);
  EXPECT_NEAR(exp_hard_lower_bound(10, 0.1, 0.05) / 1.636e6, 1.0, 1e-3);
  EXPECT_NEAR(exp_hard_lower_bound(3, 0.2, 0.1), std::log(10.0) / (3 * 0.04), 1e-12);
  for (int n = 3; n < 20; ++n) {
    EXPECT_NEAR(exp_hard_lower_bound(n + 1, 0.1, 0.05) / exp_hard_lower_bound(n, 0.1, 0.05), 4.0, 1e-12);
  }
  EXPECT_NEAR(exp_hard_lower_bound(5, 0.1, 0.05, true), 64.0 / 0.06 * std::log(1 / 0.15), 1e-9);
  EXPECT_THROW(exp_hard_lower_bound(5, 0.1, 1.0), DomainError);
  EXPECT_THROW(exp_hard_lower_bound(2, 0.1, 0.5), DomainError);
  EXPECT_THROW(exp_hard_lower_bound(5, 0.1, 0.5, true), DomainError);
}

TEST(Certificate, KappaOne) {
  const BoundCertificate c = sigma_min_certificate(1.0, 0.5, 1);
  EXPECT_NEAR(c.bound, std::sqrt(8.0 + 16.0), 1e-12);
  EXPECT_NEAR(c.bound, 4.899, 1e-3);
  EXPECT_DOUBLE_EQ(c.xi(1, 1), 6.0);
  EXPECT_DOUBLE_EQ(c.alpha1(1), 4.0);
  EXPECT_THROW(sigma_min_certificate(0.0, 0.5, 1), DomainError);
  EXPECT_THROW(sigma_min_certificate(1.0, -0.5, 1), DomainError);
}

TEST(Certificate, PropertyShape) {
  gen::Gen g(17);
  for (int t = 0; t < 200; ++t) {
    const double m = g.uniform(0.1, 3.0);
    const double mu = g.uniform(0.01, 2.0);
    double prev = 0.0;
    for (int k = 1; k <= 8; ++k) {
      const BoundCertificate c = sigma_min_certificate(m, mu, k);
      EXPECT_GE(c.xi.minCoeff(), 0.0);
      EXPECT_GE(c.alpha1.minCoeff(), 0.0);
      EXPECT_GE(c.bound, 1.0 / mu);
      EXPECT_GE(c.bound, prev);
      if (k > 1) EXPECT_LE(c.bound, prev * spectral_norm(c.xi) * (1 + 1e-12));
      prev = c.bound;
    }
  }
}

// Single excitation column: H_1 is the scalar ||h|| and zeroing h is a perturbation, so mu <= ||h||.
TEST(Certificate, PropertyDominatesSingleInput) {
  gen::Gen g(31);
  int checked = 0;
  while (checked < 200) {
    const int n = g.integer(2, 5);
    const MatrixXd a = g.with_radius(n, g.uniform(0.1, 1.0));
    const MatrixXd h = g.gaussian(n, 1);
    const auto kappa = controllability_index(a, h);
    if (!kappa) continue;
    const double mu = distance_to_uncontrollability(a, h).value;
    if (mu < 1e-3) continue;
    ++checked;
    const double m = std::max(spectral_norm(a), spectral_norm(h));
    const double pinv = 1.0 / sigma_min(controllability_matrix(a, h, *kappa));
    EXPECT_LE(pinv, sigma_min_certificate(m, mu, *kappa).bound);
  }
}

// A nearly singular square H leaves the pair far from uncontrollable, so
// sigma_min(H_1) >= mu does not hold and the certificate is exceeded.
TEST(Certificate, SquareNearSingularExcitationExceedsBound) {
  MatrixXd a(2, 2);
  a << 0.0, 0.5, 0.5, 0.0;
  MatrixXd h(2, 2);
  h << 1.0, 0.0, 0.0, 1e-2;
  ASSERT_EQ(controllability_index(a, h), 1);
  const double mu = distance_to_uncontrollability(a, h).value;
  EXPECT_NEAR(mu, 0.5, 1e-3);
  const double pinv = 1.0 / sigma_min(h);
  EXPECT_NEAR(pinv, 100.0, 1e-9);
  EXPECT_GT(pinv, 10 * sigma_min_certificate(1.0, mu, 1).bound);
}

TEST(Kl, IdenticalSystemsGiveZero) {
  const LtiSystem s = zoo_hard_chain(4, 0.25);
  const KlResult r = kl_trajectory(s, s, 50);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.per_step.size(), 50u);
}

// Covariance recursion oracle (numpy): 2 eps^2 beta^2 (N - 2) = 0.0441.
TEST(Kl, Theorem2ExactValue) {
  auto [s1, s2] = zoo_theorem2_triple(0.3, 0.05);
  const KlResult r = kl_trajectory(s1, s2, 100);
  EXPECT_NEAR(r.value, 0.04409999999999995, 1e-12);
  EXPECT_EQ(r.per_step[0], 0.0);
  EXPECT_EQ(r.per_step[1], 0.0);
  for (int k = 2; k < 100; ++k) EXPECT_NEAR(r.per_step[k], 2 * 0.0025 * 0.09, 1e-16);
}

TEST(Kl, PropertyMonotoneAndAdditive) {
  gen::Gen g(23);
  for (int t = 0; t < 50; ++t) {
    const int n = g.integer(3, 8);
    auto [s1, s2] = zoo_theorem3_pair(n, g.uniform(0.05, 0.45), g.uniform(0.01, 0.2));
    const int N = g.integer(1, 80);
    const KlResult r = kl_trajectory(s1, s2, N);
    double sum = 0.0;
    for (double v : r.per_step) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_DOUBLE_EQ(sum, r.value);
    EXPECT_LE(r.value, kl_trajectory(s1, s2, N + 1).value);
  }
}

TEST(Kl, Theorem3PairBelowDecayBound) {
  const double eps = 0.05;
  for (int n = 4; n <= 9; ++n) {
    auto [s1, s2] = zoo_theorem3_pair(n, 0.25, eps);
    for (int N : {10, 100, 1000}) {
      const double kl = kl_trajectory(s1, s2, N).value;
      const double g22 = gramian(s1.A(), s1.H(), N)(1, 1);
      EXPECT_LE(kl, 2 * eps * eps * N * g22 * (1 + 1e-12));
      EXPECT_LE(kl, 2 * eps * eps * N * gramian22_decay_bound(0.25, n));
    }
  }
}

TEST(Kl, RejectsPerturbationOutsideRangeOfH) {
  const LtiSystem s1 = zoo_hard_chain(4, 0.25);
  MatrixXd a2 = s1.A();
  a2(1, 2) += 0.1;
  const LtiSystem s2 = make_system(a2, s1.B(), s1.H());
  EXPECT_THROW(kl_trajectory(s1, s2, 10), KlInapplicableError);
}

// Monte Carlo log-likelihood ratio under S1: with w ~ N(0, I) the per-step
// log ratio is (Gx)'w + 0.5 |Gx|^2.
TEST(Kl, MatchesMonteCarloLikelihoodRatio) {
  auto [s1, s2] = zoo_theorem2_triple(0.3, 0.05);
  const int N = 100;
  const double exact = kl_trajectory(s1, s2, N).value;
  const MatrixXd g = s1.H().colPivHouseholderQr().solve(s1.A() - s2.A());
  double sum = 0.0, sum2 = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    GaussianStream gs(derive_seed(99, 0, 0, t));
    VectorXd x = VectorXd::Zero(3);
    double llr = 0.0;
    for (int k = 0; k < N; ++k) {
      VectorXd w(2);
      w << gs.next(), gs.next();
      const VectorXd gx = g * x;
      llr += gx.dot(w) + 0.5 * gx.squaredNorm();
      x = s1.A() * x + s1.H() * w;
    }
    sum += llr;
    sum2 += llr * llr;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sum2 / trials - mean * mean) / trials);
  EXPECT_LE(std::abs(mean - exact), 3 * se);
}

TEST(Minimax, Theorem2RequiredSamples) {
  auto [s1, s2] = zoo_theorem2_triple(0.3, 0.05);
  EXPECT_EQ(minimax_required_samples(s1, s2, 0.05, 100000), 4218);
  EXPECT_EQ(minimax_required_samples(s1, s2, 0.05, 4217), std::nullopt);
}

TEST(Minimax, VanishingCouplingNeverSuffices) {
  auto [s1, s2] = zoo_theorem2_triple(1e-6, 0.05);
  EXPECT_EQ(minimax_required_samples(s1, s2, 0.05, 10000000), std::nullopt);
}

TEST(Minimax, ThresholdCollapse) {
  auto [s1, s2] = zoo_theorem2_triple(0.3, 0.05);
  // The first transitions carry no information for this pair, so N -> 3.
  EXPECT_EQ(minimax_required_samples(s1, s2, 1.0 / 3.0 - 1e-9, 100), 3);
  EXPECT_EQ(minimax_required_samples(s1, s2, 0.4, 100), 1);
}

TEST(Minimax, AgreesWithKlSweep) {
  gen::Gen g(41);
  for (int t = 0; t < 20; ++t) {
    auto [s1, s2] = zoo_theorem3_pair(g.integer(3, 5), 0.45, g.uniform(0.1, 0.3));
    const double delta = g.uniform(0.01, 0.3);
    const auto n = minimax_required_samples(s1, s2, delta, 5000);
    if (!n) continue;
    const double thr = std::log(1 / (3 * delta));
    EXPECT_GE(kl_trajectory(s1, s2, static_cast<int>(*n)).value, thr);
    if (*n > 1) EXPECT_LT(kl_trajectory(s1, s2, static_cast<int>(*n) - 1).value, thr);
  }
}

TEST(Dominance, PowersBoundRandomized) {
  gen::Gen g(101);
  for (int t = 0; t < 300; ++t) {
    const int n = g.integer(1, 8);
    const MatrixXd a = g.with_radius(n, g.uniform(0.1, 1.0));
    const double m = spectral_norm(a);
    MatrixXd p = MatrixXd::Identity(n, n);
    for (int k = 1; k <= 50; ++k) {
      p = p * a;
      EXPECT_LE(spectral_norm(p), powers_bound(m, n, k));
    }
  }
}
