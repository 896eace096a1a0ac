#include <gtest/gtest.h>

#include <sstream>

#include "gen.hpp"
#include "sysid/ctrb.hpp"
#include "sysid/errors.hpp"
#include "sysid/lti.hpp"
#include "sysid/rng.hpp"
#include "sysid/zoo.hpp"

using namespace sysid;

namespace {

MatrixXd empirical_covariance(const std::vector<VectorXd>& xs) {
  const int n = static_cast<int>(xs.front().size());
  MatrixXd c = MatrixXd::Zero(n, n);
  for (const auto& x : xs) c += x * x.transpose();
  return c / static_cast<double>(xs.size());
}

}  // namespace

// Frozen against the pure-Python reimplementation in tests/oracles.
TEST(Rng, EngineMatchesStandardCheckValue) {
  std::mt19937_64 e;
  e.discard(9999);
  EXPECT_EQ(e(), 9981545732273789042ULL);
}

TEST(Rng, SeedDerivationIsFrozen) {
  EXPECT_EQ(mix64(0), 16294208416658607535ULL);
  EXPECT_EQ(derive_seed(7, 5, 11, 0), 17935752828095695935ULL);
  EXPECT_EQ(derive_seed(2024, 13, 999, 42), 11037092284380942711ULL);
}

TEST(Rng, GaussianStreamIsFrozen) {
  GaussianStream g(42);
  EXPECT_DOUBLE_EQ(g.next(), -1.0771745442782885);
  EXPECT_DOUBLE_EQ(g.next(), -1.2860634502166481);
  EXPECT_DOUBLE_EQ(g.next(), 1.0945198485006107);
  EXPECT_DOUBLE_EQ(g.next(), 1.2616856516484893);
}

TEST(Rng, GaussianMoments) {
  GaussianStream g(1);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double v = g.next();
    s += v;
    s2 += v * v;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

TEST(MakeSystem, IdentityCase) {
  const LtiSystem s = make_system(0.5 * MatrixXd::Identity(2, 2), MatrixXd::Identity(2, 2),
                                  MatrixXd::Identity(2, 2));
  EXPECT_DOUBLE_EQ(s.M(), 1.0);
  EXPECT_EQ(s.n(), 2);
  EXPECT_EQ(s.p(), 2);
  EXPECT_EQ(s.r(), 2);
}

TEST(MakeSystem, MarginallyStableJordanAccepted) {
  const LtiSystem s = make_system(jordan_block(2, 1.0), unit_column(2, 2), unit_column(2, 2));
  EXPECT_NEAR(s.M(), (1 + std::sqrt(5.0)) / 2, 1e-12);
}

TEST(MakeSystem, LargeJordanAtOneAccepted) {
  EXPECT_NO_THROW(make_system(jordan_block(13, 1.0), unit_column(13, 13), unit_column(13, 13)));
}

TEST(MakeSystem, Errors) {
  const MatrixXd i2 = MatrixXd::Identity(2, 2);
  EXPECT_THROW(make_system(1.5 * i2, i2, i2), ExplosiveSystemError);
  EXPECT_THROW(make_system(MatrixXd::Zero(2, 3), i2, i2), DimensionError);
  EXPECT_THROW(make_system(i2, MatrixXd::Zero(3, 1), i2), DimensionError);
  EXPECT_THROW(make_system(i2, MatrixXd::Ones(2, 2), i2), RankDeficientError);
  EXPECT_THROW(make_system(i2, i2, MatrixXd::Zero(2, 1)), RankDeficientError);
  EXPECT_THROW(make_system(i2, i2, MatrixXd::Identity(2, 3)), RankDeficientError);
  try {
    make_system(1.5 * i2, i2, i2);
  } catch (const ExplosiveSystemError& e) {
    EXPECT_NE(std::string(e.what()).find("explosive spectral radius"), std::string::npos);
  }
}

TEST(Noise, FromVariances) {
  const NoiseSpec n = NoiseSpec::from_variances(10.0, 0.5);
  EXPECT_DOUBLE_EQ(n.input_std, std::sqrt(10.0));
  EXPECT_DOUBLE_EQ(n.noise_std, std::sqrt(0.5));
  EXPECT_THROW(NoiseSpec::from_variances(-1.0, 1.0), DomainError);
  EXPECT_THROW((NoiseSpec{1.0, std::nan("")}.validate()), DomainError);
}

TEST(Simulate, ZeroForcingGivesZeroStates) {
  const LtiSystem s = zoo_scaled_jordan(4);
  const Trajectory t = simulate(s, 50, NoiseSpec{0.0, 0.0}, 3);
  EXPECT_EQ(t.states.cols(), 51);
  EXPECT_EQ(t.inputs.cols(), 50);
  EXPECT_EQ(t.states.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Simulate, DeterministicInSeed) {
  const LtiSystem s = zoo_jordan_actuated(5, 0.5, 0.1, 5, BPattern::kHalf);
  const Trajectory a = simulate(s, 100, NoiseSpec{}, 11);
  const Trajectory b = simulate(s, 100, NoiseSpec{}, 11);
  const Trajectory c = simulate(s, 100, NoiseSpec{}, 12);
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.inputs, b.inputs);
  EXPECT_NE(a.states, c.states);
  EXPECT_TRUE(a.states.col(0).isZero(0.0));
}

TEST(Simulate, RejectsEmptyHorizon) {
  EXPECT_THROW(simulate(zoo_scaled_jordan(2), 0, NoiseSpec{}, 1), DomainError);
}

TEST(Simulate, LinearInNoiseScale) {
  const LtiSystem s = zoo_jordan_actuated(4, 0.7, 0.1, 5, BPattern::kLast);
  const Trajectory a = simulate(s, 30, NoiseSpec{1.0, 0.5}, 9);
  const Trajectory b = simulate(s, 30, NoiseSpec{3.0, 1.5}, 9);
  EXPECT_LE((b.states - 3.0 * a.states).norm(), 1e-12 * b.states.norm());
}

TEST(Simulate, NoInputChannel) {
  const LtiSystem s = zoo_hard_chain(4, 0.25);
  const Trajectory t = simulate(s, 10, NoiseSpec{}, 1);
  EXPECT_EQ(t.p(), 0);
  EXPECT_GT(t.states.norm(), 0.0);
}

TEST(Simulate, WhiteNoiseCovarianceLargeN) {
  const MatrixXd i2 = MatrixXd::Identity(2, 2);
  const LtiSystem s = make_system(MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 0), i2);
  const Trajectory t = simulate(s, 10000, NoiseSpec{0.0, 1.0}, 5);
  const MatrixXd x = t.states.rightCols(10000);
  const MatrixXd cov = x * x.transpose() / 10000.0;
  EXPECT_LE((cov - i2).norm() / i2.norm(), 0.05);
}

// Across seeds, x_k has covariance sigma_w^2 Gamma_k(A, H) when B = 0.
TEST(Simulate, StateCovarianceMatchesGramian) {
  const LtiSystem s = zoo_hard_chain(4, 0.4);
  const double sw = 0.7;
  const int k = 6;
  std::vector<VectorXd> xs;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    xs.push_back(simulate(s, k, NoiseSpec{0.0, sw}, seed).states.col(k));
  }
  const MatrixXd expect = sw * sw * gramian(s.A(), s.H(), k);
  EXPECT_LE((empirical_covariance(xs) - expect).norm() / expect.norm(), 0.10);
}

TEST(TrajectoryCsv, RoundTripIsExact) {
  const LtiSystem s = zoo_jordan_actuated(3, 0.6, 0.1, 5, BPattern::kHalf);
  const Trajectory t = simulate(s, 20, NoiseSpec{}, 4);
  std::stringstream ss;
  write_trajectory_csv(ss, t);
  std::string header;
  std::getline(std::stringstream(ss.str()), header);
  EXPECT_EQ(header, "t,x1,x2,x3,u1,u2");
  const Trajectory back = read_trajectory_csv(ss);
  EXPECT_EQ(back.states, t.states);
  EXPECT_EQ(back.inputs, t.inputs);
}

TEST(TrajectoryCsv, NoInputsRoundTrip) {
  const Trajectory t = simulate(zoo_hard_chain(3, 0.25), 5, NoiseSpec{}, 4);
  std::stringstream ss;
  write_trajectory_csv(ss, t);
  const Trajectory back = read_trajectory_csv(ss);
  EXPECT_EQ(back.states, t.states);
  EXPECT_EQ(back.p(), 0);
}

TEST(TrajectoryCsv, MalformedInputReportsLocation) {
  std::stringstream ss("t,x1,u1\n0,0,1\n1,abc,\n");
  try {
    read_trajectory_csv(ss, "traj.csv");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 2);
  }
  std::stringstream bad_header("t,y1\n");
  EXPECT_THROW(read_trajectory_csv(bad_header), ParseError);
}

TEST(Zoo, ScaledJordan) {
  const LtiSystem s = zoo_scaled_jordan(3);
  MatrixXd a(3, 3);
  a << .5, .5, 0, 0, .5, .5, 0, 0, .5;
  EXPECT_EQ(s.A(), a);
  EXPECT_EQ(s.B(), unit_column(3, 3));
  EXPECT_EQ(s.H(), unit_column(3, 3));
  EXPECT_NEAR(spectral_radius(s.A()), 0.5, 1e-12);
  EXPECT_EQ(zoo_scaled_jordan(2).A(), (MatrixXd(2, 2) << .5, .5, 0, .5).finished());
  EXPECT_THROW(zoo_scaled_jordan(1), DomainError);
}

TEST(Zoo, HardChain) {
  const LtiSystem s = zoo_hard_chain(3, 0.25);
  MatrixXd a(3, 3);
  a << .25, .25, 0, 0, .25, .25, 0, 0, .25;
  MatrixXd h(3, 2);
  h << 1, 0, 0, 0, 0, .25;
  EXPECT_EQ(s.A(), a);
  EXPECT_EQ(s.H(), h);
  EXPECT_EQ(s.p(), 0);
  EXPECT_THROW(zoo_hard_chain(3, 0.5), DomainError);
  EXPECT_THROW(zoo_hard_chain(3, 0.0), DomainError);
}

TEST(Zoo, HardChainIndexIsNMinusOne) {
  for (int n = 2; n <= 10; ++n) {
    const LtiSystem s = zoo_hard_chain(n, 0.25);
    EXPECT_EQ(controllability_index(s.A(), s.H()), std::max(1, n - 1)) << "n=" << n;
  }
}

TEST(Zoo, PerturbedIntegrator) {
  auto [a, h] = zoo_perturbed_integrator(2, 0.5);
  EXPECT_EQ(a, (MatrixXd(2, 2) << .5, .5, 0, .5).finished());
  EXPECT_EQ(h, (MatrixXd(2, 1) << 0, .5).finished());
  auto [a1, h1] = zoo_perturbed_integrator(1, 0.3);
  EXPECT_DOUBLE_EQ(a1(0, 0), 0.3);
  EXPECT_DOUBLE_EQ(h1(0, 0), 0.3);
  EXPECT_THROW(zoo_perturbed_integrator(3, 1.5), DomainError);
}

TEST(Zoo, Theorem2Triple) {
  auto [s1, s2] = zoo_theorem2_triple(0.1, 0.05);
  MatrixXd a2 = MatrixXd::Zero(3, 3);
  a2(0, 1) = 0.1;
  a2(1, 2) = 0.1;
  EXPECT_EQ(s2.A(), a2);
  EXPECT_DOUBLE_EQ(spectral_norm(s1.A() - s2.A()), 0.1);
  for (const LtiSystem* s : {&s1, &s2}) {
    EXPECT_EQ(rank_above(controllability_matrix(s->A(), s->H(), 3), 1e-10), 3);
  }
  EXPECT_THROW(zoo_theorem2_triple(0.0, 0.05), DomainError);
}

TEST(Zoo, PaddedChain) {
  const LtiSystem s = zoo_padded_chain(6, 2, 0.25);
  EXPECT_EQ(s.r(), 5);
  EXPECT_EQ(s.A().topLeftCorner(3, 3), 0.25 * jordan_block(3, 1.0));
  EXPECT_EQ(s.A().bottomRightCorner(3, 3), MatrixXd::Identity(3, 3));
  // Oracle: rank(C_1) = 5, rank(C_2) = 6.
  EXPECT_EQ(controllability_index(s.A(), s.H()), 2);
  const LtiSystem full = zoo_padded_chain(5, 1, 0.25);
  EXPECT_EQ(full.A(), zoo_hard_chain(5, 0.25).A());
  EXPECT_EQ(full.H(), zoo_hard_chain(5, 0.25).H());
  EXPECT_THROW(zoo_padded_chain(2, 3, 0.25), DomainError);
}

TEST(Zoo, JordanActuatedPatterns) {
  const LtiSystem every = zoo_jordan_actuated(6, 0.5, 0.1, 5, BPattern::kEveryOther);
  ASSERT_EQ(every.p(), 3);
  EXPECT_DOUBLE_EQ(every.B()(5, 0), 5.0);
  EXPECT_DOUBLE_EQ(every.B()(3, 1), 5.0);
  EXPECT_DOUBLE_EQ(every.B()(1, 2), 5.0);
  EXPECT_EQ(controllability_index(every.A(), every.excitation()), 2);
  const LtiSystem half = zoo_jordan_actuated(6, 0.5, 0.1, 5, BPattern::kHalf);
  EXPECT_EQ(controllability_index(half.A(), half.excitation()), 3);
  const LtiSystem last = zoo_jordan_actuated(6, 0.5, 0.1, 5, BPattern::kLast);
  EXPECT_EQ(controllability_index(last.A(), last.excitation()), 6);
  EXPECT_THROW(zoo_jordan_actuated(6, 1.2, 0.1, 5, BPattern::kLast), DomainError);
  EXPECT_THROW(parse_b_pattern("diagonal"), DomainError);
}

TEST(Zoo, KappaOfPatternsAcrossDimensions) {
  for (int n = 4; n <= 15; ++n) {
    auto kappa = [n](BPattern p) {
      const LtiSystem s = zoo_jordan_actuated(n, 0.5, 0.1, 5, p);
      return controllability_index(s.A(), s.excitation());
    };
    EXPECT_EQ(kappa(BPattern::kLast), n);
    EXPECT_EQ(kappa(BPattern::kHalf), (n + 1) / 2);
    EXPECT_EQ(kappa(BPattern::kEveryOther), 2);
  }
}

// Every constructor output passes make_system validation.
TEST(Zoo, PropertyConstructorsValidate) {
  gen::Gen g(77);
  for (int i = 0; i < 200; ++i) {
    const int n = g.integer(2, 12);
    const double rho = g.uniform(0.01, 0.49);
    EXPECT_NO_THROW(zoo_hard_chain(n, rho));
    EXPECT_NO_THROW(zoo_padded_chain(n, g.integer(1, n), rho));
    EXPECT_NO_THROW(zoo_jordan_actuated(n, g.uniform(0.05, 1.0), 0.1, 5,
                                        static_cast<BPattern>(g.integer(0, 2))));
    EXPECT_NO_THROW(zoo_scaled_jordan(n));
    EXPECT_NO_THROW(zoo_theorem3_pair(n, rho, g.uniform(0.01, 0.2)));
  }
}

TEST(SystemSpec, ParseAndBuild) {
  const SystemSpec spec = SystemSpec::parse("hard_chain:n=5, rho=0.25");
  EXPECT_EQ(spec.family, "hard_chain");
  EXPECT_EQ(spec.params.at("rho"), "0.25");
  EXPECT_EQ(build_system(spec).A(), zoo_hard_chain(5, 0.25).A());
  EXPECT_EQ(SystemSpec::parse(spec.str()).params, spec.params);
  EXPECT_EQ(build_system(SystemSpec::parse("theorem2:beta=0.3,eps=0.05,which=2")).A()(0, 1), 0.1);
  EXPECT_THROW(build_system(SystemSpec::parse("hard_chain:n=5")), DomainError);
  EXPECT_THROW(build_system(SystemSpec::parse("hard_chain:n=5,rho=0.25,q=1")), DomainError);
  EXPECT_THROW(build_system(SystemSpec::parse("nope:n=3")), DomainError);
  EXPECT_THROW(SystemSpec::parse("scaled_jordan:n"), DomainError);
}
