#include <cmath>

#include "sysid/bounds.hpp"
#include "sysid/errors.hpp"

namespace sysid {

namespace {

struct KlSetup {
  MatrixXd g;      // A1 - A2 = H g
  MatrixXd drive;  // HH' + input_std^2 BB'
};

KlSetup prepare(const LtiSystem& s1, const LtiSystem& s2, double input_std) {
  if (s1.n() != s2.n() || s1.r() != s2.r() || s1.p() != s2.p()) {
    throw DimensionError("kl: systems have different dimensions");
  }
  if (s1.H() != s2.H()) throw KlInapplicableError("kl: systems must share H");
  if (s1.B() != s2.B()) throw KlInapplicableError("kl: systems must share B");
  if (s1.r() == 0) throw KlInapplicableError("kl: no process noise");
  if (!(input_std >= 0.0) || !std::isfinite(input_std)) {
    throw DomainError("kl: input_std must be finite and nonnegative");
  }
  const MatrixXd delta = s1.A() - s2.A();
  const MatrixXd g = s1.H().colPivHouseholderQr().solve(delta);
  const double residual = (s1.H() * g - delta).norm();
  if (residual > 1e-10 * std::max(1.0, delta.norm())) {
    throw KlInapplicableError("KL factorization inapplicable: A1 - A2 is not in the range of H");
  }
  MatrixXd drive = s1.H() * s1.H().transpose();
  if (s1.p() > 0) drive += input_std * input_std * s1.B() * s1.B().transpose();
  return {g, drive};
}

double step_kl(const MatrixXd& g, const MatrixXd& sigma) {
  return 0.5 * (g * sigma * g.transpose()).trace();
}

}  // namespace

KlResult kl_trajectory(const LtiSystem& s1, const LtiSystem& s2, int N, double input_std) {
  if (N < 1) throw DomainError("kl_trajectory: N must be >= 1");
  const KlSetup setup = prepare(s1, s2, input_std);
  KlResult out;
  out.N = N;
  out.per_step.reserve(N);
  MatrixXd sigma = MatrixXd::Zero(s1.n(), s1.n());
  for (int k = 0; k < N; ++k) {
    const double term = std::max(0.0, step_kl(setup.g, sigma));
    out.per_step.push_back(term);
    out.value += term;
    sigma = s1.A() * sigma * s1.A().transpose() + setup.drive;
  }
  return out;
}

std::optional<long long> minimax_required_samples(const LtiSystem& s1, const LtiSystem& s2,
                                                  double delta, long long N_max,
                                                  double input_std) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("minimax: delta must lie in (0, 1)");
  if (N_max < 1) throw DomainError("minimax: N_max must be >= 1");
  const KlSetup setup = prepare(s1, s2, input_std);
  const double threshold = std::log(1.0 / (3.0 * delta));
  if (threshold <= 0.0) return 1;

  MatrixXd sigma = MatrixXd::Zero(s1.n(), s1.n());
  double value = 0.0;
  for (long long n = 1; n <= N_max; ++n) {
    const double term = std::max(0.0, step_kl(setup.g, sigma));
    value += term;
    if (value >= threshold) return n;
    MatrixXd next = s1.A() * sigma * s1.A().transpose() + setup.drive;
    if (next == sigma) {
      // Stationary covariance: every later step adds the same term, so the
      // rest of the sum needs no matrix work.
      const double next_term = std::max(0.0, step_kl(setup.g, sigma));
      if (next_term <= 0.0) return std::nullopt;
      for (++n; n <= N_max; ++n) {
        value += next_term;
        if (value >= threshold) return n;
      }
      return std::nullopt;
    }
    sigma = std::move(next);
  }
  return std::nullopt;
}

}  // namespace sysid
