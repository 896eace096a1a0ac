#include "sysid/lti.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "sysid/errors.hpp"
#include "sysid/rng.hpp"
#include "sysid/text.hpp"

namespace sysid {

namespace {

void check_full_column_rank(const MatrixXd& m, const char* name, double rank_tol) {
  if (m.cols() == 0) return;
  if (m.cols() > m.rows()) {
    throw RankDeficientError(std::string(name) + " has more columns than rows");
  }
  const double scale = std::max(1.0, spectral_norm(m));
  if (rank_above(m, rank_tol * scale) < m.cols()) {
    throw RankDeficientError(std::string(name) + " is rank deficient");
  }
}

}  // namespace

LtiSystem make_system(const MatrixXd& a, const MatrixXd& b, const MatrixXd& h, double rank_tol) {
  if (a.rows() != a.cols()) throw DimensionError("A must be square");
  if (a.rows() == 0) throw DimensionError("A must be non-empty");
  if (b.rows() != a.rows()) throw DimensionError("B must have as many rows as A");
  if (h.rows() != a.rows()) throw DimensionError("H must have as many rows as A");
  if (!a.allFinite() || !b.allFinite() || !h.allFinite()) {
    throw DomainError("system matrices must be finite");
  }

  const double radius = spectral_radius(a);
  if (radius > 1.0 + kSpectralRadiusTol) {
    throw ExplosiveSystemError("explosive spectral radius " + format_double(radius));
  }
  check_full_column_rank(b, "B", rank_tol);
  check_full_column_rank(h, "H", rank_tol);

  const double m = std::max({spectral_norm(a), spectral_norm(b), spectral_norm(h)});
  return LtiSystem(a, b, h, m);
}

NoiseSpec NoiseSpec::from_variances(double input_var, double noise_var) {
  if (!(input_var >= 0.0) || !(noise_var >= 0.0)) {
    throw DomainError("variances must be nonnegative");
  }
  return NoiseSpec{std::sqrt(input_var), std::sqrt(noise_var)};
}

void NoiseSpec::validate() const {
  if (!std::isfinite(input_std) || !std::isfinite(noise_std) || input_std < 0.0 ||
      noise_std < 0.0) {
    throw DomainError("noise standard deviations must be finite and nonnegative");
  }
}

Trajectory simulate(const LtiSystem& sys, int horizon, const NoiseSpec& noise,
                    std::uint64_t seed) {
  if (horizon < 1) throw DomainError("simulate: horizon must be >= 1");
  noise.validate();

  const int n = sys.n();
  const int p = sys.p();
  const int r = sys.r();
  Trajectory traj;
  traj.seed = seed;
  traj.states = MatrixXd::Zero(n, horizon + 1);
  traj.inputs.resize(p, horizon);

  GaussianStream gauss(seed);
  VectorXd w(r);
  for (int k = 0; k < horizon; ++k) {
    for (int i = 0; i < p; ++i) traj.inputs(i, k) = noise.input_std * gauss.next();
    for (int i = 0; i < r; ++i) w(i) = noise.noise_std * gauss.next();
    auto next = traj.states.col(k + 1);
    next.noalias() = sys.A() * traj.states.col(k);
    if (p > 0) next.noalias() += sys.B() * traj.inputs.col(k);
    if (r > 0) next.noalias() += sys.H() * w;
  }
  return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const int n = traj.n();
  const int p = traj.p();
  const int horizon = traj.horizon();
  os << "t";
  for (int i = 1; i <= n; ++i) os << ",x" << i;
  for (int i = 1; i <= p; ++i) os << ",u" << i;
  os << "\n";
  for (int t = 0; t <= horizon; ++t) {
    os << t;
    for (int i = 0; i < n; ++i) os << ',' << format_double(traj.states(i, t));
    for (int i = 0; i < p; ++i) {
      os << ',';
      if (t < horizon) os << format_double(traj.inputs(i, t));
    }
    os << "\n";
  }
}

Trajectory read_trajectory_csv(std::istream& is, const std::string& source) {
  std::string line;
  int lineno = 0;
  if (!std::getline(is, line)) throw ParseError(source, 1, 1, "missing header");
  ++lineno;
  auto header = split(trim(line), ',');
  if (header.empty() || header[0] != "t") throw ParseError(source, 1, 1, "header must start with t");
  int n = 0;
  int p = 0;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string& h = header[c];
    const std::string expect_x = "x" + std::to_string(n + 1);
    const std::string expect_u = "u" + std::to_string(p + 1);
    if (p == 0 && h == expect_x) {
      ++n;
    } else if (h == expect_u) {
      ++p;
    } else {
      throw ParseError(source, 1, static_cast<int>(c) + 1, "unexpected column '" + h + "'");
    }
  }
  if (n == 0) throw ParseError(source, 1, 1, "no state columns");

  std::vector<std::vector<double>> xs;
  std::vector<std::vector<double>> us;
  bool inputs_ended = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split(trim(line), ',');
    if (fields.size() != header.size()) {
      throw ParseError(source, lineno, 1,
                       "expected " + std::to_string(header.size()) + " fields");
    }
    long long t = 0;
    if (!parse_int(fields[0], t) || t != static_cast<long long>(xs.size())) {
      throw ParseError(source, lineno, 1, "time index out of sequence");
    }
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
      if (!parse_double(fields[1 + i], x[i])) {
        throw ParseError(source, lineno, 2 + i, "bad number '" + fields[1 + i] + "'");
      }
    }
    xs.push_back(std::move(x));
    if (p == 0) continue;
    bool empty = true;
    for (int i = 0; i < p; ++i) empty = empty && trim(fields[1 + n + i]).empty();
    if (empty) {
      inputs_ended = true;
      continue;
    }
    if (inputs_ended) throw ParseError(source, lineno, 2 + n, "inputs after the final row");
    std::vector<double> u(p);
    for (int i = 0; i < p; ++i) {
      if (!parse_double(fields[1 + n + i], u[i])) {
        throw ParseError(source, lineno, 2 + n + i, "bad number '" + fields[1 + n + i] + "'");
      }
    }
    us.push_back(std::move(u));
  }
  if (xs.size() < 2) throw ParseError(source, lineno, 1, "need at least two state rows");
  const int horizon = static_cast<int>(xs.size()) - 1;
  if (p > 0 && static_cast<int>(us.size()) != horizon) {
    throw ParseError(source, lineno, 1, "expected one input row fewer than state rows");
  }

  Trajectory traj;
  traj.states.resize(n, horizon + 1);
  traj.inputs.resize(p, horizon);
  for (int t = 0; t <= horizon; ++t) {
    for (int i = 0; i < n; ++i) traj.states(i, t) = xs[t][i];
  }
  for (int t = 0; t < horizon && p > 0; ++t) {
    for (int i = 0; i < p; ++i) traj.inputs(i, t) = us[t][i];
  }
  return traj;
}

}  // namespace sysid
