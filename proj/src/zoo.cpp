#include "sysid/zoo.hpp"

#include <cmath>
#include <set>

#include "sysid/errors.hpp"
#include "sysid/text.hpp"

namespace sysid {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

MatrixXd no_input(int n) { return MatrixXd::Zero(n, 0); }

MatrixXd chain(int n, double rho) { return rho * jordan_block(n, 1.0); }

}  // namespace

LtiSystem zoo_scaled_jordan(int n) {
  require(n >= 2, "scaled_jordan: n must be >= 2");
  return make_system(0.5 * jordan_block(n, 1.0), unit_column(n, n), unit_column(n, n));
}

LtiSystem zoo_hard_chain(int n, double rho) {
  require(n >= 2, "hard_chain: n must be >= 2");
  require(rho > 0.0 && rho < 0.5, "hard_chain: rho must lie in (0, 1/2)");
  return make_system(chain(n, rho), no_input(n),
                     hstack(unit_column(n, 1), rho * unit_column(n, n)));
}

std::pair<MatrixXd, MatrixXd> zoo_perturbed_integrator(int n, double rho) {
  require(n >= 1, "perturbed_integrator: n must be >= 1");
  require(rho > 0.0 && rho <= 1.0, "perturbed_integrator: rho must lie in (0, 1]");
  return {chain(n, rho), rho * unit_column(n, n)};
}

std::pair<LtiSystem, LtiSystem> zoo_theorem2_triple(double beta, double eps) {
  require(beta != 0.0 && std::isfinite(beta), "theorem2: beta must be nonzero");
  require(eps > 0.0, "theorem2: eps must be positive");
  MatrixXd a1 = MatrixXd::Zero(3, 3);
  a1(1, 2) = beta;
  MatrixXd a2 = a1;
  a2(0, 1) = 2.0 * eps;
  const MatrixXd h = hstack(unit_column(3, 1), unit_column(3, 3));
  return {make_system(a1, no_input(3), h), make_system(a2, no_input(3), h)};
}

std::pair<LtiSystem, LtiSystem> zoo_theorem3_pair(int n, double rho, double eps) {
  require(eps > 0.0, "theorem3: eps must be positive");
  LtiSystem s1 = zoo_hard_chain(n, rho);
  MatrixXd a2 = s1.A();
  a2(0, 1) += 2.0 * eps;
  return {s1, make_system(a2, s1.B(), s1.H())};
}

LtiSystem zoo_padded_chain(int n, int m, double rho) {
  require(m >= 1 && n >= m, "padded_chain: need n >= m >= 1");
  require(rho > 0.0 && rho <= 1.0, "padded_chain: rho must lie in (0, 1]");
  const int len = n / m;
  MatrixXd a = MatrixXd::Identity(n, n);
  a.topLeftCorner(len, len) = chain(len, rho);
  MatrixXd h = MatrixXd::Zero(n, 2 + (n - len));
  h(0, 0) = 1.0;
  h(len - 1, 1) = rho;
  for (int i = len; i < n; ++i) h(i, 2 + i - len) = 1.0;
  if (len == 1) {
    // e_1 and rho e_L coincide; keep H full column rank.
    MatrixXd trimmed(n, h.cols() - 1);
    trimmed << h.col(0), h.rightCols(h.cols() - 2);
    h = trimmed;
  }
  return make_system(a, no_input(n), h);
}

BPattern parse_b_pattern(const std::string& s) {
  if (s == "last") return BPattern::kLast;
  if (s == "half") return BPattern::kHalf;
  if (s == "every_other") return BPattern::kEveryOther;
  throw DomainError("unknown b_pattern '" + s + "' (expected last, half or every_other)");
}

std::string to_string(BPattern p) {
  switch (p) {
    case BPattern::kLast: return "last";
    case BPattern::kHalf: return "half";
    case BPattern::kEveryOther: return "every_other";
  }
  return "?";
}

LtiSystem zoo_jordan_actuated(int n, double lambda, double h_scale, double b_scale,
                              BPattern pattern) {
  require(n >= 2, "jordan_actuated: n must be >= 2");
  require(lambda > 0.0 && lambda <= 1.0, "jordan_actuated: lambda must lie in (0, 1]");
  require(h_scale != 0.0 && b_scale != 0.0, "jordan_actuated: scales must be nonzero");
  std::vector<int> cols{n};
  if (pattern == BPattern::kHalf) {
    const int mid = (n + 1) / 2;
    if (mid != n) cols.push_back(mid);
  } else if (pattern == BPattern::kEveryOther) {
    for (int i = n - 2; i >= 1; i -= 2) cols.push_back(i);
  }
  MatrixXd b = MatrixXd::Zero(n, static_cast<int>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) b(cols[j] - 1, j) = b_scale;
  return make_system(jordan_block(n, lambda), b, h_scale * unit_column(n, n));
}

SystemSpec SystemSpec::parse(const std::string& text) {
  SystemSpec spec;
  const auto colon = text.find(':');
  spec.family = std::string(trim(text.substr(0, colon)));
  if (spec.family.empty()) throw DomainError("system spec: missing family name");
  if (colon == std::string::npos) return spec;
  for (const auto& item : split(text.substr(colon + 1), ',')) {
    if (trim(item).empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw DomainError("system spec: expected key=value, got '" + item + "'");
    }
    std::string key(trim(std::string_view(item).substr(0, eq)));
    std::string value(trim(std::string_view(item).substr(eq + 1)));
    if (!spec.params.emplace(key, value).second) {
      throw DomainError("system spec: duplicate key '" + key + "'");
    }
  }
  return spec;
}

std::string SystemSpec::str() const {
  std::string out = family;
  char sep = ':';
  for (const auto& [k, v] : params) {
    out += sep;
    out += k + "=" + v;
    sep = ',';
  }
  return out;
}

namespace {

class ParamReader {
 public:
  explicit ParamReader(const SystemSpec& spec) : spec_(spec) {}

  double real(const std::string& key) {
    double v = 0.0;
    if (!parse_double(raw(key), v)) throw DomainError(where(key) + " is not a number");
    return v;
  }
  double real(const std::string& key, double fallback) {
    return spec_.params.count(key) ? real(key) : fallback;
  }
  int integer(const std::string& key) {
    long long v = 0;
    if (!parse_int(raw(key), v)) throw DomainError(where(key) + " is not an integer");
    return static_cast<int>(v);
  }
  std::string text(const std::string& key, const std::string& fallback) {
    return spec_.params.count(key) ? raw(key) : fallback;
  }

  void finish() const {
    for (const auto& [k, v] : spec_.params) {
      if (!used_.count(k)) throw DomainError(where(k) + " is not a parameter of this family");
    }
  }

 private:
  std::string raw(const std::string& key) {
    auto it = spec_.params.find(key);
    if (it == spec_.params.end()) throw DomainError(where(key) + " is required");
    used_.insert(key);
    return it->second;
  }
  std::string where(const std::string& key) const {
    return "system spec '" + spec_.family + "': " + key;
  }

  const SystemSpec& spec_;
  std::set<std::string> used_;
};

LtiSystem pick(std::pair<LtiSystem, LtiSystem> pair, int which) {
  if (which == 1) return pair.first;
  if (which == 2) return pair.second;
  throw DomainError("system spec: which must be 1 or 2");
}

}  // namespace

LtiSystem build_system(const SystemSpec& spec) {
  ParamReader p(spec);
  const std::string& f = spec.family;
  auto done = [&p](LtiSystem s) {
    p.finish();
    return s;
  };
  if (f == "scaled_jordan") return done(zoo_scaled_jordan(p.integer("n")));
  if (f == "hard_chain") return done(zoo_hard_chain(p.integer("n"), p.real("rho")));
  if (f == "perturbed_integrator") {
    const int n = p.integer("n");
    auto [a, h] = zoo_perturbed_integrator(n, p.real("rho"));
    return done(make_system(a, MatrixXd::Zero(n, 0), h));
  }
  if (f == "padded_chain") {
    const int n = p.integer("n");
    const int m = p.integer("m");
    return done(zoo_padded_chain(n, m, p.real("rho")));
  }
  if (f == "jordan_actuated") {
    const int n = p.integer("n");
    const double lambda = p.real("lambda");
    const double h_scale = p.real("h_scale", 0.1);
    const double b_scale = p.real("b_scale", 5.0);
    const BPattern pattern = parse_b_pattern(p.text("b_pattern", "last"));
    return done(zoo_jordan_actuated(n, lambda, h_scale, b_scale, pattern));
  }
  if (f == "theorem2") {
    const double beta = p.real("beta");
    const double eps = p.real("eps");
    const int which = static_cast<int>(p.real("which", 1));
    return done(pick(zoo_theorem2_triple(beta, eps), which));
  }
  if (f == "theorem3") {
    const int n = p.integer("n");
    const double rho = p.real("rho", 0.25);
    const double eps = p.real("eps");
    const int which = static_cast<int>(p.real("which", 1));
    return done(pick(zoo_theorem3_pair(n, rho, eps), which));
  }
  throw DomainError("unknown system family '" + f +
                    "' (expected scaled_jordan, hard_chain, perturbed_integrator, padded_chain, "
                    "jordan_actuated, theorem2 or theorem3)");
}

}  // namespace sysid
