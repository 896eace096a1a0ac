#pragma once

#include <map>
#include <string>
#include <utility>

#include "sysid/lti.hpp"

namespace sysid {

// Benchmark systems used by the experiments and the minimax constructions.

// A = 0.5 J_n(1), B = H = e_n.
LtiSystem zoo_scaled_jordan(int n);

// A = rho (I + N) with N the upper shift, H = [e_1, rho e_n], no input.
// 0 < rho < 1/2.
LtiSystem zoo_hard_chain(int n, double rho);

// The perturbed n-th order integrator: A = rho (I + N), H = rho e_n.
// Accepts 0 < rho <= 1 (rho = 1 is still non-explosive).
std::pair<MatrixXd, MatrixXd> zoo_perturbed_integrator(int n, double rho);

// Two 3-state systems differing by 2 eps in A(1,2); A(2,3) = beta, H = [e_1 e_3].
std::pair<LtiSystem, LtiSystem> zoo_theorem2_triple(double beta, double eps);

// zoo_hard_chain(n, rho) and the same chain with A(1,2) raised by 2 eps.
std::pair<LtiSystem, LtiSystem> zoo_theorem3_pair(int n, double rho, double eps);

// A = diag(rho J_L(1), I_{n-L}) with L = floor(n/m),
// H = [e_1, rho e_L, e_{L+1}, ..., e_n]. No input.
LtiSystem zoo_padded_chain(int n, int m, double rho);

enum class BPattern { kLast, kHalf, kEveryOther };

BPattern parse_b_pattern(const std::string& s);
std::string to_string(BPattern p);

// A = J_n(lambda), H = h_scale e_n, and B = b_scale times
//   last:        e_n
//   half:        [e_n, e_ceil(n/2)]
//   every_other: [e_n, e_{n-2}, e_{n-4}, ...]
LtiSystem zoo_jordan_actuated(int n, double lambda, double h_scale, double b_scale,
                              BPattern pattern);

// A zoo family plus its parameters, e.g. "hard_chain:n=5,rho=0.25".
struct SystemSpec {
  std::string family;
  std::map<std::string, std::string> params;

  static SystemSpec parse(const std::string& text);
  std::string str() const;
};

// Builds the system named by `spec`. The perturbed integrator yields a
// system with H as given and no input. Throws DomainError on unknown
// families or missing/extra parameters.
LtiSystem build_system(const SystemSpec& spec);

}  // namespace sysid
