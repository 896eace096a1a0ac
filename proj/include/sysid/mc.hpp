#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sysid/ident.hpp"
#include "sysid/lti.hpp"
#include "sysid/zoo.hpp"

namespace sysid {

inline constexpr double kIllConditionedGram = 1e12;

struct ExperimentConfig {
  // Zoo family and its parameters except n, which comes from n_range.
  SystemSpec system{"scaled_jordan", {}};
  NoiseSpec noise;
  double eps = 0.1;
  int trials = 1000;
  std::uint64_t master_seed = 0;
  double ridge = kDefaultRidge;
  long long N_max = 100000;
  std::vector<int> n_range;
  int threads = 1;

  // Output labels. Presets fill these; custom runs derive them.
  std::string preset = "custom";
  std::string kappa_label;
  std::optional<double> lambda;

  void validate() const;
};

// Flat key=value text; '#' starts a comment. Keys: system, lambda, rho,
// h_scale, b_scale, b_pattern, m, input_std, noise_std, input_var, noise_var,
// eps, trials, master_seed, ridge, N_max, n_range ("5..10" or "5,7,9"),
// threads. Unknown or repeated keys are ParseErrors.
ExperimentConfig parse_config(std::istream& is, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

struct ErrorStats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
  double q90 = 0.0;  // 0.9 quantile, linear interpolation between order statistics
  double max_gram_cond = 0.0;
  int trials = 0;
};

// Runs cfg.trials independent simulate -> least_squares -> spectral error
// pipelines, trial i seeded with derive_seed(master_seed, n, N, i). Results
// are reduced in trial order, so they do not depend on cfg.threads.
ErrorStats mean_error(const LtiSystem& sys, long long N, const ExperimentConfig& cfg);

struct Probe {
  long long N;
  ErrorStats stats;
};

struct SearchResult {
  std::optional<long long> N_min;  // empty: exceeds N_max
  ErrorStats at_min;               // valid when N_min is set
  std::optional<long long> N_fail; // largest failing probe (N_min - 1 once bisected)
  ErrorStats at_fail;
  std::vector<Probe> probes;
  // Gram condition above 1e12 at the reported probe (N_min, or the
  // final failing probe when the search runs out).
  bool ill_conditioned = false;
};

// Smallest N with mean error <= eps: doubling from n+1 until a probe passes
// (the last probe is clamped to N_max), then bisection down to one sample.
SearchResult min_samples(const LtiSystem& sys, const ExperimentConfig& cfg);

struct CurveRow {
  std::string preset;
  int n = 0;
  std::string kappa_label;
  std::optional<double> lambda;
  double eps = 0.0;
  std::optional<int> kappa;
  int trials = 0;
  std::uint64_t master_seed = 0;
  SearchResult search;
};

using ComplexityCurve = std::vector<CurveRow>;

enum class Preset { kFig1, kFig2, kFig3, kCustom };

Preset parse_preset(const std::string& s);

// Restrictions and overrides applied on top of a preset's defaults.
struct PresetOptions {
  std::vector<double> eps;         // fig1 accuracy targets
  std::vector<double> lambdas;     // fig2 Jordan eigenvalues
  std::vector<BPattern> patterns;  // fig3 input patterns
  std::optional<NoiseSpec> noise;
  std::vector<int> n_range;
};

// Expands a figure preset into one config per sub-setting; `base` supplies
// trials, seed, ridge, N_max and threads. kCustom returns {base}.
std::vector<ExperimentConfig> preset_configs(Preset preset, const ExperimentConfig& base,
                                             const PresetOptions& options = {});

ComplexityCurve run_experiment(const ExperimentConfig& cfg);
ComplexityCurve run_experiment(Preset preset, const ExperimentConfig& base,
                               const PresetOptions& options = {});

// Header: preset,n,kappa_label,lambda,epsilon,N_min,mean_error,std_error,
// trials,master_seed, then kappa,N_fail,mean_error_fail,error_q90,
// max_gram_cond,ill_conditioned. Missing values are empty fields.
void write_curve_csv(std::ostream& os, const ComplexityCurve& curve);
std::string curve_csv_header();

}  // namespace sysid
