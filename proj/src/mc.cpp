#include "sysid/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "sysid/ctrb.hpp"
#include "sysid/errors.hpp"
#include "sysid/rng.hpp"
#include "sysid/text.hpp"

namespace sysid {

void ExperimentConfig::validate() const {
  noise.validate();
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (N_max < 1) throw DomainError("N_max must be >= 1");
  if (!(ridge >= 0.0)) throw DomainError("ridge must be >= 0");
  if (threads < 1) throw DomainError("threads must be >= 1");
  for (int n : n_range) {
    if (n < 1) throw DomainError("n_range entries must be positive");
  }
}

namespace {

struct TrialOutcome {
  double error = 0.0;
  double cond = 0.0;
};

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

ErrorStats mean_error(const LtiSystem& sys, long long N, const ExperimentConfig& cfg) {
  if (N < 1) throw DomainError("mean_error: N must be >= 1");
  if (N > std::numeric_limits<int>::max()) throw DomainError("mean_error: N too large");
  cfg.validate();

  const int trials = cfg.trials;
  std::vector<TrialOutcome> out(trials);
  std::atomic<int> next{0};
  std::mutex err_mutex;
  int err_index = trials;
  std::string err_what;
  bool err_regression = false;

  auto worker = [&] {
    for (int i = next.fetch_add(1); i < trials; i = next.fetch_add(1)) {
      const std::uint64_t seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(sys.n()),
                                             static_cast<std::uint64_t>(N),
                                             static_cast<std::uint64_t>(i));
      try {
        const Trajectory traj = simulate(sys, static_cast<int>(N), cfg.noise, seed);
        const Estimate est = least_squares(traj, cfg.ridge);
        out[i] = {estimation_error(est, sys.A()), est.gram_condition};
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (i < err_index) {
          err_index = i;
          err_what = e.what();
          err_regression = dynamic_cast<const RegressionError*>(&e) != nullptr;
        }
      }
    }
  };

  const int workers = std::min(cfg.threads, trials);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (err_index < trials) {
    const std::string msg = "trial " + std::to_string(err_index) + " (n=" + std::to_string(sys.n()) +
                            ", N=" + std::to_string(N) + ") failed: " + err_what;
    if (err_regression) throw RegressionError(msg);
    throw Error(msg);
  }

  ErrorStats s;
  s.trials = trials;
  std::vector<double> errors(trials);
  double sum = 0.0;
  for (int i = 0; i < trials; ++i) {
    errors[i] = out[i].error;
    sum += out[i].error;
    s.max_gram_cond = std::max(s.max_gram_cond, out[i].cond);
  }
  s.mean = sum / trials;
  if (trials > 1) {
    double ss = 0.0;
    for (double e : errors) ss += (e - s.mean) * (e - s.mean);
    s.std = std::sqrt(ss / (trials - 1));
  }
  s.q90 = quantile(errors, 0.9);
  return s;
}

SearchResult min_samples(const LtiSystem& sys, const ExperimentConfig& cfg) {
  cfg.validate();
  SearchResult res;
  auto probe = [&](long long N) {
    ErrorStats st;
    try {
      st = mean_error(sys, N, cfg);
    } catch (const RegressionError&) {
      // Unregularized fit below the identifiable horizon: counts as a failing probe.
      st.trials = cfg.trials;
      st.mean = st.std = st.q90 = st.max_gram_cond = std::numeric_limits<double>::infinity();
    }
    res.probes.push_back({N, st});
    return st;
  };

  // Bracket: lo fails (or is below the first probe), hi passes.
  long long lo = 0;
  ErrorStats lo_stats;
  long long hi = 0;
  ErrorStats hi_stats;
  long long N = std::min<long long>(sys.n() + 1, cfg.N_max);
  while (true) {
    ErrorStats st = probe(N);
    if (st.mean <= cfg.eps) {
      hi = N;
      hi_stats = st;
      break;
    }
    lo = N;
    lo_stats = st;
    if (N >= cfg.N_max) {
      res.N_fail = lo;
      res.at_fail = lo_stats;
      res.ill_conditioned = lo_stats.max_gram_cond > kIllConditionedGram;
      return res;
    }
    N = std::min(2 * N, cfg.N_max);
  }

  const long long first = std::min<long long>(sys.n() + 1, cfg.N_max);
  while (lo >= first && hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    ErrorStats st = probe(mid);
    if (st.mean <= cfg.eps) {
      hi = mid;
      hi_stats = st;
    } else {
      lo = mid;
      lo_stats = st;
    }
  }
  res.N_min = hi;
  res.at_min = hi_stats;
  res.ill_conditioned = hi_stats.max_gram_cond > kIllConditionedGram;
  if (lo >= first) {
    res.N_fail = lo;
    res.at_fail = lo_stats;
  }
  return res;
}

Preset parse_preset(const std::string& s) {
  if (s == "fig1") return Preset::kFig1;
  if (s == "fig2") return Preset::kFig2;
  if (s == "fig3") return Preset::kFig3;
  if (s == "custom") return Preset::kCustom;
  throw DomainError("unknown preset '" + s + "' (expected fig1, fig2, fig3 or custom)");
}

namespace {

std::vector<int> span(int lo, int hi) {
  std::vector<int> v;
  for (int n = lo; n <= hi; ++n) v.push_back(n);
  return v;
}

std::string pattern_label(BPattern p) {
  switch (p) {
    case BPattern::kLast: return "n";
    case BPattern::kHalf: return "ceil(n/2)";
    case BPattern::kEveryOther: return "2";
  }
  return "";
}

ExperimentConfig jordan_config(const ExperimentConfig& base, double lambda, BPattern pattern) {
  ExperimentConfig c = base;
  c.system = SystemSpec{"jordan_actuated",
                        {{"lambda", format_double(lambda)},
                         {"h_scale", "0.1"},
                         {"b_scale", "5"},
                         {"b_pattern", to_string(pattern)}}};
  c.noise = NoiseSpec{1.0, 1.0};
  c.eps = 0.005;
  c.lambda = lambda;
  c.kappa_label = pattern_label(pattern);
  return c;
}

}  // namespace

std::vector<ExperimentConfig> preset_configs(Preset preset, const ExperimentConfig& base,
                                             const PresetOptions& options) {
  std::vector<ExperimentConfig> out;
  auto finish = [&](ExperimentConfig c, std::vector<int> default_range) {
    if (options.noise) c.noise = *options.noise;
    c.n_range = !options.n_range.empty() ? options.n_range : std::move(default_range);
    out.push_back(std::move(c));
  };

  switch (preset) {
    case Preset::kFig1: {
      const std::vector<double> eps =
          options.eps.empty() ? std::vector<double>{0.1, 0.15, 0.2} : options.eps;
      for (double e : eps) {
        ExperimentConfig c = base;
        c.preset = "fig1";
        c.system = SystemSpec{"scaled_jordan", {}};
        c.noise = NoiseSpec::from_variances(10.0, 0.5);
        c.eps = e;
        c.lambda = 0.5;
        c.kappa_label = "n";
        finish(std::move(c), span(5, 12));
      }
      break;
    }
    case Preset::kFig2: {
      const std::vector<double> lambdas =
          options.lambdas.empty() ? std::vector<double>{0.5, 0.6, 0.7, 1.0} : options.lambdas;
      for (double l : lambdas) {
        ExperimentConfig c = jordan_config(base, l, BPattern::kLast);
        c.preset = "fig2";
        if (!options.eps.empty()) c.eps = options.eps.front();
        // Identification at lambda = 1 breaks down numerically beyond n = 9.
        finish(std::move(c), span(5, l >= 1.0 ? 9 : 13));
      }
      break;
    }
    case Preset::kFig3: {
      const std::vector<BPattern> patterns =
          options.patterns.empty()
              ? std::vector<BPattern>{BPattern::kLast, BPattern::kHalf, BPattern::kEveryOther}
              : options.patterns;
      for (BPattern p : patterns) {
        ExperimentConfig c = jordan_config(base, 0.5, p);
        c.preset = "fig3";
        if (!options.eps.empty()) c.eps = options.eps.front();
        finish(std::move(c), span(5, 15));
      }
      break;
    }
    case Preset::kCustom:
      out.push_back(base);
      break;
  }
  return out;
}

ComplexityCurve run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.n_range.empty()) throw DomainError("n_range is empty");
  ComplexityCurve curve;
  for (int n : cfg.n_range) {
    SystemSpec spec = cfg.system;
    spec.params["n"] = std::to_string(n);
    const LtiSystem sys = build_system(spec);

    CurveRow row;
    row.preset = cfg.preset;
    row.n = n;
    row.lambda = cfg.lambda;
    if (!row.lambda && spec.params.count("lambda")) {
      double l = 0.0;
      if (parse_double(spec.params["lambda"], l)) row.lambda = l;
    }
    row.eps = cfg.eps;
    row.kappa = controllability_index(sys.A(), sys.excitation());
    row.kappa_label = cfg.kappa_label;
    if (row.kappa_label.empty()) {
      row.kappa_label = row.kappa ? std::to_string(*row.kappa) : "uncontrollable";
    }
    row.trials = cfg.trials;
    row.master_seed = cfg.master_seed;
    row.search = min_samples(sys, cfg);
    curve.push_back(std::move(row));
  }
  return curve;
}

ComplexityCurve run_experiment(Preset preset, const ExperimentConfig& base,
                               const PresetOptions& options) {
  ComplexityCurve curve;
  for (const ExperimentConfig& c : preset_configs(preset, base, options)) {
    ComplexityCurve part = run_experiment(c);
    curve.insert(curve.end(), part.begin(), part.end());
  }
  return curve;
}

std::string curve_csv_header() {
  return "preset,n,kappa_label,lambda,epsilon,N_min,mean_error,std_error,trials,master_seed,"
         "kappa,N_fail,mean_error_fail,error_q90,max_gram_cond,ill_conditioned";
}

void write_curve_csv(std::ostream& os, const ComplexityCurve& curve) {
  os << curve_csv_header() << "\n";
  for (const CurveRow& r : curve) {
    const SearchResult& s = r.search;
    const double max_cond = s.N_min ? s.at_min.max_gram_cond : s.at_fail.max_gram_cond;
    os << r.preset << ',' << r.n << ',' << r.kappa_label << ','
       << (r.lambda ? format_double(*r.lambda) : "") << ',' << format_double(r.eps) << ',';
    if (s.N_min) {
      os << *s.N_min << ',' << format_double(s.at_min.mean) << ',' << format_double(s.at_min.std);
    } else {
      os << ",,";
    }
    os << ',' << r.trials << ',' << r.master_seed << ',';
    os << (r.kappa ? std::to_string(*r.kappa) : "") << ',';
    if (s.N_fail) {
      os << *s.N_fail << ',' << format_double(s.at_fail.mean);
    } else {
      os << ',';
    }
    os << ',' << (s.N_min ? format_double(s.at_min.q90) : "") << ',' << format_double(max_cond)
       << ',' << (s.ill_conditioned ? 1 : 0) << "\n";
  }
}

}  // namespace sysid
