#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "sysid/bounds.hpp"
#include "sysid/ctrb.hpp"
#include "sysid/errors.hpp"
#include "sysid/ident.hpp"
#include "sysid/mc.hpp"
#include "sysid/model_io.hpp"
#include "sysid/text.hpp"
#include "sysid/zoo.hpp"

namespace sysid::cli {

namespace {

// Thrown for bad flag combinations found after CLI11 has parsed.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelSource {
  std::string model_path;
  std::string zoo_spec;

  LtiSystem load() const {
    if (model_path.empty() == zoo_spec.empty()) {
      throw UsageError("exactly one of --model or --zoo is required");
    }
    if (!model_path.empty()) return load_model(model_path).to_system();
    return build_system(SystemSpec::parse(zoo_spec));
  }
};

void add_model_flags(CLI::App* app, ModelSource& src) {
  app->add_option("--model", src.model_path, "Model file with A, H and optional B blocks");
  app->add_option("--zoo", src.zoo_spec, "Zoo system, e.g. hard_chain:n=5,rho=0.25");
}

// Writes to `path`, or to `out` when path is empty or "-".
template <typename F>
void emit(const std::string& path, std::ostream& out, F&& write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error("cannot write " + path);
  write(file);
  if (!file) throw Error("write failed: " + path);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<int> parse_n_range(const std::string& text) {
  std::istringstream is("n_range = " + text);
  return parse_config(is, "--n-range").n_range;
}

// ---- ctrb -------------------------------------------------------------

struct CtrbOptions {
  ModelSource src;
  std::string pair = "AHB";
  double tol = 1e-8;
  double grid = 0.0;
  bool no_refine = false;
  std::string csv;
};

void add_ctrb_flags(CLI::App* app, CtrbOptions& o, bool is_distance) {
  add_model_flags(app, o.src);
  app->add_option("--pair", o.pair, "Excitation used: AH, AB or AHB ([H B])")
      ->check(CLI::IsMember({"AH", "AB", "AHB"}))
      ->capture_default_str();
  if (is_distance) {
    app->add_option("--grid", o.grid, "Grid spacing (default: 2% of the search radius)");
    app->add_flag("--no-refine", o.no_refine, "Skip the Nelder-Mead refinement");
  } else {
    app->add_option("--tol", o.tol, "Relative rank tolerance")->capture_default_str();
  }
  app->add_option("--csv", o.csv, "Also write matrices as CSV blocks to this file");
}

MatrixXd excitation_for(const LtiSystem& sys, const std::string& pair) {
  if (pair == "AH") return sys.H();
  if (pair == "AB") return sys.B();
  return sys.excitation();
}

void ctrb_index(const CtrbOptions& o, std::ostream& out) {
  const LtiSystem sys = o.src.load();
  const auto k = controllability_index(sys.A(), excitation_for(sys, o.pair), o.tol);
  out << (k ? std::to_string(*k) : "uncontrollable") << "\n";
}

void ctrb_staircase(const CtrbOptions& o, std::ostream& out) {
  const LtiSystem sys = o.src.load();
  const StaircaseForm sf = staircase(sys.A(), excitation_for(sys, o.pair), o.tol);
  out << "n: " << sys.n() << "\n";
  out << "tol: " << format_double(sf.tol) << "\n";
  out << "controllable: " << (sf.controllable ? "yes" : "no") << "\n";
  out << "kappa: " << (sf.kappa ? std::to_string(*sf.kappa) : "none") << "\n";
  out << "block_sizes: " << join(sf.block_sizes) << "\n";
  out << "coupling_sigma_min:";
  int row = 0;
  for (std::size_t i = 0; i + 1 < sf.block_sizes.size(); ++i) {
    const int ri = sf.block_sizes[i];
    const int rn = sf.block_sizes[i + 1];
    out << (i ? "," : " ") << format_double(sigma_min(sf.A_tilde.block(row + ri, row, rn, ri)));
    row += ri;
  }
  out << "\n";
  if (!o.csv.empty()) {
    emit(o.csv, out, [&](std::ostream& os) {
      write_block(os, "U", sf.U);
      write_block(os, "A_tilde", sf.A_tilde);
      write_block(os, "H_tilde", sf.H_tilde);
    });
  }
}

void ctrb_distance(const CtrbOptions& o, std::ostream& out) {
  const LtiSystem sys = o.src.load();
  const DistanceEstimate d =
      distance_to_uncontrollability(sys.A(), excitation_for(sys, o.pair), o.grid, !o.no_refine);
  auto write = [&](std::ostream& os, const char* sep) {
    os << "distance" << sep << format_double(d.value) << "\n";
    os << "minimizer_re" << sep << format_double(d.minimizer_s.real()) << "\n";
    os << "minimizer_im" << sep << format_double(d.minimizer_s.imag()) << "\n";
    os << "grid_resolution" << sep << format_double(d.grid_resolution) << "\n";
    os << "refined" << sep << (d.refined ? "yes" : "no") << "\n";
  };
  write(out, ": ");
  if (!o.csv.empty()) {
    emit(o.csv, out, [&](std::ostream& os) {
      os << "key,value\n";
      write(os, ",");
    });
  }
}

// ---- bounds -----------------------------------------------------------

struct BoundsOptions {
  std::string name;
  double M = 1.0;
  int n = 0;
  int k = 0;
  double rho = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  double beta = 0.0;
  int N = 0;
  long long N_max = 10000000;
  bool proof_form = false;
  double mu = 0.0;
  int kappa = 0;
};

void require_flags(CLI::App* app, std::initializer_list<const char*> names) {
  for (const char* name : names) {
    if (app->get_option(name)->count() == 0) {
      throw UsageError(std::string(app->get_name()) + " needs " + name);
    }
  }
}

void bounds_eval(CLI::App* app, const BoundsOptions& o, std::ostream& out) {
  const std::string& b = o.name;
  if (b == "powers" || b == "gramian") {
    require_flags(app, {"--M", "--n", "--k"});
    const double v = b == "powers" ? powers_bound(o.M, o.n, o.k) : gramian_upper_bound(o.M, o.n, o.k);
    out << format_double(v) << "\n";
  } else if (b == "gramian22") {
    require_flags(app, {"--rho", "--n"});
    out << format_double(gramian22_decay_bound(o.rho, o.n)) << "\n";
  } else if (b == "integrator-distance") {
    require_flags(app, {"--rho", "--n"});
    const IntegratorDistance d = integrator_distance_closed_form(o.rho, o.n);
    out << "value: " << format_double(d.value) << "\n";
    out << "lower: " << format_double(d.lower) << "\n";
    out << "upper: " << format_double(d.upper) << "\n";
  } else if (b == "exp-hard") {
    require_flags(app, {"--n", "--eps", "--delta"});
    out << format_double(exp_hard_lower_bound(o.n, o.eps, o.delta, o.proof_form)) << "\n";
  } else if (b == "kl-theorem2") {
    require_flags(app, {"--beta", "--eps", "--N"});
    const auto [s1, s2] = zoo_theorem2_triple(o.beta, o.eps);
    out << format_double(kl_trajectory(s1, s2, o.N).value) << "\n";
  } else if (b == "minimax-theorem2") {
    require_flags(app, {"--beta", "--eps", "--delta"});
    const auto [s1, s2] = zoo_theorem2_triple(o.beta, o.eps);
    const auto n = minimax_required_samples(s1, s2, o.delta, o.N_max);
    out << (n ? std::to_string(*n) : "exceeds N_max") << "\n";
  }
}

void bounds_certify(const BoundsOptions& o, std::ostream& out) {
  const BoundCertificate c = sigma_min_certificate(o.M, o.mu, o.kappa);
  out << "M: " << format_double(c.M) << "\n";
  out << "mu: " << format_double(c.mu) << "\n";
  out << "kappa: " << c.kappa << "\n";
  out << "bound: " << format_double(c.bound) << "\n";
  out << "sigma_min_gramian_lower: " << format_double(1.0 / (c.bound * c.bound)) << "\n";
  out << "alpha1: " << format_double(c.alpha1(0)) << ',' << format_double(c.alpha1(1)) << ','
      << format_double(c.alpha1(2)) << "\n";
  for (int i = 0; i < 3; ++i) {
    out << "xi_row" << i + 1 << ": " << format_double(c.xi(i, 0)) << ','
        << format_double(c.xi(i, 1)) << ',' << format_double(c.xi(i, 2)) << "\n";
  }
  Eigen::EigenSolver<Eigen::Matrix3d> es(c.xi, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().begin(), es.eigenvalues().end());
  std::sort(ev.begin(), ev.end(), [](auto x, auto y) {
    return std::abs(x) != std::abs(y) ? std::abs(x) > std::abs(y) : x.real() > y.real();
  });
  out << "xi_eigenvalues:";
  for (std::size_t i = 0; i < ev.size(); ++i) {
    out << (i ? "," : " ") << format_double(ev[i].real());
    if (ev[i].imag() != 0.0) out << (ev[i].imag() > 0 ? "+" : "") << format_double(ev[i].imag()) << "i";
  }
  out << "\n";
  out << "xi_spectral_radius: " << format_double(std::abs(ev.front())) << "\n";
}

// ---- stochastic commands ------------------------------------------------

struct NoiseFlags {
  std::optional<double> input_std, noise_std, input_var, noise_var;

  std::optional<NoiseSpec> resolve(NoiseSpec fallback) const {
    if (input_std && input_var) throw UsageError("give --input-std or --input-var, not both");
    if (noise_std && noise_var) throw UsageError("give --noise-std or --noise-var, not both");
    if (!input_std && !input_var && !noise_std && !noise_var) return std::nullopt;
    NoiseSpec n = fallback;
    if (input_std) n.input_std = *input_std;
    if (input_var) n.input_std = std::sqrt(*input_var);
    if (noise_std) n.noise_std = *noise_std;
    if (noise_var) n.noise_std = std::sqrt(*noise_var);
    n.validate();
    return n;
  }
};

void add_noise_flags(CLI::App* app, NoiseFlags& f) {
  app->add_option("--input-std", f.input_std, "Standard deviation of each input coordinate");
  app->add_option("--noise-std", f.noise_std, "Standard deviation of each noise coordinate");
  app->add_option("--input-var", f.input_var, "Variance of each input coordinate");
  app->add_option("--noise-var", f.noise_var, "Variance of each noise coordinate");
}

void report_ill_conditioned(const ComplexityCurve& curve, std::ostream& err) {
  for (const CurveRow& r : curve) {
    if (r.search.ill_conditioned) {
      err << "warning: " << r.preset << " n=" << r.n << " kappa_label=" << r.kappa_label
          << ": regressor Gram matrix condition number exceeds 1e12\n";
    }
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear system identification toolkit: simulation, least squares, "
               "controllability analysis, bounds and sample-complexity experiments.",
               "sysid"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sysid 1.0.0");

  // zoo
  std::string zoo_spec, zoo_out;
  auto* zoo = app.add_subcommand("zoo", "Write a benchmark system as a model file");
  zoo->add_option("spec", zoo_spec, "family:key=value,... e.g. scaled_jordan:n=5")->required();
  zoo->add_option("--out", zoo_out, "Output model file (default stdout)");

  // simulate
  ModelSource sim_src;
  NoiseFlags sim_noise;
  int sim_N = 0;
  std::uint64_t sim_seed = 0;
  std::string sim_out;
  auto* sim = app.add_subcommand("simulate", "Simulate one trajectory and write it as CSV");
  add_model_flags(sim, sim_src);
  sim->add_option("--N", sim_N, "Number of transitions")->required();
  sim->add_option("--seed", sim_seed, "Random seed")->required();
  add_noise_flags(sim, sim_noise);
  sim->add_option("--out", sim_out, "Output CSV (default stdout)");

  // identify
  std::string id_traj, id_truth, id_out;
  double id_ridge = kDefaultRidge;
  auto* ident = app.add_subcommand("identify", "Least-squares estimate of A and B from a trajectory");
  ident->add_option("--traj", id_traj, "Trajectory CSV")->required();
  ident->add_option("--ridge", id_ridge, "Ridge coefficient")->capture_default_str();
  ident->add_option("--truth", id_truth, "Model file of the true system; reports ||A - A_hat||_2");
  ident->add_option("--out", id_out, "Estimate file (default stdout)");

  // ctrb
  auto* ctrb = app.add_subcommand("ctrb", "Controllability analysis");
  ctrb->require_subcommand(1);
  CtrbOptions idx_o, sc_o, dist_o, sc_alias_o, dist_alias_o;
  auto* c_index = ctrb->add_subcommand("index", "Print the controllability index");
  add_ctrb_flags(c_index, idx_o, false);
  auto* c_sc = ctrb->add_subcommand("staircase", "Orthogonal staircase form");
  add_ctrb_flags(c_sc, sc_o, false);
  auto* c_dist = ctrb->add_subcommand("distance", "Estimate the distance to uncontrollability");
  add_ctrb_flags(c_dist, dist_o, true);
  auto* sc_alias = app.add_subcommand("staircase", "Same as ctrb staircase");
  add_ctrb_flags(sc_alias, sc_alias_o, false);
  auto* dist_alias = app.add_subcommand("distance", "Same as ctrb distance");
  add_ctrb_flags(dist_alias, dist_alias_o, true);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Evaluate closed-form bounds");
  bounds->require_subcommand(1);
  BoundsOptions be, bc;
  auto* b_eval = bounds->add_subcommand("eval", "Evaluate a named bound");
  b_eval->add_option("bound", be.name, "Bound name")
      ->required()
      ->check(CLI::IsMember({"powers", "gramian", "gramian22", "integrator-distance", "exp-hard",
                             "kl-theorem2", "minimax-theorem2"}));
  b_eval->add_option("--M", be.M, "Norm bound M");
  b_eval->add_option("--n", be.n, "State dimension");
  b_eval->add_option("--k", be.k, "Horizon k");
  b_eval->add_option("--rho", be.rho, "Chain coupling rho");
  b_eval->add_option("--eps", be.eps, "Accuracy eps");
  b_eval->add_option("--delta", be.delta, "Failure probability delta");
  b_eval->add_option("--beta", be.beta, "Coupling beta of the two-system construction");
  b_eval->add_option("--N", be.N, "Trajectory length for kl-theorem2");
  b_eval->add_option("--N-max", be.N_max, "Search cap for minimax-theorem2")->capture_default_str();
  b_eval->add_flag("--proof-form", be.proof_form, "exp-hard: use the constant from the proof");
  auto* b_cert = bounds->add_subcommand("certify", "Least singular value certificate");
  b_cert->add_option("--M", bc.M, "Norm bound M")->required();
  b_cert->add_option("--mu", bc.mu, "Lower bound on the distance to uncontrollability")->required();
  b_cert->add_option("--kappa", bc.kappa, "Controllability index")->required();

  // mc
  std::string mc_config, mc_out;
  std::uint64_t mc_seed = 0;
  int mc_threads = 0;
  auto* mc = app.add_subcommand("mc", "Run a sample-complexity experiment from a config file");
  mc->add_option("--config", mc_config, "key=value config file")->required();
  mc->add_option("--seed", mc_seed, "Master seed (overrides master_seed in the config)")->required();
  mc->add_option("--out", mc_out, "Output CSV (default stdout)");
  mc->add_option("--threads", mc_threads, "Worker threads (default: config, else all cores)");

  // repro
  std::string rp_which, rp_out, rp_n_range;
  std::vector<double> rp_eps, rp_lambda;
  std::vector<std::string> rp_pattern;
  int rp_trials = 1000;
  std::uint64_t rp_seed = 0;
  int rp_threads = 0;
  long long rp_n_max = 100000;
  double rp_ridge = kDefaultRidge;
  NoiseFlags rp_noise;
  auto* repro = app.add_subcommand("repro", "Reproduce a figure preset (fig1, fig2, fig3)");
  repro->add_option("figure", rp_which, "fig1, fig2 or fig3")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  repro->add_option("--eps", rp_eps, "Accuracy target(s)");
  repro->add_option("--lambda", rp_lambda, "fig2: Jordan eigenvalue(s)");
  repro->add_option("--pattern", rp_pattern, "fig3: input pattern(s) last, half, every_other");
  repro->add_option("--trials", rp_trials, "Monte Carlo trials per probe")->capture_default_str();
  repro->add_option("--seed", rp_seed, "Master seed")->required();
  repro->add_option("--out", rp_out, "Output CSV (default stdout)");
  repro->add_option("--n-range", rp_n_range, "Dimensions, LO..HI or a comma list");
  repro->add_option("--threads", rp_threads, "Worker threads (default all cores)");
  repro->add_option("--n-max", rp_n_max, "Largest N probed")->capture_default_str();
  repro->add_option("--ridge", rp_ridge, "Ridge coefficient")->capture_default_str();
  add_noise_flags(repro, rp_noise);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (zoo->parsed()) {
      const ModelFile m = ModelFile::from_system(build_system(SystemSpec::parse(zoo_spec)));
      emit(zoo_out, out, [&](std::ostream& os) { write_model(os, m); });
    } else if (sim->parsed()) {
      const LtiSystem sys = sim_src.load();
      const NoiseSpec noise = sim_noise.resolve(NoiseSpec{}).value_or(NoiseSpec{});
      const Trajectory traj = simulate(sys, sim_N, noise, sim_seed);
      emit(sim_out, out, [&](std::ostream& os) { write_trajectory_csv(os, traj); });
    } else if (ident->parsed()) {
      std::ifstream in(id_traj);
      if (!in) throw ParseError(id_traj, 0, 0, "cannot open file");
      const Trajectory traj = read_trajectory_csv(in, id_traj);
      Estimate est = least_squares(traj, id_ridge);
      if (!id_truth.empty()) {
        const LtiSystem truth = load_model(id_truth).to_system();
        est.error_vs = estimation_error(est, truth.A());
      }
      emit(id_out, out, [&](std::ostream& os) {
        write_block(os, "A_hat", est.A_hat);
        write_block(os, "B_hat", est.B_hat);
        os << "# N: " << est.N << "\n";
        os << "# ridge: " << format_double(est.ridge) << "\n";
        if (est.error_vs) os << "# error: " << format_double(*est.error_vs) << "\n";
      });
      if (est.error_vs && !id_out.empty() && id_out != "-") {
        out << "error: " << format_double(*est.error_vs) << "\n";
      }
    } else if (c_index->parsed()) {
      ctrb_index(idx_o, out);
    } else if (c_sc->parsed()) {
      ctrb_staircase(sc_o, out);
    } else if (sc_alias->parsed()) {
      ctrb_staircase(sc_alias_o, out);
    } else if (c_dist->parsed()) {
      ctrb_distance(dist_o, out);
    } else if (dist_alias->parsed()) {
      ctrb_distance(dist_alias_o, out);
    } else if (b_eval->parsed()) {
      bounds_eval(b_eval, be, out);
    } else if (b_cert->parsed()) {
      bounds_certify(bc, out);
    } else if (mc->parsed()) {
      ExperimentConfig cfg = load_config(mc_config);
      cfg.master_seed = mc_seed;
      if (mc_threads > 0) cfg.threads = mc_threads;
      const ComplexityCurve curve = run_experiment(cfg);
      emit(mc_out, out, [&](std::ostream& os) { write_curve_csv(os, curve); });
      report_ill_conditioned(curve, err);
    } else if (repro->parsed()) {
      ExperimentConfig base;
      base.trials = rp_trials;
      base.master_seed = rp_seed;
      base.threads = resolve_threads(rp_threads);
      base.N_max = rp_n_max;
      base.ridge = rp_ridge;
      PresetOptions opts;
      opts.eps = rp_eps;
      opts.lambdas = rp_lambda;
      for (const auto& p : rp_pattern) opts.patterns.push_back(parse_b_pattern(p));
      opts.noise = rp_noise.resolve(rp_which == "fig1" ? NoiseSpec::from_variances(10.0, 0.5)
                                                       : NoiseSpec{});
      if (!rp_n_range.empty()) opts.n_range = parse_n_range(rp_n_range);
      const ComplexityCurve curve = run_experiment(parse_preset(rp_which), base, opts);
      emit(rp_out, out, [&](std::ostream& os) { write_curve_csv(os, curve); });
      report_ill_conditioned(curve, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace sysid::cli
