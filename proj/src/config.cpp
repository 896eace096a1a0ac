#include <cmath>
#include <fstream>
#include <set>

#include "sysid/errors.hpp"
#include "sysid/mc.hpp"
#include "sysid/text.hpp"

namespace sysid {

namespace {

std::vector<int> parse_range(std::string_view text, bool& ok) {
  ok = false;
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots != std::string_view::npos) {
    long long lo = 0;
    long long hi = 0;
    if (!parse_int(text.substr(0, dots), lo) || !parse_int(text.substr(dots + 2), hi) || lo > hi) {
      return {};
    }
    for (long long n = lo; n <= hi; ++n) out.push_back(static_cast<int>(n));
  } else {
    for (const auto& item : split(text, ',')) {
      long long n = 0;
      if (!parse_int(item, n)) return {};
      out.push_back(static_cast<int>(n));
    }
  }
  ok = !out.empty();
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::istream& is, const std::string& source) {
  ExperimentConfig cfg;
  cfg.system.params.clear();
  std::optional<double> input_std, noise_std, input_var, noise_var;
  std::set<std::string> seen;

  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    const int key_col = static_cast<int>(raw.find_first_not_of(" \t")) + 1;
    if (eq == std::string_view::npos) throw ParseError(source, lineno, key_col, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const int value_col = static_cast<int>(eq + 1 + line.substr(eq + 1).find_first_not_of(" \t")) + 1;
    if (!seen.insert(key).second) throw ParseError(source, lineno, key_col, "duplicate key '" + key + "'");

    auto bad = [&](const std::string& what) {
      return ParseError(source, lineno, value_col, key + ": " + what);
    };
    auto real = [&]() {
      double v = 0.0;
      if (!parse_double(value, v)) throw bad("expected a number, got '" + std::string(value) + "'");
      return v;
    };
    auto integer = [&]() {
      long long v = 0;
      if (!parse_int(value, v)) throw bad("expected an integer, got '" + std::string(value) + "'");
      return v;
    };

    if (key == "system") {
      cfg.system.family = std::string(value);
    } else if (key == "lambda" || key == "rho" || key == "h_scale" || key == "b_scale") {
      real();
      cfg.system.params[key] = std::string(value);
    } else if (key == "m") {
      integer();
      cfg.system.params[key] = std::string(value);
    } else if (key == "b_pattern") {
      try {
        parse_b_pattern(std::string(value));
      } catch (const DomainError& e) {
        throw bad(e.what());
      }
      cfg.system.params[key] = std::string(value);
    } else if (key == "input_std") {
      input_std = real();
    } else if (key == "noise_std") {
      noise_std = real();
    } else if (key == "input_var") {
      input_var = real();
    } else if (key == "noise_var") {
      noise_var = real();
    } else if (key == "eps") {
      cfg.eps = real();
    } else if (key == "trials") {
      cfg.trials = static_cast<int>(integer());
    } else if (key == "master_seed") {
      long long v = integer();
      if (v < 0) throw bad("must be nonnegative");
      cfg.master_seed = static_cast<std::uint64_t>(v);
    } else if (key == "ridge") {
      cfg.ridge = real();
    } else if (key == "N_max") {
      cfg.N_max = integer();
    } else if (key == "n_range") {
      bool ok = false;
      cfg.n_range = parse_range(value, ok);
      if (!ok) throw bad("expected LO..HI or a comma-separated list");
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(integer());
    } else {
      throw ParseError(source, lineno, key_col, "unknown key '" + key + "'");
    }
  }

  if (input_std && input_var) throw ParseError(source, lineno, 1, "both input_std and input_var given");
  if (noise_std && noise_var) throw ParseError(source, lineno, 1, "both noise_std and noise_var given");
  if (input_var) input_std = std::sqrt(*input_var);
  if (noise_var) noise_std = std::sqrt(*noise_var);
  if (input_std) cfg.noise.input_std = *input_std;
  if (noise_std) cfg.noise.noise_std = *noise_std;
  try {
    cfg.validate();
  } catch (const DomainError& e) {
    throw ParseError(source, lineno, 1, e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  return parse_config(in, path);
}

}  // namespace sysid
