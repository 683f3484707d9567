#include "wasslab_cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wasslab/error.hpp"

namespace wasslab::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::map<std::string, std::string>& Config::defaults() {
  static const std::map<std::string, std::string> table = {
      {"spectrum.family", "power"},
      {"spectrum.a", "1"},
      {"spectrum.s", "2"},
      {"spectrum.values", ""},
      {"basis.M", "8"},
      {"base.kind", "uniform01"},
      {"base.N", "64"},
      {"mc.n_samples", "20000"},
      {"mc.seed", "20240611"},
      {"output.dir", "."},
      {"output.json", "false"},
      {"calculus.functions", "tanh_mean,sin_second_moment,atan(cos_pi)"},
      {"calculus.trials", "100"},
      {"calculus.p", "2"},
      {"simulate.t_grid", "0,0.1,0.5,1,2"},
      {"simulate.paths", "2000"},
      {"simulate.init", "stationary"},
      {"simulate.export_paths", "1"},
      {"heat.t", "1"},
      {"wasserstein.p", "2"},
      {"wasserstein.solver", "auto"},
      {"wasserstein.epsilon_rel", "1e-4"},
      {"wasserstein.sinkhorn_tol", "1e-6"},
      {"wasserstein.max_atoms", "512"},
      {"semigroup.degrees", "0,1,2,3,4"},
      {"semigroup.modes", "1,2"},
      {"semigroup.times", "0.1,0.5,2"},
      {"semigroup.x0", "0.8"},
      {"ibp.modes", "1,2,3"},
      {"c1.C", "1"},
      {"galerkin.big", "mean,tanh_mean,second_moment,sin_second_moment,atan(cos_pi),tanh(x2),"
                       "constant,hermite_1_2,coeff_2"},
      {"galerkin.sub", "mean,tanh_mean,second_moment,sin_second_moment,atan(cos_pi),tanh(x2)"},
      {"galerkin.batches", "32"},
      {"invariance.scale", "2"},
      {"invariance.functionals", "mean,second_moment,tanh(x2)"},
      {"invariance.n", "10000"},
      {"tolerance.chain_rule", "1e-6"},
      {"tolerance.lipschitz", "1e-12"},
      {"tolerance.monotone", "1e-10"},
      {"tolerance.orthonormality", "1e-10"},
      {"tolerance.sigma", "4"},
      {"tolerance.ks_level", "0.01"},
  };
  return table;
}

Config::Config() : values_(defaults()) {}

void Config::set(const std::string& key, const std::string& value) {
  if (!defaults().count(key)) throw ConfigError("unknown config key '" + key + "'");
  values_[key] = value;
  user_keys_[key] = value;
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::parse(std::istream& in, const std::string& origin) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.find('=') == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set(line);
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  parse(in, path);
  if (!user_set("mc.seed")) throw ConfigError(path + ": mc.seed is required");
}

const std::string& Config::str(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

double Config::real(const std::string& key) const {
  const std::string& s = str(key);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(key + ": not a finite number: '" + s + "'");
  }
  return v;
}

double Config::positive(const std::string& key) const {
  const double v = real(key);
  if (!(v > 0.0)) throw ConfigError(key + " must be positive");
  return v;
}

std::size_t Config::count(const std::string& key) const {
  const std::string& s = str(key);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(key + ": not a non-negative integer: '" + s + "'");
  }
  return v;
}

std::uint64_t Config::seed() const {
  const std::string& s = str("mc.seed");
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("mc.seed must be an unsigned integer");
  }
  return v;
}

std::vector<std::string> Config::list(const std::string& key) const {
  // Split on commas outside parentheses so "sum(x,x2)" stays one item.
  std::vector<std::string> out;
  const std::string& s = str(key);
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  if (std::any_of(out.begin(), out.end(), [](const std::string& x) { return x.empty(); })) {
    throw ConfigError(key + ": empty list item");
  }
  return out;
}

std::vector<double> Config::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : list(key)) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(v)) {
      throw ConfigError(key + ": not a finite number: '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace wasslab::cli
