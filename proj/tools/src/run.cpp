#include "wasslab_cli/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "wasslab/error.hpp"
#include "wasslab/ou_sim.hpp"
#include "wasslab/stats.hpp"
#include "wasslab/wasserstein.hpp"

namespace wasslab::cli {
namespace {

namespace fs = std::filesystem;

fs::path output_dir(const Config& cfg) {
  const fs::path dir = cfg.str("output.dir");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  return f;
}

bool json_enabled(const Config& cfg) {
  const auto& v = cfg.str("output.json");
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("output.json must be true or false");
}

int emit(const Config& cfg, const Report& report, const std::string& stem, std::ostream& out) {
  const fs::path dir = output_dir(cfg);
  {
    auto f = open_out(dir / (stem + ".csv"));
    write_report_csv(f, report);
  }
  if (json_enabled(cfg)) {
    auto f = open_out(dir / (stem + ".json"));
    write_summary_json(f, report, cfg.seed());
  }
  write_report_csv(out, report);
  return report.all_hold() ? kOk : kVerificationFailure;
}

std::string fmt_t(double t) {
  std::ostringstream s;
  s << t;
  return s.str();
}

int simulate(const Config& cfg, std::ostream& out) {
  const auto model = build_model(cfg);
  const auto& spectrum = model->spectrum;
  const std::uint64_t seed = cfg.seed();
  const double k_sigma = cfg.positive("tolerance.sigma");
  const std::vector<double> grid = cfg.reals("simulate.t_grid");
  const std::size_t paths = cfg.count("simulate.paths");
  if (paths < 2) throw ConfigError("simulate.paths must be at least 2");

  PathInit init = StationaryInit{};
  Eigen::VectorXd c0;
  const bool stationary = cfg.str("simulate.init") == "stationary";
  if (!stationary) {
    if (cfg.str("simulate.init") == "zero") {
      c0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spectrum.size()));
    } else {
      const auto v = cfg.reals("simulate.init");
      c0 = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    }
    if (static_cast<std::size_t>(c0.size()) != spectrum.size()) {
      throw ConfigError("simulate.init needs basis.M coefficients, 'zero' or 'stationary'");
    }
    init = c0;
  }

  std::vector<OUPathSample> samples;
  samples.reserve(paths);
  try {
    for (std::size_t i = 0; i < paths; ++i) samples.push_back(simulate_path(spectrum, grid, init, seed, i));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("simulate.t_grid: ") + e.what());
  }

  const fs::path dir = output_dir(cfg);
  const std::size_t exported = std::min(paths, cfg.count("simulate.export_paths"));
  for (std::size_t i = 0; i < exported; ++i) {
    auto f = open_out(dir / ("path_" + std::to_string(i) + ".csv"));
    write_path_csv(f, samples[i]);
  }

  // Per time and mode: sample mean and second moment about the exact
  // transition mean, against the exact law.
  Report report;
  report.name = "simulate";
  std::vector<double> dev(paths), sq(paths);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (std::size_t n = 0; n < spectrum.size(); ++n) {
      const auto idx = static_cast<Eigen::Index>(n);
      const double alpha = spectrum.alpha(n);
      double mean = 0.0;
      double var = 1.0 / alpha;
      if (!stationary) {
        const auto mom = ou_transition_moments(alpha, grid[k]);
        mean = mom.mean_factor * c0[idx];
        var = mom.variance;
      }
      for (std::size_t i = 0; i < paths; ++i) {
        dev[i] = samples[i].state(k)[idx] - mean;
        sq[i] = dev[i] * dev[i] - var;
      }
      const std::string tag = "[mode=" + std::to_string(n + 1) + "|t=" + fmt_t(grid[k]) + "]";
      const auto m1 = estimate_mean(dev, seed);
      const auto m2 = estimate_mean(sq, seed);
      report.add({"mean_residual" + tag, m1.value, m1.std_error, k_sigma * m1.std_error,
                  std::abs(m1.value) <= k_sigma * m1.std_error, seed});
      report.add({"variance_residual" + tag, m2.value, m2.std_error, k_sigma * m2.std_error,
                  std::abs(m2.value) <= k_sigma * m2.std_error, seed});
    }
  }
  return emit(cfg, report, "simulate", out);
}

int wasserstein_cmd(const RunConfig& rc, std::ostream& out) {
  const Config& cfg = rc.config;
  if (rc.args.size() != 2) throw ConfigError("wasserstein needs two measure CSV paths");
  const DiscreteMeasure mu = read_measure_csv(rc.args[0]);
  const DiscreteMeasure nu = read_measure_csv(rc.args[1]);
  if (mu.dim() != nu.dim()) throw IoError("measures have different dimensions");
  const double p = cfg.real("wasserstein.p");
  if (!(p >= 1.0)) throw ConfigError("wasserstein.p must be >= 1");

  std::string solver = cfg.str("wasserstein.solver");
  if (solver == "auto") solver = mu.dim() == 1 ? "w1d" : "exact";
  double distance = 0.0;
  double violation = 0.0;
  if (solver == "w1d") {
    if (mu.dim() != 1) throw ConfigError("solver w1d needs one-dimensional measures");
    distance = w1d(mu, nu, p).distance;
  } else if (solver == "exact") {
    ExactOptions options;
    options.max_atoms = cfg.count("wasserstein.max_atoms");
    distance = w_exact(mu, nu, p, options).distance;
  } else if (solver == "sinkhorn") {
    const double diam = cross_diameter(mu, nu);
    const double eps = cfg.positive("wasserstein.epsilon_rel") * std::pow(std::max(diam, 1e-300), p);
    SinkhornOptions options;
    options.tolerance = cfg.positive("wasserstein.sinkhorn_tol");
    const auto res = w_sinkhorn(mu, nu, p, eps, options);
    if (!res.converged) {
      throw SolverError("Sinkhorn did not converge (marginal violation " +
                        format_real(res.marginal_violation) + ")");
    }
    distance = res.distance_estimate;
    violation = res.marginal_violation;
  } else {
    throw ConfigError("wasserstein.solver must be auto, w1d, exact or sinkhorn");
  }

  Report report;
  report.name = "wasserstein";
  report.add({"W_p", distance, 0.0, violation, true, cfg.seed()});
  const fs::path dir = output_dir(cfg);
  {
    auto f = open_out(dir / "wasserstein.csv");
    write_report_csv(f, report);
  }
  out << "distance,p,solver,atoms_mu,atoms_nu\n"
      << format_real(distance) << ',' << format_real(p) << ',' << solver << ',' << mu.size() << ','
      << nu.size() << '\n';
  return kOk;
}

void error_line(std::ostream& err, const char* kind, int code, const std::string& message) {
  std::string flat = message;
  for (char& c : flat) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  err << "error," << kind << ',' << code << ',' << flat << '\n';
}

}  // namespace

int run(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  try {
    const Config& cfg = rc.config;
    cfg.seed();  // validated up front for every command
    if (rc.command == "simulate") return simulate(cfg, out);
    if (rc.command == "heat-bound") return emit(cfg, heat_bound_report(cfg), "heat_bound", out);
    if (rc.command == "wasserstein") return wasserstein_cmd(rc, out);
    if (rc.command == "verify") {
      if (rc.args.size() != 1) throw ConfigError("verify needs exactly one suite name");
      const auto& names = suite_names();
      if (std::find(names.begin(), names.end(), rc.args[0]) == names.end()) {
        throw ConfigError("unknown suite '" + rc.args[0] + "'");
      }
      return emit(cfg, run_suite(rc.args[0], cfg), "verify_" + rc.args[0], out);
    }
    throw ConfigError("unknown command '" + rc.command + "'");
  } catch (const ConfigError& e) {
    error_line(err, "config", kConfigError, e.what());
    return kConfigError;
  } catch (const IoError& e) {
    error_line(err, "io", kIoError, e.what());
    return kIoError;
  } catch (const SolverError& e) {
    error_line(err, "solver", kSolverFailure, e.what());
    return kSolverFailure;
  } catch (const CapacityError& e) {
    error_line(err, "config", kConfigError, e.what());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    error_line(err, "config", kConfigError, e.what());
    return kConfigError;
  }
}

}  // namespace wasslab::cli
