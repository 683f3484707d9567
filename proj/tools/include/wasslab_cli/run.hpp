#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "wasslab/measure.hpp"
#include "wasslab/spectral.hpp"
#include "wasslab_cli/config.hpp"
#include "wasslab_cli/report.hpp"

namespace wasslab::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kIoError = 3,
  kVerificationFailure = 4,
  kSolverFailure = 5,
};

struct RunConfig {
  Config config;
  std::string command;            // simulate | heat-bound | wasserstein | verify
  std::vector<std::string> args;  // measure paths or suite name
};

/// Runs one command, writes report files into output.dir and a copy of the
/// report to `out`. Errors go to `err` as a single line
/// "error,<kind>,<code>,<message>".
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Spectrum, base measure and cosine basis described by a config. Held by
/// pointer because tangent states keep a reference to the basis.
struct Model {
  Spectrum spectrum;
  BaseMeasure base;
  EigenBasis basis;
};
std::unique_ptr<const Model> build_model(const Config& config);

const std::vector<std::string>& suite_names();

/// One verification suite (or "all"); throws ConfigError for unknown names.
Report run_suite(const std::string& suite, const Config& config);

Report heat_bound_report(const Config& config);

/// Gauss-Hermite nodes/weights for the standard normal (weights sum to 1).
void gauss_hermite(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace wasslab::cli
