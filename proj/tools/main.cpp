#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wasslab/error.hpp"
#include "wasslab_cli/run.hpp"

int main(int argc, char** argv) {
  using namespace wasslab::cli;
  CLI::App app{"wasslab: Wasserstein-space calculus, OU simulation and verification suites"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  bool json = false;
  app.add_option("-c,--config", config_path, "key = value config file (must set mc.seed)");
  app.add_option("-s,--set", overrides, "override one key, e.g. --set mc.n_samples=1000");
  app.add_option("-o,--out", out_dir, "output directory (output.dir)");
  app.add_flag("--json", json, "also write a JSON summary next to the report");

  RunConfig rc;
  auto* sim = app.add_subcommand("simulate", "simulate OU paths and summarize them");
  auto* heat = app.add_subcommand("heat-bound", "per-mode heat-kernel trace against its bound");
  auto* wass = app.add_subcommand("wasserstein", "W_p between two measure CSV files");
  std::string mu_path, nu_path;
  wass->add_option("mu", mu_path)->required();
  wass->add_option("nu", nu_path)->required();
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite;
  verify->add_option("suite", suite)->required()->check(CLI::IsMember(suite_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error,config," << kConfigError << ',' << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (!config_path.empty()) rc.config.load_file(config_path);
    for (const auto& o : overrides) rc.config.set(o);
    if (!out_dir.empty()) rc.config.set("output.dir", out_dir);
    if (json) rc.config.set("output.json", "true");
  } catch (const ConfigError& e) {
    std::cerr << "error,config," << kConfigError << ',' << e.what() << '\n';
    return kConfigError;
  } catch (const wasslab::IoError& e) {
    std::cerr << "error,io," << kIoError << ',' << e.what() << '\n';
    return kIoError;
  }

  if (sim->parsed()) rc.command = "simulate";
  if (heat->parsed()) rc.command = "heat-bound";
  if (wass->parsed()) {
    rc.command = "wasserstein";
    rc.args = {mu_path, nu_path};
  }
  if (verify->parsed()) {
    rc.command = "verify";
    rc.args = {suite};
  }
  return run(rc, std::cout, std::cerr);
}
