// Command-line front end: gplab <subcommand> [--config <path>] [--out <dir>] [--seed <u64>]

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gplab/gplab.h"

namespace {

const std::vector<std::pair<std::string, std::string>> subcommands = {
    {"scatter", "zero-energy scattering length, b0 and the Neumann eigenvalue"},
    {"evolve-nbody", "exact N-boson evolution on the torus"},
    {"evolve-gp", "Hartree, Gross-Pitaevskii or density-matrix GP flow"},
    {"bbgky-residual", "finite-difference residual of the BBGKY hierarchy"},
    {"gph-residual", "residual of the GP hierarchy on factorized GP trajectories"},
    {"delta-lemma", "mollified delta versus diagonal restriction"},
    {"coupling-compare", "naive b0 versus correlated 8 pi a0 coupling"},
    {"mf-convergence", "N-body marginals against Hartree in mean-field scaling"},
};

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path);
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gplab: few-body and hierarchy experiments for dilute Bose gases"};
  app.set_version_flag("--version", std::string(gplab_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  for (const auto& [name, help] : subcommands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "experiment config file");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "seed for fixture randomness")->capture_default_str();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string experiment = app.get_subcommands().front()->get_name();

  std::string text;
  if (!config_path.empty() && !read_file(config_path, text)) {
    std::cerr << "gplab: cannot read config " << config_path << "\n";
    return 2;
  }
  int exit_code = 1;
  char* report = nullptr;
  const gplab_status status =
      gplab_run(experiment.c_str(), config_path.empty() ? nullptr : text.c_str(),
                out_dir.c_str(), seed, &exit_code, &report);
  if (status != GPLAB_OK) {
    std::cerr << "gplab: " << gplab_last_error() << "\n";
    return status == GPLAB_ERR_GUARDRAIL ? 3 : (status == GPLAB_ERR_INVALID_ARGUMENT ? 2 : 1);
  }
  const std::string json = report ? report : "";
  gplab_string_free(report);
  if (json.empty()) {
    std::cerr << "gplab: " << gplab_last_error() << "\n";
  } else {
    std::cout << out_dir << "/report.json (exit " << exit_code << ")\n";
  }
  return exit_code;
}
