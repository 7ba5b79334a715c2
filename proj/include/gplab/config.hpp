#pragma once

// Experiment configuration: a sectioned key = value text file.
//
//   [experiment]  name
//   [grid]        d, M, L
//   [potential]   family, R, lambda
//   [scaling]     kind (none | gp | meanfield), beta
//   [system]      N
//   [time]        dt, t_end, snapshot_every, dt_obs, scheme
//   [init]        profile, amplitude, mode, width, center, dyson_weight
//   [scatter]     r_max, tol, ell1_over_a
//   [gp]          mode (hartree | gp | mixed), a0
//   [hierarchy]   k, nu, times, betas, N_list
//   [guardrail]   max_entries
//
// Lists are comma separated. Keys that are absent take the per-experiment
// default; unknown sections or keys are rejected.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace gplab {

struct GridSpec {
  int d = 1;
  int M = 16;
  double L = 1.0;

  bool operator==(const GridSpec&) const = default;
};

struct PotentialSpec {
  std::string family = "bump";
  double R = 0.25;
  double lambda = 1.0;

  bool operator==(const PotentialSpec&) const = default;
};

struct ScalingSpec {
  std::string kind = "none";
  double beta = 1.0;

  bool operator==(const ScalingSpec&) const = default;
};

struct TimeSpec {
  double dt = 1e-3;
  double t_end = 0.1;
  int snapshot_every = 10;
  double dt_obs = 1e-3;
  std::string scheme = "strang";

  bool operator==(const TimeSpec&) const = default;
};

struct InitSpec {
  std::string profile = "cosine";
  double amplitude = 0.1;
  int mode = 1;
  double width = 0.1;
  double center = 0.5;
  bool dyson_weight = false;

  bool operator==(const InitSpec&) const = default;
};

struct ScatterSpec {
  double r_max = 20.0;
  double tol = 1e-10;
  std::vector<double> ell1_over_a = {10.0, 100.0, 1000.0};

  bool operator==(const ScatterSpec&) const = default;
};

struct GpSpec {
  std::string mode = "gp";
  double a0 = 0.01;

  bool operator==(const GpSpec&) const = default;
};

struct HierarchySpec {
  int k = 2;
  double nu = 2.0;
  std::vector<double> times = {0.05};
  std::vector<double> betas = {0.2, 0.1, 0.05, 0.025};
  std::vector<int> N_list = {2, 3, 4, 5};

  bool operator==(const HierarchySpec&) const = default;
};

struct ExperimentConfig {
  std::string experiment;
  GridSpec grid;
  PotentialSpec potential;
  ScalingSpec scaling;
  int N = 2;
  TimeSpec time;
  InitSpec init;
  ScatterSpec scatter;
  GpSpec gp;
  HierarchySpec hierarchy;
  std::size_t max_entries = std::size_t{1} << 26;

  bool operator==(const ExperimentConfig&) const = default;
};

const std::vector<std::string>& experiment_names();

// Well-formed defaults for one experiment; throws on an unknown name.
ExperimentConfig default_config(const std::string& experiment);

// Parses text; starts from default_config of [experiment] name. Throws
// InvalidArgument on syntax errors, unknown keys, or malformed values.
ExperimentConfig parse_config(const std::string& text);
// As above; a missing [experiment] name falls back to `experiment`, and a
// name that differs from a non-empty `experiment` is rejected.
ExperimentConfig parse_config(const std::string& text, const std::string& experiment);
ExperimentConfig load_config(const std::string& path);

struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
};

// Every key in section order; numbers print with round-trip precision.
std::vector<ConfigEntry> config_entries(const ExperimentConfig& config);
std::string serialize_config(const ExperimentConfig& config);

enum class ViolationKind { validation, guardrail };

struct Violation {
  ViolationKind kind;
  std::string message;
};

// All precondition findings for the named experiment; empty when runnable.
std::vector<Violation> validate(const ExperimentConfig& config);

}  // namespace gplab
