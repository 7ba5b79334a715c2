#pragma once

// One-particle limit equations: Hartree, Gross-Pitaevskii, and the
// Gross-Pitaevskii equation for a one-particle density matrix.

#include <vector>

#include "gplab/marginals.hpp"
#include "gplab/torus.hpp"

namespace gplab {

struct CondensateState {
  Field u;
  double t = 0.0;
};

struct FlowParams {
  double dt = 1e-3;
  double t_end = 0.0;
  // Steps between stored snapshots; 0 keeps only the initial and final state.
  int snapshot_every = 0;
  double drift_tolerance = 1e-3;
};

struct CondensateTrajectory {
  std::vector<CondensateState> snapshots;
  std::vector<double> energies;
  double max_energy_drift = 0.0;
  bool drift_flag = false;
};

struct MixedTrajectory {
  std::vector<DensityKernel> snapshots;
  std::vector<double> energies;
  double max_energy_drift = 0.0;
  double max_trace_drift = 0.0;
  bool drift_flag = false;
};

double mass(const Field& u);

// int |grad u|^2 + (1/2) int (V * |u|^2) |u|^2
double hartree_energy(const Field& u, const Field& V);
// int |grad u|^2 + 4 pi a0 int |u|^4
double gp_energy(const Field& u, double a0);
// Tr(-Delta gamma) + 4 pi a0 int gamma(x;x)^2
double mixed_gp_energy(const DensityKernel& gamma, double a0);

// i u_t = -Delta u + (V * |u|^2) u; V sampled on the torus.
CondensateTrajectory evolve_hartree(const CondensateState& initial, const Field& V,
                                    const FlowParams& params);

// i u_t = -Delta u + 8 pi a0 |u|^2 u
CondensateTrajectory evolve_gp(const CondensateState& initial, double a0,
                               const FlowParams& params);

// i d_t gamma = (-Delta + Delta') gamma + 8 pi a0 (gamma(x;x) - gamma(x';x')) gamma
MixedTrajectory evolve_gp_mixed(const DensityKernel& initial, double a0,
                                const FlowParams& params, std::size_t max_dim = 64 * 64);

// Applies the free flow e^{-i t (-Delta + Delta')} to a kernel of any k.
DensityKernel free_kernel_flow(const DensityKernel& gamma, double t);

}  // namespace gplab
