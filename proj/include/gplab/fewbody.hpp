#pragma once

// Exact N-boson dynamics on the discretized torus.
//
// A state is a rank N*d cube tensor; particle slot s owns tensor axes
// [s*d, (s+1)*d), slot 0 slowest.

#include <vector>

#include "gplab/error.hpp"
#include "gplab/scattering.hpp"
#include "gplab/torus.hpp"

namespace gplab {

struct NBodyState {
  Grid grid;
  int N;
  std::vector<cplx> psi;
  double t = 0.0;

  NBodyState(const Grid& g, int particles, std::vector<cplx> values, double time = 0.0);

  int rank() const { return N * grid.dim(); }
  // h^{dN}
  double cell_volume() const;
};

std::size_t nbody_entries(const Grid& grid, int N);

enum class ProfileKind { constant, cosine, gaussian, plane_wave };

// Smooth one-particle profile; normalized to unit L^2 norm on construction.
struct OneBodyProfile {
  ProfileKind kind = ProfileKind::cosine;
  // cosine: phi = 1 + amplitude * sum_a cos(2 pi mode x_a / L)
  double amplitude = 0.1;
  // cosine / plane_wave mode along every axis
  int mode = 1;
  // gaussian: exp(-|x - center|^2 / (2 width^2)), minimum image
  double width = 0.1;
  double center = 0.5;
};

ProfileKind parse_profile_kind(const std::string& name);
Field make_profile(const Grid& grid, const OneBodyProfile& profile);
Field normalized(Field f);

// phi_1 (x) ... (x) phi_N, normalized.
NBodyState product_state(const std::vector<Field>& factors, const Guardrail& guardrail = {});
NBodyState product_state(const Field& phi, int N, const Guardrail& guardrail = {});

// psi * W, renormalized.
NBodyState apply_weight(const NBodyState& state, const DysonWeight& weight);

double norm(const NBodyState& state);
NBodyState normalized(NBodyState state);

// Average over all N! slot permutations, renormalized.
NBodyState symmetrize(const NBodyState& state);

// max |psi - P psi| / max |psi| over adjacent transpositions P.
double symmetry_defect(const NBodyState& state);

// sum_{i<j} V(x_i - x_j) at every node; V indexed by displacement.
std::vector<double> pair_potential_diagonal(const Grid& grid, int N, const Field& V);

// (-sum_j Delta_j + sum_{i<j} V(x_i - x_j)) psi
std::vector<cplx> apply_hamiltonian(const NBodyState& state, const Field& V,
                                    const Guardrail& guardrail = {});

cplx inner_product(const NBodyState& a, const NBodyState& b);

double energy(const NBodyState& state, const Field& V);

// <H psi, H psi> / N^2 under H.
double h_squared_proxy(const NBodyState& state, const Field& V);

enum class SplittingScheme { lie, strang };

struct EvolutionParams {
  double dt = 1e-3;
  double t_end = 0.0;
  // Steps between stored snapshots; 0 keeps only the initial and final state.
  int snapshot_every = 0;
  SplittingScheme scheme = SplittingScheme::strang;
  // Pair potential sampled on the one-particle grid.
  Field potential;
  Guardrail guardrail{};
  // Relative energy drift that raises the drift flag.
  double drift_tolerance = 1e-3;
};

struct NBodyTrajectory {
  std::vector<NBodyState> snapshots;
  std::vector<double> energies;
  double max_energy_drift = 0.0;
  bool drift_flag = false;
};

// Number of steps for (dt, t_end); throws unless t_end is a multiple of dt.
long step_count(double dt, double t_end);

NBodyTrajectory evolve(const NBodyState& initial, const EvolutionParams& params);

}  // namespace gplab
