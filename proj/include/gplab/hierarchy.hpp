#pragma once

// Residuals of the finite-N BBGKY hierarchy and of the Gross-Pitaevskii
// hierarchy, factorized families, weak-form tests against band-limited
// observables, the mollified-delta estimate, and the coupling-constant study.

#include <cstdint>
#include <span>
#include <vector>

#include "gplab/marginals.hpp"
#include "gplab/potentials.hpp"
#include "gplab/scattering.hpp"

namespace gplab {

// Right-hand side of i d_t gamma^(k) in the N-body hierarchy with pair
// potential V (sampled on the torus, indexed by displacement). For k = N the
// collision term vanishes.
DensityKernel bbgky_rhs(const MarginalSequence& seq, int k, const Field& V, int N);

// Right-hand side of i d_t gamma^(k) in the Gross-Pitaevskii hierarchy; the
// delta integrals are diagonal restrictions of gamma^(k+1).
DensityKernel gph_rhs(const MarginalSequence& seq, int k, double a0);

// Stores gamma^(k) = (x)^k gamma1 for k <= K and keeps gamma1 as the factor
// for on-demand evaluation of higher entries.
MarginalSequence factorized_sequence(const DensityKernel& gamma1, int K,
                                     const Guardrail& guardrail = {}, double nu = 2.0);

// || i (gamma_plus - gamma_minus) / (2 delta) - rhs ||_2
double time_derivative_residual(const DensityKernel& gamma_minus,
                                const DensityKernel& gamma_plus, double delta,
                                const DensityKernel& rhs);

struct ObservableKernel {
  DensityKernel J;
  int max_mode = 2;
  std::uint64_t seed = 0;
};

// J(x;x') = sum c_{pq} e_p(x) conj(e_q(x')) over modes |p_a|, |q_a| <= max_mode
// with seeded Gaussian coefficients.
ObservableKernel make_observable(const Grid& grid, int k, std::uint64_t seed,
                                 int max_mode = 2);

// Normalized N-body state with seeded Gaussian Fourier coefficients on the
// modes |p_a| <= max_mode; a smooth fixture generator.
NBodyState random_smooth_state(const Grid& grid, int N, std::uint64_t seed, int max_mode = 2);

// <J, gamma> = int conj(J) gamma
cplx pairing(const DensityKernel& J, const DensityKernel& gamma);

// Sum over j of int conj(J) [gamma^(k+1)(x, x_j; x', x_j) - gamma^(k+1)(x, x'_j; x', x'_j)]
cplx collision_pairing(const DensityKernel& J, const MarginalSequence& seq, int k);

// Weak-form defect at time t of a trajectory of sequences with uniform
// spacing ds, time integrals by the trapezoid rule.
double weak_form_residual(std::span<const MarginalSequence> trajectory, double ds,
                          const ObservableKernel& J, double a0, double t);

// delta_beta(z) = beta^{-d} h(|z| / beta), normalized to unit integral on the grid.
struct MollifiedDelta {
  RadialPotential profile;
  double beta;

  Field sample(const Grid& grid) const;
};

struct DeltaLemmaRow {
  double beta = 0.0;
  double lhs = 0.0;
  double lhs_over_sqrt_beta = 0.0;
  // lhs / (sqrt(beta) * Tr (1 - Delta_j)(1 - Delta_{k+1}) gamma)
  double ratio = 0.0;
};

// gamma is the (k+1)-particle kernel, J a k-particle observable, j 1-based.
std::vector<DeltaLemmaRow> delta_lemma_ratios(const DensityKernel& gamma, int j,
                                              const DensityKernel& J,
                                              const RadialPotential& h_profile,
                                              std::span<const double> betas);

struct CouplingRow {
  int N = 0;
  // int N^3 V(N x) dx
  double naive = 0.0;
  // int N^3 V(N x) f(N x) dx
  double correlated = 0.0;
  double gap = 0.0;
};

struct CouplingStudy {
  double b0 = 0.0;
  double eight_pi_a0 = 0.0;
  std::vector<CouplingRow> rows;
};

CouplingStudy coupling_constant_study(const RadialPotential& V, const ScatteringSolution& sol,
                                      std::span<const int> N_list);

}  // namespace gplab
