#pragma once

// Zero-energy two-body scattering, the Neumann problem on a ball, and the
// Dyson product weight. All radial quantities are three-dimensional.

#include <vector>

#include "gplab/error.hpp"
#include "gplab/potentials.hpp"
#include "gplab/torus.hpp"

namespace gplab {

// Radial solution f of (-Delta + V/2) f = 0 normalized so f -> 1 at infinity.
struct ScatteringSolution {
  std::vector<double> r_nodes;
  std::vector<double> f_values;
  std::vector<double> df_values;
  // From the matching condition f(r) = 1 - a0/r at the support edge.
  double a0 = 0.0;
  // Max deviation of f from an integration with 100x tighter tolerance on
  // twice-refined nodes.
  double residual = 0.0;
  double support_radius = 0.0;
  double r_max = 0.0;

  // Cubic Hermite interpolation inside the support, 1 - a0/r outside.
  double f(double r) const;
};

ScatteringSolution solve_zero_energy(const ScaledPotential& V, double r_max,
                                     double tol = 1e-10);
ScatteringSolution solve_zero_energy(const RadialPotential& V, double r_max,
                                     double tol = 1e-10);

// Least-squares fit of 1 - a/r on the exterior nodes (R, r_max]. Throws if the
// fit misfit exceeds 1e-8.
double scattering_length_asymptotic(const ScatteringSolution& sol);

// 4 pi int V(r) f(s r) r^2 dr for V = p V0(s r), where sol solves the base
// potential V0; Gauss-Legendre on each interpolation interval of sol.
double correlated_integral(const ScaledPotential& V, const ScatteringSolution& sol);

// (1 / 8 pi) int V f d^3x.
double scattering_length_integral(const ScaledPotential& V,
                                  const ScatteringSolution& sol);
double scattering_length_integral(const RadialPotential& V,
                                  const ScatteringSolution& sol);

// Lowest Neumann eigenpair of (-Delta + V_a/2)(1 - w) = e (1 - w) on the
// ball of radius ell1, normalized by w(ell1) = 0.
struct NeumannSolution {
  double ell1 = 0.0;
  // Scattering length of V_a.
  double a = 0.0;
  double e = 0.0;
  std::vector<double> r_nodes;
  std::vector<double> w_values;
  // q = e on the ball, 0 outside.
  std::vector<double> q_values;
  int iterations = 0;

  double three_a_over_ell1_cubed() const { return 3.0 * a / (ell1 * ell1 * ell1); }
  double ratio() const { return e / three_a_over_ell1_cubed(); }
  // Linear interpolation, extended by zero for r >= ell1.
  double w(double r) const;
};

NeumannSolution solve_neumann_ball(const ScaledPotential& V_a, double ell1,
                                   double tol = 1e-10);

struct DysonWeight {
  std::vector<double> weight;
  // R / N below the grid spacing.
  bool under_resolved = false;
};

// W(x) = prod_{i<j} f(N |x_i - x_j|) at every N-body node, minimum-image
// distances. Tensor layout matches NBodyState.
DysonWeight dyson_product(const ScatteringSolution& sol, int N, const Grid& grid,
                          const Guardrail& guardrail = {});

}  // namespace gplab
