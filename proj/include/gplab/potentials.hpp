#pragma once

// Repulsive, compactly supported radial pair potentials and their scalings.

#include <string>

#include "gplab/torus.hpp"

namespace gplab {

enum class PotentialFamily {
  zero,
  // amplitude * exp(-1 / (1 - (r/R)^2)), smooth
  exp_bump,
  // amplitude * (1 - (r/R)^2)^3, C^2
  poly_bump,
};

PotentialFamily parse_family(const std::string& name);
std::string family_name(PotentialFamily family);

class RadialPotential {
 public:
  RadialPotential(PotentialFamily family, double support_radius,
                  double amplitude);

  double operator()(double r) const;

  PotentialFamily family() const { return family_; }
  double support_radius() const { return R_; }
  double amplitude() const { return amplitude_; }
  double sup_norm() const { return (*this)(0.0); }
  bool is_zero() const {
    return family_ == PotentialFamily::zero || amplitude_ == 0.0;
  }
  RadialPotential with_amplitude(double amplitude) const {
    return RadialPotential(family_, R_, amplitude);
  }

 private:
  PotentialFamily family_;
  double R_;
  double amplitude_;
};

// prefactor * V(scale * r)
class ScaledPotential {
 public:
  explicit ScaledPotential(RadialPotential base, double scale = 1.0,
                           double prefactor = 1.0);

  double operator()(double r) const { return prefactor_ * base_(scale_ * r); }

  const RadialPotential& base() const { return base_; }
  double scale() const { return scale_; }
  double prefactor() const { return prefactor_; }
  double support_radius() const { return base_.support_radius() / scale_; }
  bool is_zero() const { return base_.is_zero() || prefactor_ == 0.0; }

 private:
  RadialPotential base_;
  double scale_;
  double prefactor_;
};

// N^2 V(N x): scattering length a0 / N.
ScaledPotential gp_scaled(const RadialPotential& V, int N);

// (1/N) beta^3 V(beta x). beta = N recovers gp_scaled.
ScaledPotential meanfield_scaled(const RadialPotential& V, double beta, int N);

// Three-dimensional integral 4 pi int_0^R V(r) r^2 dr.
double b0(const RadialPotential& V);
double b0(const ScaledPotential& V);

// ||V||_1 + ||V||_inf in three dimensions.
double alpha_diagnostic(const RadialPotential& V);

// rho a^3 = N (a0/N)^3 for N particles in a unit box.
double diluteness(double a0, int N);

struct SampledPotential {
  Field field;
  // Support radius smaller than the grid spacing.
  bool under_resolved = false;
};

// Value at node x is V(|x|) with the minimum-image distance to the origin;
// indexing by displacement turns this into the periodized pair potential.
SampledPotential sample_on_torus(const ScaledPotential& V, const Grid& grid);

}  // namespace gplab
