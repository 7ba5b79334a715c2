#include "gplab/potentials.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "gplab/error.hpp"

namespace gplab {

PotentialFamily parse_family(const std::string& name) {
  if (name == "zero") return PotentialFamily::zero;
  if (name == "bump" || name == "exp_bump") return PotentialFamily::exp_bump;
  if (name == "poly" || name == "poly_bump") return PotentialFamily::poly_bump;
  throw InvalidArgument("unknown potential family '" + name + "'");
}

std::string family_name(PotentialFamily family) {
  switch (family) {
    case PotentialFamily::zero:
      return "zero";
    case PotentialFamily::exp_bump:
      return "bump";
    case PotentialFamily::poly_bump:
      return "poly";
  }
  return "unknown";
}

RadialPotential::RadialPotential(PotentialFamily family, double support_radius,
                                 double amplitude)
    : family_(family), R_(support_radius), amplitude_(amplitude) {
  require(support_radius > 0.0 && std::isfinite(support_radius),
          "potential support radius must be positive");
  require(amplitude >= 0.0 && std::isfinite(amplitude),
          "potential amplitude must be nonnegative (repulsive potentials only)");
}

double RadialPotential::operator()(double r) const {
  r = std::abs(r);
  if (r >= R_ || family_ == PotentialFamily::zero) return 0.0;
  const double s2 = (r / R_) * (r / R_);
  const double gap = 1.0 - s2;
  switch (family_) {
    case PotentialFamily::exp_bump:
      return amplitude_ * std::exp(-1.0 / gap);
    case PotentialFamily::poly_bump:
      return amplitude_ * gap * gap * gap;
    case PotentialFamily::zero:
      break;
  }
  return 0.0;
}

ScaledPotential::ScaledPotential(RadialPotential base, double scale,
                                 double prefactor)
    : base_(base), scale_(scale), prefactor_(prefactor) {
  require(scale > 0.0 && std::isfinite(scale), "potential scale must be positive");
  require(prefactor >= 0.0 && std::isfinite(prefactor),
          "potential prefactor must be nonnegative");
}

ScaledPotential gp_scaled(const RadialPotential& V, int N) {
  require(N >= 1, "gp_scaled: N must be >= 1");
  const double n = N;
  return ScaledPotential(V, n, n * n);
}

ScaledPotential meanfield_scaled(const RadialPotential& V, double beta, int N) {
  require(beta >= 1.0, "meanfield_scaled: beta must be >= 1");
  require(N >= 1, "meanfield_scaled: N must be >= 1");
  return ScaledPotential(V, beta, beta * beta * beta / N);
}

namespace {

double radial_integral(const ScaledPotential& V) {
  if (V.is_zero()) return 0.0;
  // Composite Gauss-Legendre; the bumps are smooth inside the support, so a
  // fixed panel count reaches round-off for every scale.
  constexpr int panels = 64;
  const double width = V.support_radius() / panels;
  double value = 0.0;
  for (int i = 0; i < panels; ++i) {
    value += boost::math::quadrature::gauss<double, 20>::integrate(
        [&](double r) { return V(r) * r * r; }, i * width, (i + 1) * width);
  }
  return 4.0 * std::numbers::pi * value;
}

}  // namespace

double b0(const RadialPotential& V) { return radial_integral(ScaledPotential(V)); }
double b0(const ScaledPotential& V) { return radial_integral(V); }

double alpha_diagnostic(const RadialPotential& V) { return b0(V) + V.sup_norm(); }

double diluteness(double a0, int N) {
  require(N >= 1, "diluteness: N must be >= 1");
  const double a = a0 / N;
  return N * a * a * a;
}

SampledPotential sample_on_torus(const ScaledPotential& V, const Grid& grid) {
  require(V.is_zero() || V.support_radius() < 0.5 * grid.length(),
          "potential support radius " + std::to_string(V.support_radius()) +
              " must be below half the box length for the minimum-image "
              "convention");
  SampledPotential out{Field(grid), false};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.field[i] = V(std::sqrt(grid.min_image_r2(i)));
  }
  out.under_resolved = !V.is_zero() && V.support_radius() < grid.spacing();
  return out;
}

}  // namespace gplab
