#include "gplab/condensate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "gplab/fewbody.hpp"

namespace gplab {

double mass(const Field& u) {
  double s = 0.0;
  for (cplx v : u.values) s += std::norm(v);
  return s * u.grid.cell_volume();
}

namespace {

double kinetic_energy(const Field& u) {
  const Spectrum s = forward_transform(u);
  const auto k2 = u.grid.squared_wavenumbers();
  double e = 0.0;
  for (std::size_t i = 0; i < k2.size(); ++i) e += k2[i] * std::norm(s.coefficients[i]);
  return e;
}

Field density(const Field& u) {
  Field rho(u.grid);
  for (std::size_t i = 0; i < u.values.size(); ++i) rho[i] = std::norm(u[i]);
  return rho;
}

// Strang step: half nonlinear phase, exact kinetic flow, half nonlinear phase.
// The nonlinear sub-flow leaves |u| invariant, so its phase is exact.
CondensateTrajectory split_step(const CondensateState& initial, const FlowParams& params,
                                const std::function<std::vector<double>(const Field&)>& potential,
                                const std::function<double(const Field&)>& energy_of) {
  const Grid& grid = initial.u.grid;
  const long steps = step_count(params.dt, params.t_end);
  require(params.snapshot_every >= 0, "snapshot_every must be >= 0");
  const long stride = params.snapshot_every == 0 ? std::max(steps, 1L) : params.snapshot_every;
  const int d = grid.dim();
  const int M = grid.points_per_axis();
  const double dt = params.dt;
  const auto k2 = grid.squared_wavenumbers();
  std::vector<cplx> kphase(grid.size());
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) kphase[i] = std::polar(scale, -k2[i] * dt);

  CondensateTrajectory traj;
  CondensateState state = initial;
  const double e0 = energy_of(state.u);
  traj.snapshots.push_back(state);
  traj.energies.push_back(e0);

  auto nonlinear_half = [&](Field& u) {
    const auto w = potential(u);
    for (std::size_t i = 0; i < u.values.size(); ++i) u[i] *= std::polar(1.0, -0.5 * dt * w[i]);
  };
  for (long step = 1; step <= steps; ++step) {
    nonlinear_half(state.u);
    fft_all(state.u.values, d, M, Direction::forward);
    for (std::size_t i = 0; i < grid.size(); ++i) state.u[i] *= kphase[i];
    fft_all(state.u.values, d, M, Direction::backward);
    nonlinear_half(state.u);
    state.t = initial.t + static_cast<double>(step) * dt;
    if (step % stride == 0 || step == steps) {
      traj.snapshots.push_back(state);
      const double e = energy_of(state.u);
      traj.energies.push_back(e);
      traj.max_energy_drift =
          std::max(traj.max_energy_drift, std::abs(e - e0) / std::max(1.0, std::abs(e0)));
    }
  }
  traj.drift_flag = traj.max_energy_drift > params.drift_tolerance;
  return traj;
}

}  // namespace

double hartree_energy(const Field& u, const Field& V) {
  const Field rho = density(u);
  const Field conv = convolve_periodic(V, rho);
  double pot = 0.0;
  for (std::size_t i = 0; i < rho.values.size(); ++i) pot += conv[i].real() * rho[i].real();
  return kinetic_energy(u) + 0.5 * pot * u.grid.cell_volume();
}

double gp_energy(const Field& u, double a0) {
  double quartic = 0.0;
  for (cplx v : u.values) quartic += std::norm(v) * std::norm(v);
  return kinetic_energy(u) + 4.0 * std::numbers::pi * a0 * quartic * u.grid.cell_volume();
}

double mixed_gp_energy(const DensityKernel& gamma, double a0) {
  require(gamma.k() == 1, "mixed_gp_energy: one-particle kernel required");
  const Grid& g = gamma.grid();
  std::vector<cplx> modes = gamma.data();
  fft_axes(modes, gamma.rank(), g.points_per_axis(), slot_axes(g.dim(), 0, 1), Direction::forward);
  fft_axes(modes, gamma.rank(), g.points_per_axis(), slot_axes(g.dim(), 1, 1), Direction::backward);
  const double side = g.cell_volume() / std::pow(g.length(), 0.5 * g.dim());
  const auto k2 = g.squared_wavenumbers();
  double kinetic = 0.0;
  for (std::size_t p = 0; p < gamma.dim(); ++p) kinetic += k2[p] * modes[p * gamma.dim() + p].real();
  double quartic = 0.0;
  for (std::size_t x = 0; x < gamma.dim(); ++x) {
    const double rho = gamma(x, x).real();
    quartic += rho * rho;
  }
  return kinetic * side * side + 4.0 * std::numbers::pi * a0 * quartic * g.cell_volume();
}

CondensateTrajectory evolve_hartree(const CondensateState& initial, const Field& V,
                                    const FlowParams& params) {
  require(V.grid == initial.u.grid, "evolve_hartree: potential on a different grid");
  auto potential = [&](const Field& u) {
    const Field conv = convolve_periodic(V, density(u));
    std::vector<double> w(conv.values.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = conv[i].real();
    return w;
  };
  return split_step(initial, params, potential,
                    [&](const Field& u) { return hartree_energy(u, V); });
}

CondensateTrajectory evolve_gp(const CondensateState& initial, double a0,
                               const FlowParams& params) {
  require(a0 >= 0.0, "evolve_gp: a0 must be nonnegative");
  const double coupling = 8.0 * std::numbers::pi * a0;
  auto potential = [&](const Field& u) {
    std::vector<double> w(u.values.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = coupling * std::norm(u[i]);
    return w;
  };
  return split_step(initial, params, potential,
                    [&](const Field& u) { return gp_energy(u, a0); });
}

DensityKernel free_kernel_flow(const DensityKernel& gamma, double t) {
  const Grid& g = gamma.grid();
  DensityKernel out = gamma;
  auto& data = out.data();
  fft_all(data, gamma.rank(), g.points_per_axis(), Direction::forward);
  const auto symbol = commutator_symbol(g, gamma.k());
  const double scale = 1.0 / static_cast<double>(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= std::polar(scale, -symbol[i] * t);
  fft_all(data, gamma.rank(), g.points_per_axis(), Direction::backward);
  out.set_time(gamma.t() + t);
  return out;
}

MixedTrajectory evolve_gp_mixed(const DensityKernel& initial, double a0,
                                const FlowParams& params, std::size_t max_dim) {
  require(initial.k() == 1, "evolve_gp_mixed: one-particle kernel required");
  require(a0 >= 0.0, "evolve_gp_mixed: a0 must be nonnegative");
  const Grid& g = initial.grid();
  if (initial.dim() > max_dim) {
    throw GuardrailError("evolve_gp_mixed: kernel dimension " + std::to_string(initial.dim()) +
                         " exceeds " + std::to_string(max_dim));
  }
  const long steps = step_count(params.dt, params.t_end);
  require(params.snapshot_every >= 0, "snapshot_every must be >= 0");
  const long stride = params.snapshot_every == 0 ? std::max(steps, 1L) : params.snapshot_every;
  const double dt = params.dt;
  const double coupling = 8.0 * std::numbers::pi * a0;
  const int rank = initial.rank();
  const int M = g.points_per_axis();
  const std::size_t D = initial.dim();

  const auto symbol = commutator_symbol(g, 1);
  std::vector<cplx> kphase(symbol.size());
  const double scale = 1.0 / static_cast<double>(symbol.size());
  for (std::size_t i = 0; i < symbol.size(); ++i) kphase[i] = std::polar(scale, -symbol[i] * dt);

  MixedTrajectory traj;
  DensityKernel state = initial;
  const double e0 = mixed_gp_energy(state, a0);
  const cplx tr0 = trace(state);
  traj.snapshots.push_back(state);
  traj.energies.push_back(e0);

  // Diagonal gamma(x;x) is invariant under the nonlinear sub-flow.
  auto nonlinear_half = [&](DensityKernel& gamma) {
    std::vector<double> rho(D);
    for (std::size_t x = 0; x < D; ++x) rho[x] = gamma(x, x).real();
    for (std::size_t x = 0; x < D; ++x) {
      for (std::size_t xp = 0; xp < D; ++xp) {
        gamma(x, xp) *= std::polar(1.0, -0.5 * dt * coupling * (rho[x] - rho[xp]));
      }
    }
  };
  for (long step = 1; step <= steps; ++step) {
    nonlinear_half(state);
    fft_all(state.data(), rank, M, Direction::forward);
    for (std::size_t i = 0; i < kphase.size(); ++i) state.data()[i] *= kphase[i];
    fft_all(state.data(), rank, M, Direction::backward);
    nonlinear_half(state);
    state.set_time(initial.t() + static_cast<double>(step) * dt);
    if (step % stride == 0 || step == steps) {
      traj.snapshots.push_back(state);
      const double e = mixed_gp_energy(state, a0);
      traj.energies.push_back(e);
      traj.max_energy_drift =
          std::max(traj.max_energy_drift, std::abs(e - e0) / std::max(1.0, std::abs(e0)));
      traj.max_trace_drift = std::max(traj.max_trace_drift, std::abs(trace(state) - tr0));
    }
  }
  traj.drift_flag = traj.max_energy_drift > params.drift_tolerance || traj.max_trace_drift > 1e-6;
  return traj;
}

}  // namespace gplab
