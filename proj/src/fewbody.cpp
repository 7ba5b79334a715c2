#include "gplab/fewbody.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace gplab {

NBodyState::NBodyState(const Grid& g, int particles, std::vector<cplx> values,
                       double time)
    : grid(g), N(particles), psi(std::move(values)), t(time) {
  require(N >= 1, "NBodyState: N must be >= 1");
  require(psi.size() == nbody_entries(grid, N), "NBodyState: tensor size mismatch");
}

double NBodyState::cell_volume() const { return std::pow(grid.cell_volume(), N); }

std::size_t nbody_entries(const Grid& grid, int N) {
  return checked_pow(grid.size(), static_cast<std::size_t>(N));
}

ProfileKind parse_profile_kind(const std::string& name) {
  if (name == "constant") return ProfileKind::constant;
  if (name == "cosine") return ProfileKind::cosine;
  if (name == "gaussian") return ProfileKind::gaussian;
  if (name == "plane_wave") return ProfileKind::plane_wave;
  throw InvalidArgument("unknown profile '" + name + "'");
}

Field normalized(Field f) {
  const double n = l2_norm(f);
  require(n > 0.0, "cannot normalize a zero field");
  for (auto& v : f.values) v /= n;
  return f;
}

Field make_profile(const Grid& grid, const OneBodyProfile& profile) {
  Field f(grid);
  const double L = grid.length();
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto c = grid.unflatten(i);
    switch (profile.kind) {
      case ProfileKind::constant:
        f[i] = 1.0;
        break;
      case ProfileKind::cosine: {
        double s = 1.0;
        for (int x : c) s += profile.amplitude * std::cos(two_pi * profile.mode * grid.position(x) / L);
        f[i] = s;
        break;
      }
      case ProfileKind::gaussian: {
        double r2 = 0.0;
        for (int x : c) {
          double dx = grid.position(x) - profile.center * L;
          dx -= L * std::round(dx / L);
          r2 += dx * dx;
        }
        f[i] = std::exp(-r2 / (2.0 * profile.width * profile.width));
        break;
      }
      case ProfileKind::plane_wave: {
        double phase = 0.0;
        for (int x : c) phase += two_pi * profile.mode * grid.position(x) / L;
        f[i] = std::polar(1.0, phase);
        break;
      }
    }
  }
  return normalized(std::move(f));
}

NBodyState product_state(const std::vector<Field>& factors, const Guardrail& guardrail) {
  require(!factors.empty(), "product_state: need at least one factor");
  const Grid& grid = factors.front().grid;
  for (const auto& f : factors) require(f.grid == grid, "product_state: grid mismatch");
  const int N = static_cast<int>(factors.size());
  guardrail.check(nbody_entries(grid, N), "N-body tensor");
  std::vector<cplx> psi{1.0};
  for (const auto& f : factors) {
    std::vector<cplx> next;
    next.reserve(psi.size() * f.values.size());
    for (cplx a : psi) {
      for (cplx b : f.values) next.push_back(a * b);
    }
    psi = std::move(next);
  }
  return normalized(NBodyState(grid, N, std::move(psi)));
}

NBodyState product_state(const Field& phi, int N, const Guardrail& guardrail) {
  require(N >= 1, "product_state: N must be >= 1");
  return product_state(std::vector<Field>(static_cast<std::size_t>(N), phi), guardrail);
}

NBodyState apply_weight(const NBodyState& state, const DysonWeight& weight) {
  require(weight.weight.size() == state.psi.size(), "apply_weight: size mismatch");
  NBodyState out = state;
  for (std::size_t i = 0; i < out.psi.size(); ++i) out.psi[i] *= weight.weight[i];
  return normalized(std::move(out));
}

double norm(const NBodyState& state) {
  double s = 0.0;
  for (cplx v : state.psi) s += std::norm(v);
  return std::sqrt(s * state.cell_volume());
}

NBodyState normalized(NBodyState state) {
  const double n = norm(state);
  require(n > 0.0, "cannot normalize a zero state");
  for (auto& v : state.psi) v /= n;
  return state;
}

namespace {

// Tensor with slots permuted: out[x_perm(0), ..., x_perm(N-1)] = in[x_0..x_{N-1}].
void accumulate_permuted(const std::vector<cplx>& in, std::vector<cplx>& out,
                         std::size_t P, int N, const std::vector<int>& perm) {
  std::vector<std::size_t> stride(N);
  std::size_t s = 1;
  for (int i = N - 1; i >= 0; --i) {
    stride[i] = s;
    s *= P;
  }
  std::vector<std::size_t> digit(N, 0);
  std::size_t target = 0;
  for (std::size_t flat = 0; flat < in.size(); ++flat) {
    out[target] += in[flat];
    // increment odometer on slot digits, updating target incrementally
    for (int i = N - 1; i >= 0; --i) {
      const std::size_t tstride = stride[perm[i]];
      if (++digit[i] < P) {
        target += tstride;
        break;
      }
      digit[i] = 0;
      target -= (P - 1) * tstride;
    }
  }
}

}  // namespace

NBodyState symmetrize(const NBodyState& state) {
  const int N = state.N;
  const std::size_t P = state.grid.size();
  std::vector<int> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<cplx> sum(state.psi.size(), 0.0);
  do {
    accumulate_permuted(state.psi, sum, P, N, perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  NBodyState out(state.grid, N, std::move(sum), state.t);
  if (!(norm(out) > 1e-300)) {
    throw NumericalError("symmetrize: projection onto the bosonic subspace vanished");
  }
  return normalized(std::move(out));
}

double symmetry_defect(const NBodyState& state) {
  const int N = state.N;
  const std::size_t P = state.grid.size();
  double scale = 0.0;
  for (cplx v : state.psi) scale = std::max(scale, std::abs(v));
  if (N < 2 || scale == 0.0) return 0.0;
  double defect = 0.0;
  std::vector<cplx> swapped(state.psi.size());
  for (int i = 0; i + 1 < N; ++i) {
    std::vector<int> perm(N);
    std::iota(perm.begin(), perm.end(), 0);
    std::swap(perm[i], perm[i + 1]);
    std::fill(swapped.begin(), swapped.end(), cplx{0.0});
    accumulate_permuted(state.psi, swapped, P, N, perm);
    for (std::size_t j = 0; j < swapped.size(); ++j) {
      defect = std::max(defect, std::abs(swapped[j] - state.psi[j]));
    }
  }
  return defect / scale;
}

std::vector<double> pair_potential_diagonal(const Grid& grid, int N, const Field& V) {
  require(V.grid == grid, "pair potential sampled on a different grid");
  const std::size_t P = grid.size();
  const std::size_t total = nbody_entries(grid, N);
  std::vector<double> out(total, 0.0);
  if (N < 2) return out;
  std::vector<double> v(P);
  for (std::size_t i = 0; i < P; ++i) v[i] = V[i].real();
  std::vector<std::size_t> slot(N);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (int s = N - 1; s >= 0; --s) {
      slot[s] = rest % P;
      rest /= P;
    }
    double sum = 0.0;
    for (int i = 0; i < N; ++i) {
      for (int j = i + 1; j < N; ++j) sum += v[grid.displacement(slot[i], slot[j])];
    }
    out[flat] = sum;
  }
  return out;
}

namespace {

std::vector<double> kinetic_symbol(const Grid& grid, int N) {
  return slot_sum(grid.squared_wavenumbers(), std::vector<double>(N, 1.0));
}

}  // namespace

std::vector<cplx> apply_hamiltonian(const NBodyState& state, const Field& V,
                                    const Guardrail& guardrail) {
  guardrail.check(state.psi.size(), "N-body tensor");
  const int M = state.grid.points_per_axis();
  std::vector<cplx> kin = state.psi;
  fft_all(kin, state.rank(), M, Direction::forward);
  const auto symbol = kinetic_symbol(state.grid, state.N);
  const double scale = 1.0 / static_cast<double>(kin.size());
  for (std::size_t i = 0; i < kin.size(); ++i) kin[i] *= symbol[i] * scale;
  fft_all(kin, state.rank(), M, Direction::backward);
  const auto vdiag = pair_potential_diagonal(state.grid, state.N, V);
  for (std::size_t i = 0; i < kin.size(); ++i) kin[i] += vdiag[i] * state.psi[i];
  return kin;
}

cplx inner_product(const NBodyState& a, const NBodyState& b) {
  require(a.grid == b.grid && a.N == b.N, "inner_product: shape mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.psi.size(); ++i) s += std::conj(a.psi[i]) * b.psi[i];
  return s * a.cell_volume();
}

double energy(const NBodyState& state, const Field& V) {
  const auto hpsi = apply_hamiltonian(state, V);
  cplx s = 0.0;
  for (std::size_t i = 0; i < hpsi.size(); ++i) s += std::conj(state.psi[i]) * hpsi[i];
  return (s * state.cell_volume()).real();
}

double h_squared_proxy(const NBodyState& state, const Field& V) {
  const auto hpsi = apply_hamiltonian(state, V);
  double s = 0.0;
  for (cplx v : hpsi) s += std::norm(v);
  return s * state.cell_volume() / (static_cast<double>(state.N) * state.N);
}

long step_count(double dt, double t_end) {
  require(dt > 0.0 && std::isfinite(dt), "time step must be positive");
  require(t_end >= 0.0 && std::isfinite(t_end), "t_end must be nonnegative");
  const double steps = t_end / dt;
  const long n = std::lround(steps);
  require(std::abs(steps - static_cast<double>(n)) < 1e-6,
          "t_end must be an integer multiple of dt");
  return n;
}

NBodyTrajectory evolve(const NBodyState& initial, const EvolutionParams& params) {
  const Grid& grid = initial.grid;
  params.guardrail.check(initial.psi.size(), "N-body tensor");
  require(params.potential.grid == grid, "evolve: potential on a different grid");
  require(params.snapshot_every >= 0, "evolve: snapshot_every must be >= 0");
  const long steps = step_count(params.dt, params.t_end);
  const long stride = params.snapshot_every == 0 ? std::max(steps, 1L) : params.snapshot_every;
  const double dt = params.dt;
  const int M = grid.points_per_axis();
  const int rank = initial.rank();
  const std::size_t total = initial.psi.size();

  const auto vdiag = pair_potential_diagonal(grid, initial.N, params.potential);
  const double vfraction = params.scheme == SplittingScheme::strang ? 0.5 : 1.0;
  std::vector<cplx> vphase(total);
  for (std::size_t i = 0; i < total; ++i) vphase[i] = std::polar(1.0, -vdiag[i] * dt * vfraction);
  const auto symbol = kinetic_symbol(grid, initial.N);
  std::vector<cplx> kphase(total);
  const double scale = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < total; ++i) kphase[i] = std::polar(scale, -symbol[i] * dt);

  NBodyTrajectory traj;
  NBodyState state = initial;
  traj.snapshots.push_back(state);
  const double e0 = energy(state, params.potential);
  traj.energies.push_back(e0);
  auto record = [&] {
    traj.snapshots.push_back(state);
    const double e = energy(state, params.potential);
    traj.energies.push_back(e);
    traj.max_energy_drift =
        std::max(traj.max_energy_drift, std::abs(e - e0) / std::max(1.0, std::abs(e0)));
  };

  for (long step = 1; step <= steps; ++step) {
    auto& psi = state.psi;
    for (std::size_t i = 0; i < total; ++i) psi[i] *= vphase[i];
    fft_all(psi, rank, M, Direction::forward);
    for (std::size_t i = 0; i < total; ++i) psi[i] *= kphase[i];
    fft_all(psi, rank, M, Direction::backward);
    if (params.scheme == SplittingScheme::strang) {
      for (std::size_t i = 0; i < total; ++i) psi[i] *= vphase[i];
    }
    state.t = initial.t + static_cast<double>(step) * dt;
    if (step % stride == 0 || step == steps) record();
  }
  traj.drift_flag = traj.max_energy_drift > params.drift_tolerance;
  return traj;
}

}  // namespace gplab
