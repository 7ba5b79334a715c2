#include "gplab/hierarchy.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace gplab {

namespace {

constexpr double pi = std::numbers::pi;

void split_slots(std::size_t index, std::size_t P, int k, std::size_t* out) {
  for (int s = k - 1; s >= 0; --s) {
    out[s] = index % P;
    index /= P;
  }
}

// Table T[a * P + b] = V(x_a - x_b).
std::vector<cplx> pair_table(const Field& V) {
  const Grid& g = V.grid;
  const std::size_t P = g.size();
  std::vector<cplx> table(P * P);
  for (std::size_t a = 0; a < P; ++a) {
    for (std::size_t b = 0; b < P; ++b) table[a * P + b] = V[g.displacement(a, b)];
  }
  return table;
}

void check_entries(const MarginalSequence& seq, int k, const char* what) {
  require(k >= 1, std::string(what) + ": k must be >= 1");
  if (!seq.has(k)) {
    throw InvalidArgument(std::string(what) + ": missing entry k = " + std::to_string(k));
  }
}

}  // namespace

DensityKernel bbgky_rhs(const MarginalSequence& seq, int k, const Field& V, int N) {
  check_entries(seq, k, "bbgky_rhs");
  require(k <= N, "bbgky_rhs: k must not exceed N");
  const DensityKernel& gamma = seq.at(k);
  require(V.grid == gamma.grid(), "bbgky_rhs: potential grid mismatch");
  const bool collide = k < N;
  if (collide && !seq.available(k + 1)) {
    throw InvalidArgument("bbgky_rhs: missing entry k = " + std::to_string(k + 1));
  }

  DensityKernel out = kinetic_commutator(gamma);
  const Grid& g = gamma.grid();
  const std::size_t P = g.size();
  const std::size_t D = gamma.dim();
  const auto Vt = pair_table(V);
  const double weight = (N - k) * g.cell_volume();

  std::vector<std::size_t> x(k + 1);
  std::vector<std::size_t> xp(k + 1);
  for (std::size_t a = 0; a < D; ++a) {
    split_slots(a, P, k, x.data());
    for (std::size_t b = 0; b < D; ++b) {
      split_slots(b, P, k, xp.data());
      cplx pot = 0.0;
      for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
          pot += Vt[x[i] * P + x[j]] - Vt[xp[i] * P + xp[j]];
        }
      }
      cplx acc = pot * gamma(a, b);
      if (collide) {
        cplx coll = 0.0;
        for (std::size_t y = 0; y < P; ++y) {
          x[k] = y;
          xp[k] = y;
          cplx dv = 0.0;
          for (int j = 0; j < k; ++j) dv += Vt[x[j] * P + y] - Vt[xp[j] * P + y];
          if (dv != 0.0) coll += dv * seq.value(k + 1, x, xp);
        }
        acc += weight * coll;
      }
      out(a, b) += acc;
    }
  }
  return out;
}

DensityKernel gph_rhs(const MarginalSequence& seq, int k, double a0) {
  check_entries(seq, k, "gph_rhs");
  if (!seq.available(k + 1)) {
    throw InvalidArgument("gph_rhs: missing entry k = " + std::to_string(k + 1));
  }
  const DensityKernel& gamma = seq.at(k);
  DensityKernel out = kinetic_commutator(gamma);
  if (a0 == 0.0) return out;
  const std::size_t P = gamma.grid().size();
  const std::size_t D = gamma.dim();
  const double coupling = 8.0 * pi * a0;
  std::vector<std::size_t> x(k + 1);
  std::vector<std::size_t> xp(k + 1);
  for (std::size_t a = 0; a < D; ++a) {
    split_slots(a, P, k, x.data());
    for (std::size_t b = 0; b < D; ++b) {
      split_slots(b, P, k, xp.data());
      cplx acc = 0.0;
      for (int j = 0; j < k; ++j) {
        x[k] = xp[k] = x[j];
        acc += seq.value(k + 1, x, xp);
        x[k] = xp[k] = xp[j];
        acc -= seq.value(k + 1, x, xp);
      }
      out(a, b) += coupling * acc;
    }
  }
  return out;
}

MarginalSequence factorized_sequence(const DensityKernel& gamma1, int K,
                                     const Guardrail& guardrail, double nu) {
  require(gamma1.k() == 1, "factorized_sequence: gamma1 must be a one-particle kernel");
  require(K >= 1 && K <= 3, "factorized_sequence: K must be in [1, 3]");
  const Grid& g = gamma1.grid();
  guardrail.check(kernel_entries(g, K), "factorized_sequence: gamma^(K)");
  MarginalSequence seq(nu);
  seq.set(gamma1);
  DensityKernel current = gamma1;
  const std::size_t D1 = gamma1.dim();
  for (int k = 2; k <= K; ++k) {
    const std::size_t Dp = current.dim();
    const std::size_t D = Dp * D1;
    std::vector<cplx> data(D * D);
    for (std::size_t a = 0; a < Dp; ++a) {
      for (std::size_t b = 0; b < Dp; ++b) {
        const cplx c = current(a, b);
        for (std::size_t y = 0; y < D1; ++y) {
          cplx* row = &data[(a * D1 + y) * D + b * D1];
          for (std::size_t yp = 0; yp < D1; ++yp) row[yp] = c * gamma1(y, yp);
        }
      }
    }
    current = DensityKernel(g, k, std::move(data), gamma1.t());
    seq.set(current);
  }
  seq.set_factor(gamma1);
  return seq;
}

double time_derivative_residual(const DensityKernel& gamma_minus,
                                const DensityKernel& gamma_plus, double delta,
                                const DensityKernel& rhs) {
  require(delta > 0.0, "time_derivative_residual: delta must be positive");
  require(gamma_minus.grid() == rhs.grid() && gamma_plus.grid() == rhs.grid() &&
              gamma_minus.k() == rhs.k() && gamma_plus.k() == rhs.k(),
          "time_derivative_residual: shape mismatch");
  DensityKernel diff = rhs;
  const cplx scale(0.0, 1.0 / (2.0 * delta));
  for (std::size_t i = 0; i < diff.data().size(); ++i) {
    diff.data()[i] = scale * (gamma_plus.data()[i] - gamma_minus.data()[i]) - rhs.data()[i];
  }
  return hs_norm(diff);
}

namespace {

// Seeded complex Gaussian coefficients on the low modes of a rank-`rank`
// tensor, scaled to unit total variance; zero elsewhere.
std::vector<cplx> low_mode_coefficients(const Grid& grid, int rank, std::uint64_t seed,
                                        int max_mode) {
  require(max_mode >= 0 && 2 * max_mode < grid.points_per_axis(),
          "max_mode must resolve on the grid");
  const int M = grid.points_per_axis();
  std::vector<cplx> data(checked_pow(M, rank));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::size_t count = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::size_t rest = i;
    bool low = true;
    for (int ax = 0; ax < rank && low; ++ax) {
      low = std::abs(grid.frequency(static_cast<int>(rest % M))) <= max_mode;
      rest /= M;
    }
    if (low) {
      data[i] = cplx(normal(rng), normal(rng));
      ++count;
    }
  }
  const double norm = 1.0 / std::sqrt(static_cast<double>(count));
  for (auto& c : data) c *= norm;
  return data;
}

}  // namespace

ObservableKernel make_observable(const Grid& grid, int k, std::uint64_t seed, int max_mode) {
  require(k >= 1, "make_observable: k must be >= 1");
  const int rank = 2 * k * grid.dim();
  auto data = low_mode_coefficients(grid, rank, seed, max_mode);
  // Unprimed axes carry e^{+i p x}, primed axes e^{-i q x'}.
  const int half = rank / 2;
  std::vector<int> left(half);
  std::vector<int> right(half);
  for (int a = 0; a < half; ++a) {
    left[a] = a;
    right[a] = half + a;
  }
  const int M = grid.points_per_axis();
  fft_axes(data, rank, M, left, Direction::backward);
  fft_axes(data, rank, M, right, Direction::forward);
  return ObservableKernel{DensityKernel(grid, k, std::move(data)), max_mode, seed};
}

NBodyState random_smooth_state(const Grid& grid, int N, std::uint64_t seed, int max_mode) {
  require(N >= 1, "random_smooth_state: N must be >= 1");
  const int rank = N * grid.dim();
  auto data = low_mode_coefficients(grid, rank, seed, max_mode);
  fft_all(data, rank, grid.points_per_axis(), Direction::backward);
  return normalized(NBodyState(grid, N, std::move(data)));
}

cplx pairing(const DensityKernel& J, const DensityKernel& gamma) {
  return hs_inner(J, gamma);
}

cplx collision_pairing(const DensityKernel& J, const MarginalSequence& seq, int k) {
  require(J.k() == k, "collision_pairing: observable rank mismatch");
  if (!seq.available(k + 1)) {
    throw InvalidArgument("collision_pairing: missing entry k = " + std::to_string(k + 1));
  }
  const std::size_t P = J.grid().size();
  const std::size_t D = J.dim();
  std::vector<std::size_t> x(k + 1);
  std::vector<std::size_t> xp(k + 1);
  cplx total = 0.0;
  for (std::size_t a = 0; a < D; ++a) {
    split_slots(a, P, k, x.data());
    for (std::size_t b = 0; b < D; ++b) {
      const cplx w = std::conj(J(a, b));
      if (w == 0.0) continue;
      split_slots(b, P, k, xp.data());
      cplx acc = 0.0;
      for (int j = 0; j < k; ++j) {
        x[k] = xp[k] = x[j];
        acc += seq.value(k + 1, x, xp);
        x[k] = xp[k] = xp[j];
        acc -= seq.value(k + 1, x, xp);
      }
      total += w * acc;
    }
  }
  const double cell = J.cell_volume();
  return total * cell * cell;
}

double weak_form_residual(std::span<const MarginalSequence> trajectory, double ds,
                          const ObservableKernel& J, double a0, double t) {
  require(ds > 0.0 && t >= 0.0, "weak_form_residual: ds must be positive and t >= 0");
  const double steps = t / ds;
  const auto n = static_cast<std::size_t>(std::llround(steps));
  require(std::abs(steps - static_cast<double>(n)) < 1e-9 * std::max(1.0, steps),
          "weak_form_residual: t must be a multiple of the snapshot spacing");
  if (trajectory.size() < n + 1) {
    throw InvalidArgument("weak_form_residual: trajectory does not cover [0, t]");
  }
  const int k = J.J.k();
  const DensityKernel KJ = kinetic_commutator(J.J);
  auto integrand = [&](const MarginalSequence& seq) {
    // <J, K gamma> = <K J, gamma> since the commutator symbol is real.
    cplx v = hs_inner(KJ, seq.at(k));
    if (a0 != 0.0) v += 8.0 * pi * a0 * collision_pairing(J.J, seq, k);
    return v;
  };
  cplx integral = 0.0;
  if (n > 0) {
    cplx prev = integrand(trajectory[0]);
    for (std::size_t m = 1; m <= n; ++m) {
      const cplx cur = integrand(trajectory[m]);
      integral += 0.5 * ds * (prev + cur);
      prev = cur;
    }
  }
  const cplx lhs = pairing(J.J, trajectory[n].at(k)) - pairing(J.J, trajectory[0].at(k));
  return std::abs(lhs + cplx(0.0, 1.0) * integral);
}

Field MollifiedDelta::sample(const Grid& grid) const {
  require(beta > 0.0, "MollifiedDelta: beta must be positive");
  require(beta >= 2.0 * grid.spacing(), "MollifiedDelta: beta under-resolved (beta < 2h)");
  require(beta * profile.support_radius() < 0.5 * grid.length(),
          "MollifiedDelta: support must fit in half the box");
  Field out(grid);
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = std::sqrt(grid.min_image_r2(i)) / beta;
    const double v = profile(r);
    out[i] = v;
    total += v;
  }
  total *= grid.cell_volume();
  require(total > 0.0, "MollifiedDelta: profile vanishes on the grid");
  for (auto& v : out.values) v /= total;
  return out;
}

std::vector<DeltaLemmaRow> delta_lemma_ratios(const DensityKernel& gamma, int j,
                                              const DensityKernel& J,
                                              const RadialPotential& h_profile,
                                              std::span<const double> betas) {
  const int k = J.k();
  require(gamma.k() == k + 1, "delta_lemma_ratios: gamma must have k + 1 particles");
  require(gamma.grid() == J.grid(), "delta_lemma_ratios: grid mismatch");
  require(j >= 1 && j <= k, "delta_lemma_ratios: slot j out of range");
  for (std::size_t i = 1; i < betas.size(); ++i) {
    require(betas[i] < betas[i - 1], "delta_lemma_ratios: betas must be decreasing");
  }
  const Grid& g = gamma.grid();
  const std::size_t P = g.size();
  const std::size_t D = J.dim();
  const double sob = sobolev_trace(gamma, j, k + 1);
  const double cell_k = J.cell_volume();
  const double h_d = g.cell_volume();

  std::vector<Field> deltas;
  for (double beta : betas) deltas.push_back(MollifiedDelta{h_profile, beta}.sample(g));

  std::vector<cplx> smooth(betas.size(), 0.0);
  cplx sharp = 0.0;
  std::vector<std::size_t> x(k);
  std::vector<cplx> diag(P);
  for (std::size_t a = 0; a < D; ++a) {
    split_slots(a, P, k, x.data());
    for (std::size_t b = 0; b < D; ++b) {
      const cplx w = J(a, b);
      if (w == 0.0) continue;
      for (std::size_t y = 0; y < P; ++y) diag[y] = gamma(a * P + y, b * P + y);
      sharp += w * diag[x[j - 1]];
      for (std::size_t q = 0; q < betas.size(); ++q) {
        const Field& dl = deltas[q];
        cplx acc = 0.0;
        for (std::size_t y = 0; y < P; ++y) acc += dl[g.displacement(x[j - 1], y)] * diag[y];
        smooth[q] += w * acc * h_d;
      }
    }
  }
  std::vector<DeltaLemmaRow> rows;
  for (std::size_t q = 0; q < betas.size(); ++q) {
    DeltaLemmaRow row;
    row.beta = betas[q];
    row.lhs = std::abs(smooth[q] - sharp) * cell_k * cell_k;
    row.lhs_over_sqrt_beta = row.lhs / std::sqrt(row.beta);
    row.ratio = sob > 0.0 ? row.lhs_over_sqrt_beta / sob : 0.0;
    rows.push_back(row);
  }
  return rows;
}

CouplingStudy coupling_constant_study(const RadialPotential& V, const ScatteringSolution& sol,
                                      std::span<const int> N_list) {
  CouplingStudy study;
  study.b0 = b0(V);
  study.eight_pi_a0 = V.is_zero() ? 0.0 : 8.0 * pi * scattering_length_integral(V, sol);
  for (int N : N_list) {
    require(N >= 1, "coupling_constant_study: N must be >= 1");
    CouplingRow row;
    row.N = N;
    if (!V.is_zero()) {
      const ScaledPotential VN(V, N, static_cast<double>(N) * N * N);
      row.naive = b0(VN);
      row.correlated = correlated_integral(VN, sol);
    }
    row.gap = row.naive - row.correlated;
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace gplab
