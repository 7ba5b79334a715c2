#include "gplab/marginals.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

namespace gplab {

using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t kernel_entries(const Grid& grid, int k) {
  const std::size_t dim = checked_pow(grid.size(), static_cast<std::size_t>(k));
  return dim > (std::size_t{1} << 31) ? static_cast<std::size_t>(-1) : dim * dim;
}

DensityKernel::DensityKernel(const Grid& grid, int k, std::vector<cplx> kernel, double t)
    : grid_(grid), k_(k), t_(t), dim_(0), data_(std::move(kernel)) {
  require(k >= 1, "DensityKernel: k must be >= 1");
  dim_ = checked_pow(grid.size(), static_cast<std::size_t>(k));
  require(data_.size() == kernel_entries(grid, k), "DensityKernel: size mismatch");
}

DensityKernel DensityKernel::zeros(const Grid& grid, int k, double t) {
  return DensityKernel(grid, k, std::vector<cplx>(kernel_entries(grid, k)), t);
}

double DensityKernel::cell_volume() const { return std::pow(grid_.cell_volume(), k_); }

DensityKernel density_matrix(const NBodyState& state, const Guardrail& guardrail) {
  return partial_trace_from_state(state, state.N, guardrail);
}

DensityKernel partial_trace_from_state(const NBodyState& state, int k,
                                       const Guardrail& guardrail) {
  require(k >= 1 && k <= state.N, "partial_trace_from_state: k out of range");
  guardrail.check(kernel_entries(state.grid, k), "k-particle kernel");
  const std::size_t dk = checked_pow(state.grid.size(), static_cast<std::size_t>(k));
  const std::size_t rest = state.psi.size() / dk;
  Eigen::Map<const RowMatrix> psi(state.psi.data(), static_cast<Eigen::Index>(dk),
                                  static_cast<Eigen::Index>(rest));
  std::vector<cplx> out(dk * dk);
  Eigen::Map<RowMatrix> gamma(out.data(), static_cast<Eigen::Index>(dk),
                              static_cast<Eigen::Index>(dk));
  const double weight = std::pow(state.grid.cell_volume(), state.N - k);
  gamma.noalias() = weight * (psi * psi.adjoint());
  return DensityKernel(state.grid, k, std::move(out), state.t);
}

DensityKernel partial_trace(const DensityKernel& gamma, int k_out) {
  require(k_out >= 1 && k_out <= gamma.k(), "partial_trace: k_out out of range");
  if (k_out == gamma.k()) return gamma;
  const Grid& g = gamma.grid();
  const std::size_t dout = checked_pow(g.size(), static_cast<std::size_t>(k_out));
  const std::size_t rest = gamma.dim() / dout;
  const double weight = std::pow(g.cell_volume(), gamma.k() - k_out);
  auto out = DensityKernel::zeros(g, k_out, gamma.t());
  for (std::size_t x = 0; x < dout; ++x) {
    for (std::size_t xp = 0; xp < dout; ++xp) {
      cplx s = 0.0;
      for (std::size_t r = 0; r < rest; ++r) s += gamma(x * rest + r, xp * rest + r);
      out(x, xp) = weight * s;
    }
  }
  return out;
}

DensityKernel pure_state_kernel(const Field& phi) {
  const std::size_t P = phi.grid.size();
  auto out = DensityKernel::zeros(phi.grid, 1);
  for (std::size_t x = 0; x < P; ++x) {
    for (std::size_t xp = 0; xp < P; ++xp) out(x, xp) = phi[x] * std::conj(phi[xp]);
  }
  return out;
}

cplx trace(const DensityKernel& gamma) {
  cplx s = 0.0;
  for (std::size_t x = 0; x < gamma.dim(); ++x) s += gamma(x, x);
  return s * gamma.cell_volume();
}

double hermiticity_defect(const DensityKernel& gamma) {
  double defect = 0.0;
  for (std::size_t x = 0; x < gamma.dim(); ++x) {
    for (std::size_t xp = x; xp < gamma.dim(); ++xp) {
      defect = std::max(defect, std::abs(gamma(x, xp) - std::conj(gamma(xp, x))));
    }
  }
  return defect;
}

double min_eigenvalue(const DensityKernel& gamma, int probes, unsigned seed) {
  const auto n = static_cast<Eigen::Index>(gamma.dim());
  Eigen::Map<const RowMatrix> g(gamma.data().data(), n, n);
  const double w = gamma.cell_volume();
  if (gamma.dim() <= 4096) {
    RowMatrix h = 0.5 * w * (g + g.adjoint());
    Eigen::SelfAdjointEigenSolver<RowMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double lowest = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd v(n);
  for (int p = 0; p < probes; ++p) {
    for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(normal(rng), normal(rng));
    v.normalize();
    lowest = std::min(lowest, w * (v.adjoint() * (g * v))(0).real());
  }
  return lowest;
}

DensityKernel compose(const DensityKernel& a, const DensityKernel& b) {
  require(a.grid() == b.grid() && a.k() == b.k(), "compose: shape mismatch");
  const auto n = static_cast<Eigen::Index>(a.dim());
  Eigen::Map<const RowMatrix> ma(a.data().data(), n, n);
  Eigen::Map<const RowMatrix> mb(b.data().data(), n, n);
  auto out = DensityKernel::zeros(a.grid(), a.k(), a.t());
  Eigen::Map<RowMatrix> mo(out.data().data(), n, n);
  mo.noalias() = a.cell_volume() * (ma * mb);
  return out;
}

DensityKernel permute_slots(const DensityKernel& gamma, const std::vector<int>& perm) {
  const int k = gamma.k();
  require(static_cast<int>(perm.size()) == k, "permute_slots: wrong permutation length");
  const std::size_t P = gamma.grid().size();
  auto permute_index = [&](std::size_t x) {
    std::vector<std::size_t> digits(k);
    for (int s = k - 1; s >= 0; --s) {
      digits[s] = x % P;
      x /= P;
    }
    std::size_t y = 0;
    for (int s = 0; s < k; ++s) y = y * P + digits[perm[s]];
    return y;
  };
  std::vector<std::size_t> map(gamma.dim());
  for (std::size_t x = 0; x < gamma.dim(); ++x) map[x] = permute_index(x);
  auto out = DensityKernel::zeros(gamma.grid(), k, gamma.t());
  for (std::size_t x = 0; x < gamma.dim(); ++x) {
    for (std::size_t xp = 0; xp < gamma.dim(); ++xp) out(x, xp) = gamma(map[x], map[xp]);
  }
  return out;
}

cplx hs_inner(const DensityKernel& a, const DensityKernel& b) {
  require(a.grid() == b.grid() && a.k() == b.k(), "hs_inner: shape mismatch");
  cplx s = 0.0;
  const auto& da = a.data();
  const auto& db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) s += std::conj(da[i]) * db[i];
  return s * (a.cell_volume() * a.cell_volume());
}

double hs_norm(const DensityKernel& gamma) {
  return std::sqrt(std::max(0.0, hs_inner(gamma, gamma).real()));
}

double hs_distance(const DensityKernel& a, const DensityKernel& b) {
  require(a.grid() == b.grid() && a.k() == b.k(), "hs_distance: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += std::norm(a.data()[i] - b.data()[i]);
  return std::sqrt(s) * a.cell_volume();
}

std::vector<double> commutator_symbol(const Grid& grid, int k) {
  std::vector<double> signs(static_cast<std::size_t>(2 * k), 1.0);
  std::fill(signs.begin() + k, signs.end(), -1.0);
  return slot_sum(grid.squared_wavenumbers(), signs);
}

DensityKernel kinetic_commutator(const DensityKernel& gamma) {
  const Grid& g = gamma.grid();
  DensityKernel out = gamma;
  auto& data = out.data();
  fft_all(data, gamma.rank(), g.points_per_axis(), Direction::forward);
  const auto symbol = commutator_symbol(g, gamma.k());
  const double scale = 1.0 / static_cast<double>(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= symbol[i] * scale;
  fft_all(data, gamma.rank(), g.points_per_axis(), Direction::backward);
  return out;
}

double sobolev_trace(const DensityKernel& gamma, int i, int j) {
  const int k = gamma.k();
  require(i != j, "sobolev_trace: slots must differ");
  require(i >= 1 && i <= k && j >= 1 && j <= k, "sobolev_trace: slot out of range");
  const Grid& g = gamma.grid();
  const int d = g.dim();
  const int M = g.points_per_axis();
  // Matrix elements in the plane-wave basis: forward DFT on unprimed axes,
  // backward on primed axes. Only the diagonal p = q enters the trace.
  std::vector<cplx> modes = gamma.data();
  fft_axes(modes, gamma.rank(), M, slot_axes(d, 0, k), Direction::forward);
  fft_axes(modes, gamma.rank(), M, slot_axes(d, k, k), Direction::backward);
  // Each unitary coefficient transform carries h^{dk} L^{-dk/2} per side.
  const double side = gamma.cell_volume() / std::pow(g.length(), 0.5 * d * k);
  const double scale = side * side;
  const auto k2 = g.squared_wavenumbers();
  const std::size_t P = g.size();
  double total = 0.0;
  for (std::size_t p = 0; p < gamma.dim(); ++p) {
    std::size_t rest = p;
    std::vector<std::size_t> digit(k);
    for (int s = k - 1; s >= 0; --s) {
      digit[s] = rest % P;
      rest /= P;
    }
    const double weight = (1.0 + k2[digit[i - 1]]) * (1.0 + k2[digit[j - 1]]);
    total += weight * modes[p * gamma.dim() + p].real();
  }
  return total * scale;
}

MarginalSequence::MarginalSequence(double nu) : nu_(nu) {
  require(nu > 1.0, "MarginalSequence: nu must be > 1");
}

std::optional<Grid> MarginalSequence::grid() const {
  if (!entries_.empty()) return entries_.begin()->second.grid();
  if (factor_) return factor_->grid();
  return std::nullopt;
}

void MarginalSequence::set(DensityKernel gamma) {
  if (auto g = grid()) require(*g == gamma.grid(), "MarginalSequence: grid mismatch");
  const int k = gamma.k();
  entries_.insert_or_assign(k, std::move(gamma));
}

void MarginalSequence::set_factor(DensityKernel gamma1) {
  require(gamma1.k() == 1, "MarginalSequence: factor must be a one-particle kernel");
  if (auto g = grid()) require(*g == gamma1.grid(), "MarginalSequence: grid mismatch");
  factor_ = std::move(gamma1);
}

const DensityKernel& MarginalSequence::at(int k) const {
  auto it = entries_.find(k);
  if (it == entries_.end()) {
    throw InvalidArgument("marginal sequence has no stored entry k = " + std::to_string(k));
  }
  return it->second;
}

cplx MarginalSequence::value(int k, std::span<const std::size_t> x,
                             std::span<const std::size_t> xp) const {
  if (auto it = entries_.find(k); it != entries_.end()) {
    const DensityKernel& g = it->second;
    const std::size_t P = g.grid().size();
    std::size_t a = 0;
    std::size_t b = 0;
    for (int s = 0; s < k; ++s) {
      a = a * P + x[s];
      b = b * P + xp[s];
    }
    return g(a, b);
  }
  if (!factor_) {
    throw InvalidArgument("marginal sequence cannot provide k = " + std::to_string(k));
  }
  cplx v = 1.0;
  for (int s = 0; s < k; ++s) v *= (*factor_)(x[s], xp[s]);
  return v;
}

SequenceNorms seq_norms(const MarginalSequence& seq, double nu) {
  require(nu > 1.0, "seq_norms: nu must be > 1");
  SequenceNorms out;
  for (const auto& [k, gamma] : seq.entries()) {
    const double n = hs_norm(gamma);
    out.minus += std::pow(nu, -k) * n;
    out.plus = std::max(out.plus, std::pow(nu, k) * n);
  }
  return out;
}

cplx sequence_pairing(const MarginalSequence& a, const MarginalSequence& b) {
  cplx s = 0.0;
  for (const auto& [k, gamma] : a.entries()) {
    if (b.has(k)) s += hs_inner(gamma, b.at(k));
  }
  return s;
}

}  // namespace gplab
