#pragma once

// Reduced density matrices, their norms, and the Sobolev trace diagnostic.
//
// A k-particle kernel gamma(x_1..x_k; x'_1..x'_k) is stored as a D x D
// row-major matrix with D = M^{dk}; equivalently a rank 2dk cube tensor whose
// first dk axes are the unprimed variables.

#include <map>
#include <optional>
#include <vector>

#include "gplab/error.hpp"
#include "gplab/fewbody.hpp"
#include "gplab/torus.hpp"

namespace gplab {

class DensityKernel {
 public:
  DensityKernel(const Grid& grid, int k, std::vector<cplx> kernel, double t = 0.0);
  static DensityKernel zeros(const Grid& grid, int k, double t = 0.0);

  const Grid& grid() const { return grid_; }
  int k() const { return k_; }
  double t() const { return t_; }
  void set_time(double t) { t_ = t; }
  // M^{dk}
  std::size_t dim() const { return dim_; }
  int rank() const { return 2 * k_ * grid_.dim(); }
  // h^{dk}
  double cell_volume() const;

  cplx& operator()(std::size_t x, std::size_t xp) { return data_[x * dim_ + xp]; }
  cplx operator()(std::size_t x, std::size_t xp) const { return data_[x * dim_ + xp]; }
  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

 private:
  Grid grid_;
  int k_;
  double t_;
  std::size_t dim_;
  std::vector<cplx> data_;
};

std::size_t kernel_entries(const Grid& grid, int k);

// |psi><psi|
DensityKernel density_matrix(const NBodyState& state, const Guardrail& guardrail = {});

// gamma^(k) = Tr_{k+1..N} |psi><psi|
DensityKernel partial_trace_from_state(const NBodyState& state, int k,
                                       const Guardrail& guardrail = {});

// Traces out the last k - k_out variables of a kernel.
DensityKernel partial_trace(const DensityKernel& gamma, int k_out);

// |phi><phi| for a single-particle field.
DensityKernel pure_state_kernel(const Field& phi);

cplx trace(const DensityKernel& gamma);
// max |gamma(x;x') - conj(gamma(x';x))|
double hermiticity_defect(const DensityKernel& gamma);
// Smallest eigenvalue of the operator h^{dk} gamma. Dense Hermitian solve for
// dim <= 4096, otherwise the minimum Rayleigh quotient over `probes` random
// vectors.
double min_eigenvalue(const DensityKernel& gamma, int probes = 32, unsigned seed = 7);

// h^{dk} composition (a b)(x;x') = int a(x;y) b(y;x') dy
DensityKernel compose(const DensityKernel& a, const DensityKernel& b);

// Simultaneous permutation of unprimed and primed slots.
DensityKernel permute_slots(const DensityKernel& gamma, const std::vector<int>& perm);

// h-weighted L^2 (Hilbert-Schmidt) quantities.
cplx hs_inner(const DensityKernel& a, const DensityKernel& b);
double hs_norm(const DensityKernel& gamma);
double hs_distance(const DensityKernel& a, const DensityKernel& b);

// Fourier symbol sum_j |p_j|^2 - |p'_j|^2 over the rank 2dk mode tensor.
std::vector<double> commutator_symbol(const Grid& grid, int k);

// sum_j (-Delta_{x_j} + Delta_{x'_j}) gamma
DensityKernel kinetic_commutator(const DensityKernel& gamma);

// Tr (1 - Delta_i)(1 - Delta_j) gamma, slots 1-based, i != j.
double sobolev_trace(const DensityKernel& gamma, int i, int j);

// Truncated family {gamma^(k)}. Entries may be sparse in k. When a factor is
// present, entries that are not stored are the tensor powers of the factor,
// evaluated on demand.
class MarginalSequence {
 public:
  explicit MarginalSequence(double nu = 2.0);

  void set(DensityKernel gamma);
  void set_factor(DensityKernel gamma1);
  bool has(int k) const { return entries_.contains(k); }
  bool available(int k) const { return has(k) || factor_.has_value(); }
  const DensityKernel& at(int k) const;
  const std::map<int, DensityKernel>& entries() const { return entries_; }
  const std::optional<DensityKernel>& factor() const { return factor_; }
  double nu() const { return nu_; }
  std::optional<Grid> grid() const;

  // gamma^(k)(x; x') at slot-index tuples (one flat grid index per slot).
  cplx value(int k, std::span<const std::size_t> x, std::span<const std::size_t> xp) const;

 private:
  double nu_;
  std::map<int, DensityKernel> entries_;
  std::optional<DensityKernel> factor_;
};

struct SequenceNorms {
  double minus = 0.0;
  double plus = 0.0;
};

// ||G||_- = sum_k nu^{-k} ||gamma^(k)||_2, ||G||_+ = max_k nu^k ||gamma^(k)||_2
// over stored entries.
SequenceNorms seq_norms(const MarginalSequence& seq, double nu);

// sum over common k of <gamma_a^(k), gamma_b^(k)>
cplx sequence_pairing(const MarginalSequence& a, const MarginalSequence& b);

}  // namespace gplab
