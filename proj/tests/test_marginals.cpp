#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "gplab/error.hpp"
#include "gplab/hierarchy.hpp"
#include "gplab/marginals.hpp"
#include "gplab/potentials.hpp"

using namespace gplab;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

NBodyState evolved_three_body() {
  const Grid g(1, 8);
  const Field V =
      sample_on_torus(ScaledPotential(RadialPotential(PotentialFamily::exp_bump, 0.3, 30.0)), g).field;
  OneBodyProfile p;
  p.amplitude = 0.4;
  EvolutionParams params{.dt = 1e-3, .t_end = 0.05, .potential = V};
  return evolve(product_state(make_profile(g, p), 3), params).snapshots.back();
}

DensityKernel random_kernel(const Grid& g, int k, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  auto out = DensityKernel::zeros(g, k);
  for (auto& v : out.data()) v = cplx(n(rng), n(rng));
  return out;
}

}  // namespace

TEST_CASE("marginals of a normalized state have unit trace, are Hermitian and positive") {
  const NBodyState s = evolved_three_body();
  for (int k = 1; k <= 3; ++k) {
    const DensityKernel g = partial_trace_from_state(s, k);
    CHECK(trace(g).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(trace(g).imag()) < 1e-14);
    CHECK(hermiticity_defect(g) < 1e-13);
    CHECK(min_eigenvalue(g) > -1e-12);
  }
}

TEST_CASE("nested partial traces agree with direct traces of the state") {
  const NBodyState s = evolved_three_body();
  const DensityKernel g3 = density_matrix(s);
  const DensityKernel g2 = partial_trace_from_state(s, 2);
  const DensityKernel g1 = partial_trace_from_state(s, 1);
  CHECK(hs_distance(partial_trace(g3, 2), g2) < 1e-13);
  CHECK(hs_distance(partial_trace(g3, 1), g1) < 1e-13);
  CHECK(hs_distance(partial_trace(g2, 1), g1) < 1e-13);
}

TEST_CASE("marginals of a symmetric state are slot symmetric") {
  const DensityKernel g2 = partial_trace_from_state(evolved_three_body(), 2);
  CHECK(hs_distance(permute_slots(g2, {1, 0}), g2) < 1e-13);
}

TEST_CASE("product state marginals are tensor powers, pure states are projections") {
  const Grid g(1, 8);
  OneBodyProfile p;
  p.kind = ProfileKind::gaussian;
  p.width = 0.15;
  const Field phi = make_profile(g, p);
  const NBodyState s = product_state(phi, 3);
  const DensityKernel g1 = partial_trace_from_state(s, 1);
  CHECK(hs_distance(g1, pure_state_kernel(phi)) < 1e-14);
  CHECK(hs_distance(compose(g1, g1), g1) < 1e-13);
  const MarginalSequence fac = factorized_sequence(g1, 3);
  CHECK(hs_distance(fac.at(2), partial_trace_from_state(s, 2)) < 1e-13);
  CHECK(hs_distance(fac.at(3), density_matrix(s)) < 1e-13);
}

TEST_CASE("mixed state has a small eigenvalue above zero and purity below one") {
  const Grid g(1, 4);
  OneBodyProfile a;
  a.kind = ProfileKind::plane_wave;
  a.mode = 1;
  OneBodyProfile b = a;
  b.mode = -1;
  DensityKernel mix = pure_state_kernel(make_profile(g, a));
  const DensityKernel other = pure_state_kernel(make_profile(g, b));
  for (std::size_t i = 0; i < mix.data().size(); ++i) {
    mix.data()[i] = 0.5 * (mix.data()[i] + other.data()[i]);
  }
  CHECK(trace(mix).real() == doctest::Approx(1.0));
  CHECK(trace(compose(mix, mix)).real() == doctest::Approx(0.5));
  CHECK(min_eigenvalue(mix) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("Sobolev trace of plane-wave products is (1 + |p|^2)(1 + |q|^2)") {
  const Grid g(1, 8, 2.0);
  OneBodyProfile a;
  a.kind = ProfileKind::plane_wave;
  a.mode = 1;
  OneBodyProfile b = a;
  b.mode = 3;
  const NBodyState s = product_state({make_profile(g, a), make_profile(g, b)});
  const DensityKernel g2 = density_matrix(s);
  // Mode index n along an axis of length L is wavenumber 2 pi n / L, with
  // all axes carrying the same mode.
  const double p2 = std::pow(two_pi * 1 / 2.0, 2);
  const double q2 = std::pow(two_pi * 3 / 2.0, 2);
  CHECK(sobolev_trace(g2, 1, 2) == doctest::Approx((1 + p2) * (1 + q2)).epsilon(1e-12));
}

TEST_CASE("Sobolev trace against dense Laplacian matrices") {
  const NBodyState s = evolved_three_body();
  const DensityKernel g3 = density_matrix(s);
  const Grid& g = s.grid;
  const auto P = static_cast<Eigen::Index>(g.size());
  // One-particle (1 - Delta) assembled from the spectral Laplacian on unit fields.
  Eigen::MatrixXcd A(P, P);
  for (Eigen::Index j = 0; j < P; ++j) {
    Field e(g);
    e[j] = 1.0;
    const Field lap = apply_laplacian(e);
    for (Eigen::Index i = 0; i < P; ++i) A(i, j) = (i == j ? 1.0 : 0.0) - lap[i];
  }
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(P, P);
  auto kron = [](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
    Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j)
        out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
  };
  const auto D = static_cast<Eigen::Index>(g3.dim());
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> G(
      g3.data().data(), D, D);
  // Slots 1 and 3.
  const Eigen::MatrixXcd op = kron(kron(A, I), A);
  const double oracle = (op * G).trace().real() * g3.cell_volume();
  CHECK(sobolev_trace(g3, 1, 3) == doctest::Approx(oracle).epsilon(1e-10));
  CHECK_THROWS_AS(sobolev_trace(g3, 2, 2), InvalidArgument);
}

TEST_CASE("kinetic commutator vanishes on translation-invariant kernels") {
  const Grid g(1, 8);
  const NBodyState s = product_state(make_profile(g, OneBodyProfile{ProfileKind::constant}), 2);
  const DensityKernel k = kinetic_commutator(density_matrix(s));
  CHECK(hs_norm(k) < 1e-12);
}

TEST_CASE("weak norms are dual: |<G1, G2>| <= ||G1||_+ ||G2||_-") {
  std::mt19937_64 rng(42);
  const Grid g(1, 4);
  std::uniform_int_distribution<int> top(1, 3);
  std::uniform_real_distribution<double> scale(0.01, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    MarginalSequence a(2.0);
    MarginalSequence b(2.0);
    const int K = top(rng);
    for (int k = 1; k <= K; ++k) {
      auto x = random_kernel(g, k, rng);
      auto y = random_kernel(g, k, rng);
      const double sx = scale(rng);
      const double sy = scale(rng);
      for (auto& v : x.data()) v *= sx;
      for (auto& v : y.data()) v *= sy;
      a.set(std::move(x));
      b.set(std::move(y));
    }
    const double lhs = std::abs(sequence_pairing(a, b));
    const double rhs = seq_norms(a, 2.0).plus * seq_norms(b, 2.0).minus;
    CHECK(lhs <= rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("sequence accessors") {
  const Grid g(1, 4);
  MarginalSequence seq;
  CHECK_FALSE(seq.grid().has_value());
  CHECK_THROWS_AS(seq.at(1), InvalidArgument);
  seq.set(DensityKernel::zeros(g, 2));
  CHECK(seq.has(2));
  CHECK_FALSE(seq.available(3));
  CHECK_THROWS_AS(seq.set(DensityKernel::zeros(Grid(1, 8), 1)), InvalidArgument);
  CHECK_THROWS_AS(seq.set_factor(DensityKernel::zeros(g, 2)), InvalidArgument);
  CHECK_THROWS_AS(MarginalSequence(1.0), InvalidArgument);
  CHECK_THROWS_AS(partial_trace_from_state(product_state(make_profile(Grid(1, 16), {}), 4), 4,
                                           Guardrail{1000}),
                  GuardrailError);
}
