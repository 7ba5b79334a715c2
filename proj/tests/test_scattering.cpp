#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "gplab/error.hpp"
#include "gplab/scattering.hpp"

using namespace gplab;

namespace {

constexpr double pi = std::numbers::pi;

// Fixed-step RK4 for u'' = (V/2 - e) u from u(0) = 0, u'(0) = 1 to r = R.
std::array<double, 2> shoot(const ScaledPotential& V, double e, double R, int steps) {
  const double h = R / steps;
  double u = 0.0;
  double du = 1.0;
  auto acc = [&](double r, double y) { return (0.5 * V(r) - e) * y; };
  for (int i = 0; i < steps; ++i) {
    const double r = i * h;
    const double k1u = du, k1v = acc(r, u);
    const double k2u = du + 0.5 * h * k1v, k2v = acc(r + 0.5 * h, u + 0.5 * h * k1u);
    const double k3u = du + 0.5 * h * k2v, k3v = acc(r + 0.5 * h, u + 0.5 * h * k2u);
    const double k4u = du + h * k3v, k4v = acc(r + h, u + h * k3u);
    u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    du += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  return {u, du};
}

double shooting_a0(const ScaledPotential& V) {
  const double R = V.support_radius();
  const auto [u, du] = shoot(V, 0.0, R, 40000);
  return R - u / du;
}

// Neumann ground state by shooting: inside the support by RK4, outside by
// the free solution, root of ell1 u'(ell1) - u(ell1) by bisection.
double shooting_neumann(const ScaledPotential& V, double ell1, double guess) {
  const double R = V.support_radius();
  auto g = [&](double e) {
    const auto [u, du] = shoot(V, e, R, 40000);
    const double k = std::sqrt(e);
    const double s = ell1 - R;
    const double uu = u * std::cos(k * s) + du / k * std::sin(k * s);
    const double dd = -u * k * std::sin(k * s) + du * std::cos(k * s);
    return ell1 * dd - uu;
  };
  double lo = 0.5 * guess;
  double hi = 2.0 * guess;
  REQUIRE(g(lo) * g(hi) < 0.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(lo) * g(mid) <= 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

const RadialPotential default_bump(PotentialFamily::exp_bump, 1.0, 10.0);

}  // namespace

TEST_CASE("a0 agrees with an independent RK4 shooting oracle") {
  for (auto fam : {PotentialFamily::exp_bump, PotentialFamily::poly_bump}) {
    const RadialPotential V(fam, 1.0, 10.0);
    const ScatteringSolution sol = solve_zero_energy(V, 20.0);
    const double oracle = shooting_a0(ScaledPotential(V));
    CHECK(std::abs(sol.a0 - oracle) < 1e-9 * oracle);
    CHECK(sol.residual < 1e-10);
  }
}

TEST_CASE("asymptotic and integral scattering lengths agree") {
  const ScatteringSolution sol = solve_zero_energy(default_bump, 20.0);
  const double a_fit = scattering_length_asymptotic(sol);
  const double a_int = scattering_length_integral(default_bump, sol);
  CHECK(std::abs(a_fit - a_int) < 1e-6 * a_fit);
  CHECK(std::abs(sol.a0 - a_fit) < 1e-9 * a_fit);
  // Repulsive: 0 < 8 pi a0 < b0.
  CHECK(0.0 < 8.0 * pi * a_int);
  CHECK(8.0 * pi * a_int < b0(default_bump));
}

TEST_CASE("f is increasing, 1 - a0 / r outside, and f(0) = 1 / u'(R)") {
  const ScatteringSolution sol = solve_zero_energy(default_bump, 20.0);
  for (std::size_t i = 1; i < sol.f_values.size(); ++i) {
    CHECK(sol.f_values[i] >= sol.f_values[i - 1]);
  }
  for (double r : {1.5, 3.0, 19.0, 40.0}) CHECK(sol.f(r) == doctest::Approx(1.0 - sol.a0 / r).epsilon(1e-10));
  CHECK(sol.f(0.0) > 0.0);
  CHECK(sol.f(0.0) < 1.0);
}

TEST_CASE("Born limit: a0 approaches b0 / 8 pi from below") {
  double previous = 0.0;
  for (double lam : {1.0, 0.1, 0.01, 0.001}) {
    const RadialPotential V = default_bump.with_amplitude(lam);
    const ScatteringSolution sol = solve_zero_energy(V, 20.0);
    const double born = b0(V) / (8.0 * pi);
    const double ratio = sol.a0 / born;
    CHECK(ratio < 1.0);
    CHECK(ratio > previous);
    previous = ratio;
  }
  CHECK(previous > 0.9999);
}

TEST_CASE("zero potential and argument checks") {
  const RadialPotential zero(PotentialFamily::zero, 1.0, 0.0);
  const ScatteringSolution sol = solve_zero_energy(zero, 10.0);
  CHECK(sol.a0 == 0.0);
  CHECK(scattering_length_integral(zero, sol) == 0.0);
  CHECK(sol.f(0.3) == 1.0);
  CHECK_THROWS_AS(solve_zero_energy(default_bump, 4.0), InvalidArgument);
  CHECK_THROWS_AS(solve_zero_energy(default_bump, 20.0, 0.0), InvalidArgument);
}

TEST_CASE("GP scaling shrinks a0 by N") {
  const double a = solve_zero_energy(default_bump, 20.0).a0;
  for (int N : {10, 100}) {
    const ScaledPotential VN = gp_scaled(default_bump, N);
    const ScatteringSolution s = solve_zero_energy(VN, 20.0 / N);
    CHECK(s.a0 * N == doctest::Approx(a).epsilon(1e-9));
  }
}

TEST_CASE("Neumann eigenvalue matches a shooting oracle and approaches 3a / ell1^3") {
  const ScaledPotential V(default_bump);
  const double a = solve_zero_energy(V, 10.0).a0;
  double last_dev = 1e9;
  for (double q : {10.0, 100.0, 1000.0}) {
    const NeumannSolution n = solve_neumann_ball(V, q * a, 1e-12);
    CHECK(n.a == doctest::Approx(a));
    const double oracle = shooting_neumann(V, q * a, n.three_a_over_ell1_cubed());
    CHECK(std::abs(n.e - oracle) < 1e-4 * oracle);
    const double dev = std::abs(n.ratio() - 1.0);
    CHECK(dev < last_dev);
    last_dev = dev;
    CHECK(n.w(q * a) == 0.0);
    CHECK(n.w(0.0) > n.w(0.5 * q * a));
  }
  CHECK_THROWS_AS(solve_neumann_ball(V, 5.0 * a, 1e-10), InvalidArgument);
}

TEST_CASE("Dyson product is the pair table of f(N r)") {
  const ScatteringSolution sol = solve_zero_energy(RadialPotential(PotentialFamily::exp_bump, 1.0, 5.0), 20.0);
  const Grid g(1, 16);
  for (int N : {2, 3}) {
    const DysonWeight w = dyson_product(sol, N, g);
    CHECK(w.weight.size() == static_cast<std::size_t>(std::pow(16, N)));
    CHECK_FALSE(w.under_resolved);
    for (std::size_t i = 0; i < w.weight.size(); i += 37) {
      std::vector<std::size_t> x(N);
      std::size_t rest = i;
      for (int s = N - 1; s >= 0; --s) {
        x[s] = rest % 16;
        rest /= 16;
      }
      double expect = 1.0;
      for (int a = 0; a < N; ++a) {
        for (int b = a + 1; b < N; ++b) {
          expect *= sol.f(N * std::sqrt(g.min_image_r2(g.displacement(x[a], x[b]))));
        }
      }
      CHECK(w.weight[i] == doctest::Approx(expect).epsilon(1e-14));
    }
  }
  CHECK(dyson_product(sol, 5, Grid(1, 4)).under_resolved);
  CHECK_THROWS_AS(dyson_product(sol, 7, Grid(1, 16)), GuardrailError);
}
