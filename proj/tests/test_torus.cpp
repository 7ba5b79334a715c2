#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gplab/error.hpp"
#include "gplab/torus.hpp"

using namespace gplab;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Field periodic_gaussian(const Grid& g, double center, double width) {
  Field f(g);
  const double L = g.length();
  for (std::size_t i = 0; i < g.size(); ++i) {
    double r2 = 0.0;
    for (int c : g.unflatten(i)) {
      double dx = g.position(c) - center;
      dx -= L * std::round(dx / L);
      r2 += dx * dx;
    }
    f[i] = std::exp(-r2 / (2.0 * width * width));
  }
  return f;
}

}  // namespace

TEST_CASE("grid rejects bad shapes") {
  CHECK_THROWS_AS(Grid(0, 8), InvalidArgument);
  CHECK_THROWS_AS(Grid(4, 8), InvalidArgument);
  CHECK_THROWS_AS(Grid(1, 7), InvalidArgument);
  CHECK_THROWS_AS(Grid(1, 2), InvalidArgument);
  CHECK_THROWS_AS(Grid(1, 8, 0.0), InvalidArgument);
  CHECK_NOTHROW(Grid(3, 4));
}

TEST_CASE("flat indices and displacements") {
  const Grid g(2, 8);
  CHECK(g.size() == 64);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.flatten(g.unflatten(i)) == i);
  const std::size_t a = g.flatten({1, 7});
  const std::size_t b = g.flatten({3, 2});
  CHECK(g.unflatten(g.displacement(a, b)) == std::vector<int>{6, 5});
  CHECK(g.min_image_r2(g.flatten({7, 1})) == doctest::Approx(2.0 / 64.0));
}

TEST_CASE("transform of a plane wave is one coefficient") {
  for (int d = 1; d <= 3; ++d) {
    const Grid g(d, 8, 2.0);
    Field f(g);
    const std::vector<int> mode = d == 1 ? std::vector<int>{3}
                                  : d == 2 ? std::vector<int>{-2, 1}
                                           : std::vector<int>{1, 0, -4};
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto c = g.unflatten(i);
      double phase = 0.0;
      for (int a = 0; a < d; ++a) phase += two_pi * mode[a] * g.position(c[a]) / g.length();
      f[i] = std::polar(1.0, phase);
    }
    const Spectrum s = forward_transform(f);
    // ||e^{ikx}||^2 = L^d, all in one coefficient.
    CHECK(std::abs(s.at(mode)) == doctest::Approx(std::pow(g.length(), d * 0.5)));
    double rest = 0.0;
    for (const auto& c : s.coefficients) rest += std::norm(c);
    CHECK(rest == doctest::Approx(std::pow(g.length(), d)));
  }
}

TEST_CASE("Parseval and inverse round trip") {
  const Grid g(2, 16, 1.5);
  Field f = periodic_gaussian(g, 0.4, 0.2);
  for (std::size_t i = 0; i < g.size(); ++i) f[i] *= std::polar(1.0, 0.3 * static_cast<double>(i % 5));
  const Spectrum s = forward_transform(f);
  double sum = 0.0;
  for (const auto& c : s.coefficients) sum += std::norm(c);
  CHECK(sum == doctest::Approx(std::pow(l2_norm(f), 2)).epsilon(1e-13));
  const Field back = inverse_transform(s);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(back[i] - f[i]));
  CHECK(err < 1e-13);
}

TEST_CASE("spectral Laplacian is exact on trigonometric fields") {
  const Grid g(2, 16, 2.0);
  Field f(g);
  const double k1 = two_pi * 2 / 2.0;
  const double k2 = two_pi * 3 / 2.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto c = g.unflatten(i);
    f[i] = std::sin(k1 * g.position(c[0])) * std::cos(k2 * g.position(c[1]));
  }
  const Field lap = apply_laplacian(f);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    err = std::max(err, std::abs(lap[i] + (k1 * k1 + k2 * k2) * f[i]));
  }
  CHECK(err < 1e-10);
}

TEST_CASE("periodic convolution matches direct double sum") {
  for (int d = 1; d <= 2; ++d) {
    const Grid g(d, d == 1 ? 32 : 16, 1.0);
    const Field a = periodic_gaussian(g, 0.3, 0.08);
    const Field b = periodic_gaussian(g, 0.6, 0.12);
    const Field c = convolve_periodic(a, b);
    double err = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) {
      cplx direct = 0.0;
      for (std::size_t y = 0; y < g.size(); ++y) direct += a[y] * b[g.displacement(x, y)];
      direct *= g.cell_volume();
      err = std::max(err, std::abs(direct - c[x]));
    }
    CHECK(err < 1e-10);
  }
}

TEST_CASE("inner product is conjugate linear in the first slot") {
  const Grid g(1, 8);
  Field a(g);
  Field b(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    a[i] = cplx(std::cos(i * 1.0), std::sin(i * 0.5));
    b[i] = cplx(1.0 + i, -0.5 * i);
  }
  Field ia = a;
  for (auto& v : ia.values) v *= cplx(0.0, 1.0);
  const cplx lhs = inner_product(ia, b);
  const cplx rhs = cplx(0.0, -1.0) * inner_product(a, b);
  CHECK(std::abs(lhs - rhs) < 1e-12);
}
