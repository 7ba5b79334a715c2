#pragma once

// Discretized periodic box [0, L)^d with spectral calculus.

#include <complex>
#include <cstddef>
#include <vector>

#include "gplab/spectral.hpp"

namespace gplab {

class Grid {
 public:
  Grid(int d, int M, double L = 1.0);

  int dim() const { return d_; }
  int points_per_axis() const { return M_; }
  double length() const { return L_; }
  double spacing() const { return L_ / M_; }
  // M^d
  std::size_t size() const { return size_; }
  // h^d, the quadrature weight of one node.
  double cell_volume() const;
  double position(int j) const { return j * spacing(); }
  // Signed mode index in [-M/2, M/2) for FFT position j.
  int frequency(int j) const { return j < M_ / 2 ? j : j - M_; }
  // Per-axis components of a flat node index.
  std::vector<int> unflatten(std::size_t index) const;
  std::size_t flatten(const std::vector<int>& components) const;
  // Flat index of the periodic displacement a - b.
  std::size_t displacement(std::size_t a, std::size_t b) const;
  // Squared minimum-image distance from the node to the origin.
  double min_image_r2(std::size_t index) const;
  // |2 pi k / L|^2 for every flat mode index.
  std::vector<double> squared_wavenumbers() const;

  bool operator==(const Grid& other) const = default;

 private:
  int d_;
  int M_;
  double L_;
  std::size_t size_;
};

Grid make_grid(int d, int M, double L = 1.0);

struct Field {
  Grid grid;
  std::vector<cplx> values;

  explicit Field(const Grid& g) : grid(g), values(g.size()) {}
  Field(const Grid& g, std::vector<cplx> v);

  cplx& operator[](std::size_t i) { return values[i]; }
  const cplx& operator[](std::size_t i) const { return values[i]; }
};

// Coefficients in the orthonormal basis L^{-d/2} e^{2 pi i k.x / L}, stored
// in FFT order. Sum of |c_k|^2 equals the h-weighted L^2 norm squared.
struct Spectrum {
  Grid grid;
  std::vector<cplx> coefficients;

  cplx at(const std::vector<int>& mode) const;
};

Spectrum forward_transform(const Field& field);
Field inverse_transform(const Spectrum& spectrum);

Field apply_laplacian(const Field& field);

// (f * g)(x) = integral over the box of f(y) g(x - y) dy, by h^d-weighted
// periodic sums.
Field convolve_periodic(const Field& f, const Field& g);

// h^d sum conj(f) g
cplx inner_product(const Field& f, const Field& g);
double l2_norm(const Field& f);

}  // namespace gplab
