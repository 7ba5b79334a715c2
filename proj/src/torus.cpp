#include "gplab/torus.hpp"

#include <cmath>
#include <numbers>

#include "gplab/error.hpp"

namespace gplab {

Grid::Grid(int d, int M, double L) : d_(d), M_(M), L_(L), size_(0) {
  require(d >= 1 && d <= 3, "grid dimension must be 1, 2 or 3");
  require(M >= 4 && (M & (M - 1)) == 0,
          "points per axis must be a power of two >= 4, got " +
              std::to_string(M));
  require(L > 0.0 && std::isfinite(L), "box length must be positive");
  size_ = checked_pow(static_cast<std::size_t>(M), static_cast<std::size_t>(d));
}

double Grid::cell_volume() const { return std::pow(spacing(), d_); }

std::vector<int> Grid::unflatten(std::size_t index) const {
  std::vector<int> c(d_);
  for (int a = d_ - 1; a >= 0; --a) {
    c[a] = static_cast<int>(index % M_);
    index /= M_;
  }
  return c;
}

std::size_t Grid::flatten(const std::vector<int>& components) const {
  std::size_t index = 0;
  for (int a = 0; a < d_; ++a) {
    index = index * M_ + static_cast<std::size_t>(((components[a] % M_) + M_) % M_);
  }
  return index;
}

std::size_t Grid::displacement(std::size_t a, std::size_t b) const {
  std::size_t disp = 0;
  std::size_t mul = 1;
  for (int ax = 0; ax < d_; ++ax) {
    const std::size_t ca = a % M_;
    const std::size_t cb = b % M_;
    disp += ((ca + M_ - cb) % M_) * mul;
    mul *= M_;
    a /= M_;
    b /= M_;
  }
  return disp;
}

double Grid::min_image_r2(std::size_t index) const {
  double r2 = 0.0;
  for (int c : unflatten(index)) {
    const double x = frequency(c) * spacing();
    r2 += x * x;
  }
  return r2;
}

std::vector<double> Grid::squared_wavenumbers() const {
  std::vector<double> k2(size_);
  const double unit = 2.0 * std::numbers::pi / L_;
  for (std::size_t i = 0; i < size_; ++i) {
    double s = 0.0;
    for (int c : unflatten(i)) {
      const double k = unit * frequency(c);
      s += k * k;
    }
    k2[i] = s;
  }
  return k2;
}

Grid make_grid(int d, int M, double L) { return Grid(d, M, L); }

Field::Field(const Grid& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
  require(values.size() == grid.size(), "field size does not match grid");
}

cplx Spectrum::at(const std::vector<int>& mode) const {
  return coefficients[grid.flatten(mode)];
}

Spectrum forward_transform(const Field& field) {
  require(field.values.size() == field.grid.size(), "field size mismatch");
  Spectrum s{field.grid, field.values};
  const Grid& g = field.grid;
  fft_all(s.coefficients, g.dim(), g.points_per_axis(), Direction::forward);
  const double scale = g.cell_volume() / std::pow(g.length(), 0.5 * g.dim());
  for (auto& c : s.coefficients) c *= scale;
  return s;
}

Field inverse_transform(const Spectrum& spectrum) {
  const Grid& g = spectrum.grid;
  require(spectrum.coefficients.size() == g.size(), "spectrum size mismatch");
  Field f(g, spectrum.coefficients);
  fft_all(f.values, g.dim(), g.points_per_axis(), Direction::backward);
  const double scale = 1.0 / std::pow(g.length(), 0.5 * g.dim());
  for (auto& v : f.values) v *= scale;
  return f;
}

Field apply_laplacian(const Field& field) {
  const Grid& g = field.grid;
  require(field.values.size() == g.size(), "field size mismatch");
  Field out = field;
  fft_all(out.values, g.dim(), g.points_per_axis(), Direction::forward);
  const auto k2 = g.squared_wavenumbers();
  const double norm = 1.0 / static_cast<double>(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out.values[i] *= -k2[i] * norm;
  fft_all(out.values, g.dim(), g.points_per_axis(), Direction::backward);
  return out;
}

Field convolve_periodic(const Field& f, const Field& g) {
  require(f.grid == g.grid, "convolve_periodic: grid mismatch");
  require(f.values.size() == f.grid.size() && g.values.size() == g.grid.size(),
          "convolve_periodic: size mismatch");
  const Grid& grid = f.grid;
  const int d = grid.dim();
  const int M = grid.points_per_axis();
  Field a = f;
  std::vector<cplx> b = g.values;
  fft_all(a.values, d, M, Direction::forward);
  fft_all(b, d, M, Direction::forward);
  const double scale = grid.cell_volume() / static_cast<double>(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) a.values[i] *= b[i] * scale;
  fft_all(a.values, d, M, Direction::backward);
  return a;
}

cplx inner_product(const Field& f, const Field& g) {
  require(f.grid == g.grid, "inner_product: grid mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    s += std::conj(f.values[i]) * g.values[i];
  }
  return s * f.grid.cell_volume();
}

double l2_norm(const Field& f) { return std::sqrt(inner_product(f, f).real()); }

}  // namespace gplab
