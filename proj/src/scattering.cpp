#include "gplab/scattering.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

namespace gplab {
namespace {

using OdeState = std::array<double, 2>;

constexpr int kInteriorIntervals = 2000;
constexpr int kExteriorIntervals = 400;

struct RawSolution {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;
};

// u'' = V u / 2 with u(0) = 0, u'(0) = 1.
RawSolution integrate_radial(const ScaledPotential& V, std::span<const double> nodes,
                             double tol) {
  namespace odeint = boost::numeric::odeint;
  RawSolution raw;
  raw.r.reserve(nodes.size());
  auto rhs = [&](const OdeState& y, OdeState& dy, double r) {
    dy[0] = y[1];
    dy[1] = 0.5 * V(r) * y[0];
  };
  OdeState y{0.0, 1.0};
  auto stepper = odeint::make_controlled(tol, tol,
                                         odeint::runge_kutta_fehlberg78<OdeState>());
  const double first_step = nodes.size() > 1 ? (nodes[1] - nodes[0]) : 1e-3;
  try {
    odeint::integrate_times(
        stepper, rhs, y, nodes.begin(), nodes.end(), first_step,
        [&](const OdeState& s, double r) {
          raw.r.push_back(r);
          raw.u.push_back(s[0]);
          raw.du.push_back(s[1]);
        },
        odeint::max_step_checker(1000000));
  } catch (const odeint::step_adjustment_error& e) {
    throw NumericalError(std::string("zero-energy integration failed: ") + e.what());
  } catch (const odeint::no_progress_error& e) {
    throw NumericalError(std::string("zero-energy integration failed: ") + e.what());
  }
  if (raw.r.size() != nodes.size()) {
    throw NumericalError("zero-energy integration did not reach r_max");
  }
  return raw;
}

}  // namespace

double ScatteringSolution::f(double r) const {
  r = std::abs(r);
  if (r > 0.0 && r >= support_radius) return 1.0 - a0 / r;
  auto it = std::upper_bound(r_nodes.begin(), r_nodes.end(), r);
  std::size_t hi = static_cast<std::size_t>(it - r_nodes.begin());
  hi = std::clamp<std::size_t>(hi, 1, r_nodes.size() - 1);
  const std::size_t lo = hi - 1;
  const double h = r_nodes[hi] - r_nodes[lo];
  const double s = (r - r_nodes[lo]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * f_values[lo] + (s3 - 2 * s2 + s) * h * df_values[lo] +
         (-2 * s3 + 3 * s2) * f_values[hi] + (s3 - s2) * h * df_values[hi];
}

ScatteringSolution solve_zero_energy(const ScaledPotential& V, double r_max,
                                     double tol) {
  const double R = V.support_radius();
  require(r_max >= 5.0 * R, "solve_zero_energy: r_max must be >= 5 R");
  require(tol > 0.0, "solve_zero_energy: tol must be positive");

  std::vector<double> nodes;
  nodes.reserve(kInteriorIntervals + kExteriorIntervals + 1);
  for (int i = 0; i <= kInteriorIntervals; ++i) {
    nodes.push_back(R * i / kInteriorIntervals);
  }
  for (int i = 1; i <= kExteriorIntervals; ++i) {
    nodes.push_back(R + (r_max - R) * i / kExteriorIntervals);
  }

  ScatteringSolution sol;
  sol.support_radius = R;
  sol.r_max = r_max;
  sol.r_nodes = nodes;

  if (V.is_zero()) {
    sol.f_values.assign(nodes.size(), 1.0);
    sol.df_values.assign(nodes.size(), 0.0);
    return sol;
  }

  const double ode_tol = std::max(tol * 1e-3, 1e-15);
  const RawSolution raw = integrate_radial(V, nodes, ode_tol);
  // Reference on a twice-refined node set, which forces a different step
  // sequence; compared on the shared nodes.
  std::vector<double> fine;
  fine.reserve(2 * nodes.size());
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    fine.push_back(nodes[i]);
    fine.push_back(0.5 * (nodes[i] + nodes[i + 1]));
  }
  fine.push_back(nodes.back());
  RawSolution ref = integrate_radial(V, fine, std::max(ode_tol * 1e-2, 1e-16));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ref.r[i] = ref.r[2 * i];
    ref.u[i] = ref.u[2 * i];
    ref.du[i] = ref.du[2 * i];
  }
  ref.r.resize(nodes.size());
  ref.u.resize(nodes.size());
  ref.du.resize(nodes.size());

  const std::size_t edge = kInteriorIntervals;
  auto to_f = [&](const RawSolution& s, std::vector<double>& f,
                  std::vector<double>& df) {
    const double slope = s.du.back();
    f.resize(s.r.size());
    df.resize(s.r.size());
    f[0] = 1.0 / slope;
    df[0] = 0.0;
    for (std::size_t i = 1; i < s.r.size(); ++i) {
      if (!(s.u[i] > 0.0)) {
        throw NumericalError(
            "zero-energy solution changed sign: the potential supports a bound "
            "state");
      }
      f[i] = s.u[i] / (slope * s.r[i]);
      df[i] = (s.du[i] * s.r[i] - s.u[i]) / (slope * s.r[i] * s.r[i]);
    }
    return s.r[edge] - s.u[edge] / s.du[edge];
  };

  sol.a0 = to_f(raw, sol.f_values, sol.df_values);
  std::vector<double> f_ref;
  std::vector<double> df_ref;
  to_f(ref, f_ref, df_ref);
  double defect = 0.0;
  for (std::size_t i = 0; i < f_ref.size(); ++i) {
    defect = std::max(defect, std::abs(sol.f_values[i] - f_ref[i]));
  }
  sol.residual = defect;
  if (!(defect < tol)) {
    throw NumericalError("zero-energy integration did not reach tolerance: defect " +
                         std::to_string(defect));
  }
  return sol;
}

ScatteringSolution solve_zero_energy(const RadialPotential& V, double r_max,
                                     double tol) {
  return solve_zero_energy(ScaledPotential(V), r_max, tol);
}

double scattering_length_asymptotic(const ScatteringSolution& sol) {
  require(sol.r_max > sol.support_radius,
          "scattering_length_asymptotic: r_max must exceed the support radius");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < sol.r_nodes.size(); ++i) {
    const double r = sol.r_nodes[i];
    if (r <= sol.support_radius) continue;
    num += (1.0 - sol.f_values[i]) / r;
    den += 1.0 / (r * r);
  }
  require(den > 0.0, "scattering_length_asymptotic: no exterior nodes");
  const double a = num / den;
  double misfit = 0.0;
  for (std::size_t i = 0; i < sol.r_nodes.size(); ++i) {
    const double r = sol.r_nodes[i];
    if (r <= sol.support_radius) continue;
    misfit = std::max(misfit, std::abs(sol.f_values[i] - (1.0 - a / r)));
  }
  if (misfit > 1e-8) {
    throw NumericalError("exterior fit of 1 - a/r has misfit " +
                         std::to_string(misfit) + "; solution is unresolved");
  }
  return a;
}

double correlated_integral(const ScaledPotential& V, const ScatteringSolution& sol) {
  if (V.is_zero()) return 0.0;
  require(std::abs(V.base().support_radius() - sol.support_radius) <=
              1e-12 * sol.support_radius,
          "correlated_integral: solution belongs to a different potential");
  using boost::math::quadrature::gauss;
  const double s = V.scale();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < sol.r_nodes.size() && sol.r_nodes[i] < sol.support_radius; ++i) {
    total += gauss<double, 15>::integrate(
        [&](double r) { return V(r) * sol.f(s * r) * r * r; }, sol.r_nodes[i] / s,
        sol.r_nodes[i + 1] / s);
  }
  return 4.0 * std::numbers::pi * total;
}

double scattering_length_integral(const ScaledPotential& V,
                                  const ScatteringSolution& sol) {
  return correlated_integral(V, sol) / (8.0 * std::numbers::pi);
}

double scattering_length_integral(const RadialPotential& V,
                                  const ScatteringSolution& sol) {
  return scattering_length_integral(ScaledPotential(V), sol);
}

double NeumannSolution::w(double r) const {
  r = std::abs(r);
  if (r >= ell1) return 0.0;
  auto it = std::upper_bound(r_nodes.begin(), r_nodes.end(), r);
  std::size_t hi = std::clamp<std::size_t>(
      static_cast<std::size_t>(it - r_nodes.begin()), 1, r_nodes.size() - 1);
  const std::size_t lo = hi - 1;
  const double s = (r - r_nodes[lo]) / (r_nodes[hi] - r_nodes[lo]);
  return (1.0 - s) * w_values[lo] + s * w_values[hi];
}

NeumannSolution solve_neumann_ball(const ScaledPotential& V_a, double ell1,
                                   double tol) {
  require(tol > 0.0, "solve_neumann_ball: tol must be positive");
  require(!V_a.is_zero(), "solve_neumann_ball: potential must be nonzero");
  const double R = V_a.support_radius();
  const ScatteringSolution scatter = solve_zero_energy(V_a, 10.0 * R, 1e-10);
  const double a = scatter.a0;
  require(ell1 / a >= 10.0, "solve_neumann_ball: ell1 / a must be >= 10");

  // Unknowns u_i = r_i phi(r_i), i = 1..n, r_i = i * dr. Second-order
  // differences, Robin condition u'(ell1) = u(ell1) / ell1 by a ghost node,
  // last row halved so the pencil (A, B) is symmetric with B = diag(1,..,1,1/2).
  const double resolution = std::min(R, ell1) / 400.0;
  const std::size_t n = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(ell1 / resolution)), 4000, 4000000);
  const double dr = ell1 / static_cast<double>(n);
  const double inv_dr2 = 1.0 / (dr * dr);

  std::vector<double> r(n);
  std::vector<double> diag(n);
  std::vector<double> bweight(n, 1.0);
  std::vector<double> potential(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = dr * static_cast<double>(i + 1);
    potential[i] = V_a(r[i]);
    diag[i] = 2.0 * inv_dr2 + 0.5 * potential[i];
  }
  bweight[n - 1] = 0.5;
  diag[n - 1] = inv_dr2 - 1.0 / (dr * ell1) + 0.25 * potential[n - 1];
  const double off = -inv_dr2;

  // Thomas factorization of the constant-off-diagonal tridiagonal A.
  std::vector<double> pivot(n);
  pivot[0] = diag[0];
  for (std::size_t i = 1; i < n; ++i) pivot[i] = diag[i] - off * off / pivot[i - 1];
  auto solve = [&](std::vector<double>& x) {
    for (std::size_t i = 1; i < n; ++i) x[i] -= off / pivot[i - 1] * x[i - 1];
    x[n - 1] /= pivot[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - off * x[i + 1]) / pivot[i];
  };

  // e from r^T A u = e r^T B u, exact for eigenvectors since r spans the
  // kernel of the discrete kinetic part.
  auto eigenvalue = [&](const std::vector<double>& u) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += bweight[i] * r[i] * potential[i] * u[i];
      den += bweight[i] * r[i] * u[i];
    }
    return 0.5 * num / den;
  };

  std::vector<double> u = r;
  double e = eigenvalue(u);
  int iterations = 0;
  bool converged = false;
  for (; iterations < 500; ++iterations) {
    for (std::size_t i = 0; i < n; ++i) u[i] *= bweight[i];
    solve(u);
    const double scale = u[n - 1];
    if (!(std::abs(scale) > 0.0) || !std::isfinite(scale)) {
      throw NumericalError("Neumann inverse iteration broke down");
    }
    for (double& v : u) v /= scale / ell1;
    const double e_next = eigenvalue(u);
    const bool done = std::abs(e_next - e) <= tol * std::abs(e_next);
    e = e_next;
    if (done && iterations > 0) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericalError("Neumann inverse iteration did not converge");

  NeumannSolution sol;
  sol.ell1 = ell1;
  sol.a = a;
  sol.e = e;
  sol.iterations = iterations + 1;
  sol.r_nodes.reserve(n + 1);
  sol.w_values.reserve(n + 1);
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) {
    phi[i] = u[i] / r[i];
    if (!(phi[i] > 0.0)) {
      throw NumericalError("Neumann eigenvector changes sign: not the ground state");
    }
  }
  sol.r_nodes.push_back(0.0);
  sol.w_values.push_back(1.0 - (4.0 * phi[0] - phi[1]) / 3.0);
  for (std::size_t i = 0; i < n; ++i) {
    sol.r_nodes.push_back(r[i]);
    sol.w_values.push_back(1.0 - phi[i]);
  }
  sol.w_values.back() = 0.0;
  sol.q_values.assign(sol.r_nodes.size(), e);
  return sol;
}

DysonWeight dyson_product(const ScatteringSolution& sol, int N, const Grid& grid,
                          const Guardrail& guardrail) {
  require(N >= 1, "dyson_product: N must be >= 1");
  const std::size_t P = grid.size();
  const std::size_t total = checked_pow(P, static_cast<std::size_t>(N));
  guardrail.check(total, "Dyson weight tensor");

  std::vector<double> pair(P);
  for (std::size_t i = 0; i < P; ++i) {
    pair[i] = sol.f(N * std::sqrt(grid.min_image_r2(i)));
  }

  DysonWeight out;
  out.under_resolved = sol.support_radius / N < grid.spacing();
  out.weight.assign(total, 1.0);
  std::vector<std::size_t> slot(N);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (int s = N - 1; s >= 0; --s) {
      slot[s] = rest % P;
      rest /= P;
    }
    double w = 1.0;
    for (int i = 0; i < N; ++i) {
      for (int j = i + 1; j < N; ++j) w *= pair[grid.displacement(slot[i], slot[j])];
    }
    out.weight[flat] = w;
  }
  return out;
}

}  // namespace gplab
