// Acceptance run: one PASS/FAIL line per criterion with its runtime.
// Exits nonzero if any criterion fails.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gplab/condensate.hpp"
#include "gplab/config.hpp"
#include "gplab/experiments.hpp"
#include "gplab/fewbody.hpp"
#include "gplab/hierarchy.hpp"
#include "gplab/marginals.hpp"
#include "gplab/potentials.hpp"
#include "gplab/scattering.hpp"

using namespace gplab;
using json = nlohmann::json;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::filesystem::path scratch_root;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Runs an experiment under its defaults; throws unless it completed.
json run_default(const std::string& name) {
  const auto out = scratch_root / name;
  std::filesystem::remove_all(out);
  const RunOutcome o = run(default_config(name), out, 0);
  if (o.report_json.empty()) throw std::runtime_error(name + " did not run");
  json r = json::parse(o.report_json);
  if (r["status"] != "ok") throw std::runtime_error(name + ": " + r["error"].dump());
  return r;
}

RadialPotential radial(const ExperimentConfig& c) {
  return RadialPotential(parse_family(c.potential.family), c.potential.R, c.potential.lambda);
}

Verdict scattering_consistency() {
  const auto c = default_config("scatter");
  const RadialPotential V = radial(c);
  const ScatteringSolution sol = solve_zero_energy(V, c.scatter.r_max, c.scatter.tol);
  const double a_fit = scattering_length_asymptotic(sol);
  const double a_int = scattering_length_integral(V, sol);
  const double rel = std::abs(a_fit - a_int) / a_fit;
  return {rel < 1e-6, "a0 = " + fmt(a_fit) + ", relative difference " + fmt(rel)};
}

Verdict coupling_gap() {
  const auto c = default_config("coupling-compare");
  const RadialPotential V = radial(c);
  const ScatteringSolution sol = solve_zero_energy(V, c.scatter.r_max, c.scatter.tol);
  const std::vector<int> Ns{10, 100, 1000};
  const CouplingStudy s = coupling_constant_study(V, sol, Ns);
  double worst = 0.0;
  for (const auto& row : s.rows) {
    worst = std::max(worst, std::abs(row.correlated - s.eight_pi_a0) / s.eight_pi_a0);
  }
  const bool gap = 0.0 < s.eight_pi_a0 && s.eight_pi_a0 < s.b0;
  return {gap && worst < 1e-8, "8 pi a0 = " + fmt(s.eight_pi_a0) + " < b0 = " + fmt(s.b0) +
                                   ", max deviation over N " + fmt(worst)};
}

Verdict neumann_eigenvalue() {
  const auto c = default_config("scatter");
  const ScaledPotential V(radial(c));
  const double a = solve_zero_energy(V, c.scatter.r_max, c.scatter.tol).a0;
  std::vector<double> dev;
  double at100 = 0.0;
  std::string detail = "ratios";
  for (double q : {10.0, 100.0, 1000.0}) {
    const NeumannSolution n = solve_neumann_ball(V, q * a, 1e-10);
    const double ratio = n.ratio();
    if (q == 100.0) at100 = ratio;
    dev.push_back(std::abs(ratio - 1.0));
    detail += " " + fmt(ratio);
  }
  const bool band = at100 >= 0.95 && at100 <= 1.05;
  const bool monotone = dev[1] < dev[0] && dev[2] < dev[1];
  return {band && monotone, detail};
}

// exp(-i H t) psi through a dense Hermitian eigendecomposition on the
// 64-dimensional two-particle space.
Verdict fewbody_oracle() {
  const Grid g(1, 8);
  const Field V =
      sample_on_torus(ScaledPotential(RadialPotential(PotentialFamily::exp_bump, 0.25, 0.25)), g)
          .field;
  OneBodyProfile p;
  p.amplitude = 0.3;
  const NBodyState s = product_state(make_profile(g, p), 2);
  const auto D = static_cast<Eigen::Index>(s.psi.size());
  Eigen::MatrixXcd H(D, D);
  for (Eigen::Index j = 0; j < D; ++j) {
    std::vector<cplx> e(static_cast<std::size_t>(D), 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    const auto col = apply_hamiltonian(NBodyState(g, 2, e), V);
    for (Eigen::Index i = 0; i < D; ++i) H(i, j) = col[static_cast<std::size_t>(i)];
  }
  H = 0.5 * (H + H.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(H);
  Eigen::VectorXcd psi(D);
  for (Eigen::Index i = 0; i < D; ++i) psi(i) = s.psi[static_cast<std::size_t>(i)];
  const double t = 0.1;
  Eigen::VectorXcd phases(D);
  for (Eigen::Index i = 0; i < D; ++i) phases(i) = std::polar(1.0, -eig.eigenvalues()(i) * t);
  const Eigen::VectorXcd exact =
      eig.eigenvectors() * (phases.asDiagonal() * (eig.eigenvectors().adjoint() * psi));

  const auto traj = evolve(s, {.dt = 1e-3, .t_end = t, .potential = V});
  const auto& out = traj.snapshots.back().psi;
  double err = 0.0;
  for (Eigen::Index i = 0; i < D; ++i) err += std::norm(out[static_cast<std::size_t>(i)] - exact(i));
  err = std::sqrt(err * s.cell_volume());
  return {err < 1e-6, "L2 distance " + fmt(err)};
}

Verdict bbgky_residual() {
  const json r = run_default("bbgky-residual");
  bool ok = true;
  bool k1 = false;
  bool k2 = false;
  std::string detail;
  for (const auto& row : r["results"]["rows"]) {
    const double res = row["residual"];
    const double ratio = row["ratio"];
    k1 = k1 || row["k"] == 1;
    k2 = k2 || row["k"] == 2;
    ok = ok && res < 5e-4 && ratio >= 3.0 && ratio <= 5.0;
    detail += "k=" + row["k"].dump() + " residual " + fmt(res) + " halving ratio " + fmt(ratio) + "; ";
  }
  return {ok && k1 && k2, detail};
}

Verdict gph_residual() {
  const json r = run_default("gph-residual");
  bool ok = true;
  bool k1 = false;
  bool k2 = false;
  double worst = 0.0;
  double t_max = 0.0;
  for (const auto& row : r["results"]["rows"]) {
    const double res = row["residual"];
    worst = std::max(worst, res);
    t_max = std::max(t_max, row["t"].get<double>());
    k1 = k1 || row["k"] == 1;
    k2 = k2 || row["k"] == 2;
    ok = ok && res < 1e-3 && row["t"].get<double>() <= 0.1 + 1e-12;
  }
  return {ok && k1 && k2, "max residual " + fmt(worst) + " over t <= " + fmt(t_max) +
                              ", k = 1, 2"};
}

Verdict delta_lemma() {
  const json r = run_default("delta-lemma");
  const auto& rows = r["results"]["rows"];
  bool decreasing = true;
  double first_ratio = 0.0;
  double sup = 0.0;
  std::string detail = "ratios";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double ratio = rows[i]["ratio"];
    if (i == 0) first_ratio = ratio;
    if (i > 0) decreasing = decreasing && rows[i]["lhs"].get<double>() < rows[i - 1]["lhs"].get<double>();
    sup = std::max(sup, ratio);
    detail += " " + fmt(ratio);
  }
  const double lhs_drop = rows.back()["lhs"].get<double>() / rows.front()["lhs"].get<double>();
  const bool bounded = sup <= 1.5 * first_ratio;
  detail += ", lhs(0.025)/lhs(0.2) = " + fmt(lhs_drop);
  return {rows.size() == 4 && decreasing && bounded, detail};
}

Verdict mf_convergence() {
  const json r = run_default("mf-convergence");
  const auto& rows = r["results"]["rows"];
  bool decreasing = rows.size() == 4;
  std::string detail = "distances";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double d = rows[i]["hs_distance"];
    if (i > 0) decreasing = decreasing && d < rows[i - 1]["hs_distance"].get<double>();
    detail += " " + fmt(d);
  }
  return {decreasing, detail};
}

// Observed order from final energies at dt, dt/2, dt/4.
double self_convergence_order(const std::vector<double>& e) {
  return std::log2(std::abs(e[0] - e[1]) / std::abs(e[1] - e[2]));
}

Verdict conservation() {
  const std::vector<double> dts{4e-3, 2e-3, 1e-3};
  const double T = 0.2;
  const int stride = 10;
  std::string detail;
  bool ok = true;
  auto record = [&](const char* name, const std::vector<double>& finals, double mass_err) {
    const double order = self_convergence_order(finals);
    ok = ok && mass_err < 1e-8 && order >= 1.8 && order <= 2.2;
    detail += std::string(name) + " mass " + fmt(mass_err) + " order " + fmt(order) + "; ";
  };

  {
    // On M = 16 the largest two-particle symbol times dt = 4e-3 is ~20 rad,
    // past the step-size resonance; M = 8 keeps all three steps asymptotic.
    const Grid g(1, 8);
    const Field V =
        sample_on_torus(ScaledPotential(RadialPotential(PotentialFamily::exp_bump, 0.45, 2.0)), g).field;
    OneBodyProfile p;
    p.amplitude = 0.3;
    const NBodyState s0 = product_state(make_profile(g, p), 2);
    std::vector<double> finals;
    double mass_err = 0.0;
    for (double dt : dts) {
      const auto traj = evolve(s0, {.dt = dt, .t_end = T, .snapshot_every = stride, .potential = V});
      for (const auto& s : traj.snapshots) mass_err = std::max(mass_err, std::abs(norm(s) - 1.0));
      finals.push_back(traj.energies.back());
    }
    record("fewbody", finals, mass_err);
  }
  const Grid g(1, 32);
  OneBodyProfile p;
  p.amplitude = 0.3;
  const Field u0 = make_profile(g, p);
  {
    const Field V =
        sample_on_torus(ScaledPotential(RadialPotential(PotentialFamily::exp_bump, 0.3, 80.0)), g).field;
    std::vector<double> finals;
    double mass_err = 0.0;
    for (double dt : dts) {
      const auto traj = evolve_hartree({u0, 0.0}, V, {.dt = dt, .t_end = T, .snapshot_every = stride});
      for (const auto& s : traj.snapshots) mass_err = std::max(mass_err, std::abs(mass(s.u) - 1.0));
      finals.push_back(traj.energies.back());
    }
    record("hartree", finals, mass_err);
  }
  {
    std::vector<double> finals;
    double mass_err = 0.0;
    for (double dt : dts) {
      const auto traj = evolve_gp({u0, 0.0}, 0.5, {.dt = dt, .t_end = T, .snapshot_every = stride});
      for (const auto& s : traj.snapshots) mass_err = std::max(mass_err, std::abs(mass(s.u) - 1.0));
      finals.push_back(traj.energies.back());
    }
    record("gp", finals, mass_err);
  }
  {
    const Grid gm(1, 16);
    DensityKernel mix = pure_state_kernel(make_profile(gm, p));
    OneBodyProfile q;
    q.kind = ProfileKind::plane_wave;
    q.mode = 1;
    const DensityKernel other = pure_state_kernel(make_profile(gm, q));
    for (std::size_t i = 0; i < mix.data().size(); ++i) {
      mix.data()[i] = 0.6 * mix.data()[i] + 0.4 * other.data()[i];
    }
    std::vector<double> finals;
    double mass_err = 0.0;
    for (double dt : dts) {
      const auto traj = evolve_gp_mixed(mix, 0.5, {.dt = dt, .t_end = T, .snapshot_every = stride});
      for (const auto& s : traj.snapshots) mass_err = std::max(mass_err, std::abs(trace(s).real() - 1.0));
      finals.push_back(traj.energies.back());
    }
    record("mixed-gp", finals, mass_err);
  }
  return {ok, detail};
}

Verdict norm_duality() {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n;
  std::uniform_int_distribution<int> top(1, 3);
  std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
  const Grid g(1, 4);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    MarginalSequence a(2.0);
    MarginalSequence b(2.0);
    const int K = top(rng);
    for (int k = 1; k <= K; ++k) {
      for (auto* seq : {&a, &b}) {
        auto x = DensityKernel::zeros(g, k);
        const double s = std::pow(10.0, log_scale(rng));
        for (auto& v : x.data()) v = s * cplx(n(rng), n(rng));
        seq->set(std::move(x));
      }
    }
    const double lhs = std::abs(sequence_pairing(a, b));
    const double rhs = seq_norms(a, 2.0).plus * seq_norms(b, 2.0).minus;
    worst = std::max(worst, lhs / rhs);
  }
  return {worst <= 1.0, "max |<G1,G2>| / (||G1||+ ||G2||-) = " + fmt(worst)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Verdict()> check;
};

}  // namespace

int main() {
  scratch_root = std::filesystem::temp_directory_path() / "gplab_acceptance";
  std::filesystem::create_directories(scratch_root);
  const std::vector<Criterion> criteria{
      {1, "scattering consistency", 1.0, scattering_consistency},
      {2, "coupling-constant gap", 1.0, coupling_gap},
      {3, "Neumann eigenvalue", 10.0, neumann_eigenvalue},
      {4, "few-body dense oracle", 10.0, fewbody_oracle},
      {5, "BBGKY residual", 120.0, bbgky_residual},
      {6, "factorized GP-hierarchy residual", 60.0, gph_residual},
      {7, "delta-approximation lemma", 30.0, delta_lemma},
      {8, "mean-field convergence trend", 600.0, mf_convergence},
      {9, "conservation suite", 120.0, conservation},
      {10, "norm duality", 10.0, norm_duality},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = v.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s %2d %-34s %8.3f s (budget %g s)  %s%s\n", pass ? "PASS" : "FAIL", c.id,
                c.name, secs, c.budget_s, v.detail.c_str(), in_time ? "" : " [over budget]");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
