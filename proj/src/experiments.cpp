#include "gplab/experiments.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <numeric>
#include <variant>

#include "gplab/condensate.hpp"
#include "gplab/dump.hpp"
#include "gplab/error.hpp"
#include "gplab/fewbody.hpp"
#include "gplab/hierarchy.hpp"
#include "gplab/marginals.hpp"
#include "gplab/potentials.hpp"
#include "gplab/scattering.hpp"

namespace gplab {

using json = nlohmann::ordered_json;

std::string version_string() { return GPLAB_VERSION_STRING; }

namespace {

constexpr double pi = std::numbers::pi;

struct Cell {
  std::variant<double, long long> value;
  Cell(double v) : value(v) {}
  Cell(int v) : value(static_cast<long long>(v)) {}
  Cell(long v) : value(static_cast<long long>(v)) {}
  Cell(long long v) : value(v) {}
};

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path) {
    if (!out_) throw IoError("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << "\n";
  }

  void row(std::initializer_list<Cell> cells) {
    bool first = true;
    char buf[64];
    for (const auto& c : cells) {
      if (!first) out_ << ",";
      first = false;
      if (const auto* d = std::get_if<double>(&c.value)) {
        std::snprintf(buf, sizeof buf, "%.12e", *d);
      } else {
        std::snprintf(buf, sizeof buf, "%lld", std::get<long long>(c.value));
      }
      out_ << buf;
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

struct Context {
  const ExperimentConfig& config;
  std::filesystem::path dir;
  std::uint64_t seed;
  Guardrail guardrail;
  json results = json::object();
  json artifacts = json::array();
  json checks = json::object();

  std::filesystem::path artifact(const std::string& name) {
    artifacts.push_back(name);
    return dir / name;
  }
  void check(const std::string& name, bool pass) { checks[name] = pass; }
};

RadialPotential radial(const ExperimentConfig& c) {
  return RadialPotential(parse_family(c.potential.family), c.potential.R, c.potential.lambda);
}

// Pair potential of the N-body Hamiltonian under the configured scaling.
ScaledPotential pair_potential(const ExperimentConfig& c, int N) {
  const RadialPotential V = radial(c);
  if (c.scaling.kind == "gp") return gp_scaled(V, N);
  if (c.scaling.kind == "meanfield") return meanfield_scaled(V, c.scaling.beta, N);
  return ScaledPotential(V);
}

// Potential of the limiting Hartree equation: N times the pair potential.
ScaledPotential hartree_potential(const ExperimentConfig& c, int N) {
  const ScaledPotential pair = pair_potential(c, N);
  return ScaledPotential(pair.base(), pair.scale(), pair.prefactor() * N);
}

Grid grid_of(const ExperimentConfig& c) { return Grid(c.grid.d, c.grid.M, c.grid.L); }

Field profile_of(const ExperimentConfig& c, const Grid& g) {
  OneBodyProfile p;
  p.kind = parse_profile_kind(c.init.profile);
  p.amplitude = c.init.amplitude;
  p.mode = c.init.mode;
  p.width = c.init.width;
  p.center = c.init.center;
  return make_profile(g, p);
}

SplittingScheme scheme_of(const ExperimentConfig& c) {
  return c.time.scheme == "lie" ? SplittingScheme::lie : SplittingScheme::strang;
}

Field sampled(const ScaledPotential& V, const Grid& g, Context& ctx, const std::string& tag) {
  SampledPotential s = sample_on_torus(V, g);
  ctx.results[tag + "_under_resolved"] = s.under_resolved;
  return std::move(s.field);
}

long steps(double t, double dt) { return step_count(dt, t); }

// ---------------------------------------------------------------------------

void run_scatter(Context& ctx) {
  const auto& c = ctx.config;
  const RadialPotential V = radial(c);
  const ScatteringSolution sol = solve_zero_energy(V, c.scatter.r_max, c.scatter.tol);
  const double a_asym = V.is_zero() ? 0.0 : scattering_length_asymptotic(sol);
  const double a_int = scattering_length_integral(V, sol);
  const double b = b0(V);
  const double rel = a_asym == 0.0 ? std::abs(a_int) : std::abs(a_asym - a_int) / a_asym;
  ctx.results["a0"] = sol.a0;
  ctx.results["a0_asym"] = a_asym;
  ctx.results["a0_int"] = a_int;
  ctx.results["a0_relative_difference"] = rel;
  ctx.results["b0"] = b;
  ctx.results["eight_pi_a0"] = 8.0 * pi * a_int;
  ctx.results["eight_pi_a0_over_b0"] = b > 0.0 ? 8.0 * pi * a_int / b : 0.0;
  ctx.results["alpha"] = alpha_diagnostic(V);
  ctx.results["f_residual"] = sol.residual;
  ctx.check("a0_methods_agree_1e-6", rel < 1e-6);
  ctx.check("coupling_gap", 0.0 < 8.0 * pi * a_int && 8.0 * pi * a_int < b);

  {
    CsvWriter csv(ctx.artifact("scattering_profile.csv"), {"r", "f", "df"});
    for (std::size_t i = 0; i < sol.r_nodes.size(); ++i) {
      csv.row({sol.r_nodes[i], sol.f_values[i], sol.df_values[i]});
    }
  }

  if (!c.scatter.ell1_over_a.empty() && !V.is_zero()) {
    CsvWriter csv(ctx.artifact("neumann.csv"),
                  {"ell1_over_a", "ell1", "e", "three_a_over_ell1_cubed", "ratio"});
    json rows = json::array();
    std::vector<double> dev;
    bool band = true;
    for (double q : c.scatter.ell1_over_a) {
      const NeumannSolution n = solve_neumann_ball(ScaledPotential(V), q * sol.a0, c.scatter.tol);
      csv.row({q, n.ell1, n.e, n.three_a_over_ell1_cubed(), n.ratio()});
      rows.push_back({{"ell1_over_a", q}, {"e", n.e}, {"ratio", n.ratio()}});
      dev.push_back(std::abs(n.ratio() - 1.0));
      if (q == 100.0) band = n.ratio() >= 0.95 && n.ratio() <= 1.05;
    }
    bool monotone = true;
    for (std::size_t i = 1; i < dev.size(); ++i) monotone = monotone && dev[i] < dev[i - 1];
    ctx.results["neumann"] = rows;
    ctx.check("neumann_ratio_band_at_100", band);
    ctx.check("neumann_monotone_approach", monotone);
  }
}

void run_coupling(Context& ctx) {
  const auto& c = ctx.config;
  const RadialPotential V = radial(c);
  const ScatteringSolution sol = solve_zero_energy(V, c.scatter.r_max, c.scatter.tol);
  const CouplingStudy study = coupling_constant_study(V, sol, c.hierarchy.N_list);
  CsvWriter csv(ctx.artifact("coupling.csv"), {"N", "I_naive", "I_corr", "gap"});
  double worst = 0.0;
  for (const auto& r : study.rows) {
    csv.row({r.N, r.naive, r.correlated, r.gap});
    if (study.eight_pi_a0 > 0.0) {
      worst = std::max(worst, std::abs(r.correlated - study.eight_pi_a0) / study.eight_pi_a0);
    }
  }
  ctx.results["b0"] = study.b0;
  ctx.results["eight_pi_a0"] = study.eight_pi_a0;
  ctx.results["gap"] = study.b0 - study.eight_pi_a0;
  ctx.results["max_relative_deviation_I_corr"] = worst;
  ctx.check("scaling_identity_1e-8", worst < 1e-8);
  ctx.check("coupling_gap", V.is_zero() || (0.0 < study.eight_pi_a0 && study.eight_pi_a0 < study.b0));
}

NBodyState initial_nbody(const ExperimentConfig& c, const Grid& g, int N, const Guardrail& guard) {
  NBodyState state = product_state(profile_of(c, g), N, guard);
  if (c.init.dyson_weight) {
    const RadialPotential V = radial(c);
    const ScatteringSolution sol = solve_zero_energy(V, 20.0 * V.support_radius());
    state = apply_weight(state, dyson_product(sol, N, g, guard));
  }
  return state;
}

void run_evolve_nbody(Context& ctx) {
  const auto& c = ctx.config;
  const Grid g = grid_of(c);
  const Field V = sampled(pair_potential(c, c.N), g, ctx, "potential");
  const NBodyState init = initial_nbody(c, g, c.N, ctx.guardrail);
  EvolutionParams p{.dt = c.time.dt,
                    .t_end = c.time.t_end,
                    .snapshot_every = c.time.snapshot_every,
                    .scheme = scheme_of(c),
                    .potential = V,
                    .guardrail = ctx.guardrail};
  const NBodyTrajectory traj = evolve(init, p);
  double norm_drift = 0.0;
  {
    CsvWriter csv(ctx.artifact("energies.csv"), {"t", "energy", "norm"});
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      const double n = norm(traj.snapshots[i]);
      norm_drift = std::max(norm_drift, std::abs(n - 1.0));
      csv.row({traj.snapshots[i].t, traj.energies[i], n});
    }
  }
  const NBodyState& last = traj.snapshots.back();
  write_dump(ctx.artifact("state_final.bin"), last);
  write_dump(ctx.artifact("gamma1_final.bin"), partial_trace_from_state(last, 1, ctx.guardrail));
  // <psi, H^2 psi> / N^2 at t = 0, reported as a diagnostic only.
  ctx.results["h_squared_proxy_initial"] = h_squared_proxy(init, V);
  ctx.results["energy_initial"] = traj.energies.front();
  ctx.results["energy_final"] = traj.energies.back();
  ctx.results["max_energy_drift"] = traj.max_energy_drift;
  ctx.results["max_norm_drift"] = norm_drift;
  ctx.results["symmetry_defect_final"] = symmetry_defect(last);
  ctx.results["drift_flag"] = traj.drift_flag;
  ctx.check("mass_conserved_1e-8", norm_drift < 1e-8);
  ctx.check("energy_drift_within_tolerance", !traj.drift_flag);
}

void run_evolve_gp(Context& ctx) {
  const auto& c = ctx.config;
  const Grid g = grid_of(c);
  const Field u0 = profile_of(c, g);
  FlowParams p{c.time.dt, c.time.t_end, c.time.snapshot_every, 1e-3};
  CsvWriter csv(ctx.artifact("energies.csv"), {"t", "mass", "energy"});
  double mass_drift = 0.0;
  double drift = 0.0;
  bool flag = false;
  if (c.gp.mode == "mixed") {
    const MixedTrajectory traj = evolve_gp_mixed(pure_state_kernel(u0), c.gp.a0, p);
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      const double m = trace(traj.snapshots[i]).real();
      mass_drift = std::max(mass_drift, std::abs(m - 1.0));
      csv.row({traj.snapshots[i].t(), m, traj.energies[i]});
    }
    write_dump(ctx.artifact("gamma_final.bin"), traj.snapshots.back());
    drift = traj.max_energy_drift;
    flag = traj.drift_flag;
  } else {
    CondensateTrajectory traj;
    if (c.gp.mode == "hartree") {
      const Field V = sampled(hartree_potential(c, c.N), g, ctx, "potential");
      traj = evolve_hartree(CondensateState{u0, 0.0}, V, p);
    } else {
      traj = evolve_gp(CondensateState{u0, 0.0}, c.gp.a0, p);
    }
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      const double m = mass(traj.snapshots[i].u);
      mass_drift = std::max(mass_drift, std::abs(m - 1.0));
      csv.row({traj.snapshots[i].t, m, traj.energies[i]});
    }
    write_dump(ctx.artifact("u_final.bin"), traj.snapshots.back().u, traj.snapshots.back().t);
    drift = traj.max_energy_drift;
    flag = traj.drift_flag;
  }
  ctx.results["mode"] = c.gp.mode;
  ctx.results["max_mass_drift"] = mass_drift;
  ctx.results["max_energy_drift"] = drift;
  ctx.results["drift_flag"] = flag;
  ctx.check("mass_conserved_1e-8", mass_drift < 1e-8);
  ctx.check("energy_drift_within_tolerance", !flag);
}

// Snapshot stride (in steps) that lands on every t and t +- dt_obs.
long observation_stride(const std::vector<double>& times, double dt_obs, double dt) {
  long stride = steps(dt_obs, dt);
  for (double t : times) stride = std::gcd(stride, steps(t, dt));
  return std::max(1L, stride);
}

struct BbgkyAt {
  std::vector<double> residual;
  // ||sum_{i<j<=k} [V(x_i - x_j) - V(x'_i - x'_j)] gamma^(k)||
  std::vector<double> intra_norm;
};

// BBGKY residuals ||i d_t gamma^(k) - rhs|| at time t for k = 1..kmax.
BbgkyAt bbgky_residuals(const ExperimentConfig& c, const Grid& g, const Field& V,
                                    double dt, double dt_obs, double t,
                                    const Guardrail& guard) {
  const long stride = observation_stride({t}, dt_obs, dt);
  EvolutionParams p{.dt = dt,
                    .t_end = t + dt_obs,
                    .snapshot_every = static_cast<int>(stride),
                    .scheme = scheme_of(c),
                    .potential = V,
                    .guardrail = guard};
  const NBodyTrajectory traj = evolve(initial_nbody(c, g, c.N, guard), p);
  auto at = [&](double s) -> const NBodyState& {
    const long idx = steps(s, dt) / stride;
    return traj.snapshots.at(static_cast<std::size_t>(idx));
  };
  const NBodyState& minus = at(t - dt_obs);
  const NBodyState& mid = at(t);
  const NBodyState& plus = at(t + dt_obs);
  BbgkyAt out;
  for (int k = 1; k <= c.hierarchy.k; ++k) {
    MarginalSequence seq(c.hierarchy.nu);
    const DensityKernel gk = partial_trace_from_state(mid, k, guard);
    seq.set(gk);
    // With k = N the collision term drops, leaving kinetic plus intra-cluster.
    const DensityKernel closed = bbgky_rhs(seq, k, V, k);
    out.intra_norm.push_back(hs_distance(closed, kinetic_commutator(gk)));
    if (k < c.N) seq.set(partial_trace_from_state(mid, k + 1, guard));
    const DensityKernel rhs = bbgky_rhs(seq, k, V, c.N);
    out.residual.push_back(time_derivative_residual(partial_trace_from_state(minus, k, guard),
                                                    partial_trace_from_state(plus, k, guard),
                                                    dt_obs, rhs));
  }
  return out;
}

void run_bbgky(Context& ctx) {
  const auto& c = ctx.config;
  const Grid g = grid_of(c);
  const Field V = sampled(pair_potential(c, c.N), g, ctx, "potential");
  CsvWriter csv(ctx.artifact("bbgky_residual.csv"),
                {"t", "k", "dt_obs", "residual", "residual_half", "ratio", "intra_cluster_norm"});
  double worst = 0.0;
  bool ratios_ok = true;
  json rows = json::array();
  for (double t : c.hierarchy.times) {
    const auto at = bbgky_residuals(c, g, V, c.time.dt, c.time.dt_obs, t, ctx.guardrail);
    const auto half_at =
        bbgky_residuals(c, g, V, 0.5 * c.time.dt, 0.5 * c.time.dt_obs, t, ctx.guardrail);
    const auto& full = at.residual;
    const auto& half = half_at.residual;
    for (std::size_t i = 0; i < full.size(); ++i) {
      const double ratio = full[i] / half[i];
      csv.row({t, static_cast<int>(i + 1), c.time.dt_obs, full[i], half[i], ratio,
               at.intra_norm[i]});
      rows.push_back({{"t", t},
                      {"k", i + 1},
                      {"residual", full[i]},
                      {"residual_half", half[i]},
                      {"ratio", ratio},
                      {"intra_cluster_norm", at.intra_norm[i]}});
      worst = std::max(worst, full[i]);
      ratios_ok = ratios_ok && ratio >= 3.0 && ratio <= 5.0;
    }
  }
  ctx.results["rows"] = rows;
  ctx.results["max_residual"] = worst;
  ctx.check("residual_below_5e-4", worst < 5e-4);
  ctx.check("halving_ratio_in_3_5", ratios_ok);
}

DensityKernel kernel_of(const CondensateState& s) {
  DensityKernel g = pure_state_kernel(s.u);
  g.set_time(s.t);
  return g;
}

void run_gph(Context& ctx) {
  const auto& c = ctx.config;
  const Grid g = grid_of(c);
  const double dt = c.time.dt;
  const double dt_obs = c.time.dt_obs;
  double t_last = 0.0;
  for (double t : c.hierarchy.times) t_last = std::max(t_last, t + dt_obs);
  const long stride = observation_stride(c.hierarchy.times, dt_obs, dt);
  FlowParams p{dt, t_last, static_cast<int>(stride), 1e-3};
  const CondensateTrajectory traj = evolve_gp(CondensateState{profile_of(c, g), 0.0}, c.gp.a0, p);
  auto at = [&](double s) -> const CondensateState& {
    return traj.snapshots.at(static_cast<std::size_t>(steps(s, dt) / stride));
  };

  CsvWriter csv(ctx.artifact("gph_residual.csv"), {"t", "k", "dt_obs", "residual"});
  double worst = 0.0;
  json rows = json::array();
  for (double t : c.hierarchy.times) {
    for (int k = 1; k <= c.hierarchy.k; ++k) {
      double r = 0.0;
      {
        const MarginalSequence seq =
            factorized_sequence(kernel_of(at(t)), k, ctx.guardrail, c.hierarchy.nu);
        const DensityKernel rhs = gph_rhs(seq, k, c.gp.a0);
        const MarginalSequence minus =
            factorized_sequence(kernel_of(at(t - dt_obs)), k, ctx.guardrail, c.hierarchy.nu);
        const MarginalSequence plus =
            factorized_sequence(kernel_of(at(t + dt_obs)), k, ctx.guardrail, c.hierarchy.nu);
        r = time_derivative_residual(minus.at(k), plus.at(k), dt_obs, rhs);
      }
      csv.row({t, k, dt_obs, r});
      rows.push_back({{"t", t}, {"k", k}, {"residual", r}});
      worst = std::max(worst, r);
    }
  }
  ctx.results["rows"] = rows;
  ctx.results["max_residual"] = worst;
  ctx.check("residual_below_1e-3", worst < 1e-3);

  // Weak-form test for k = 1 over a uniformly sampled trajectory on [0, t_end].
  if (c.time.t_end > 0.0 && c.time.snapshot_every > 0) {
    FlowParams wp{dt, c.time.t_end, c.time.snapshot_every, 1e-3};
    const CondensateTrajectory wt =
        evolve_gp(CondensateState{profile_of(c, g), 0.0}, c.gp.a0, wp);
    std::vector<MarginalSequence> seqs;
    for (const auto& s : wt.snapshots) {
      MarginalSequence seq(c.hierarchy.nu);
      const DensityKernel k1 = kernel_of(s);
      seq.set(k1);
      seq.set_factor(k1);
      seqs.push_back(std::move(seq));
    }
    const ObservableKernel J = make_observable(g, 1, ctx.seed);
    const double ds = dt * c.time.snapshot_every;
    const double t_weak = ds * static_cast<double>(steps(c.time.t_end, ds));
    const double w = weak_form_residual(seqs, ds, J, c.gp.a0, t_weak);
    ctx.results["weak_form_t"] = t_weak;
    ctx.results["weak_form_residual"] = w;
    ctx.check("weak_form_below_1e-4", w < 1e-4);
  }
}

void run_delta_lemma(Context& ctx) {
  const auto& c = ctx.config;
  const Grid g = grid_of(c);
  const int k = c.hierarchy.k;
  const NBodyState psi = random_smooth_state(g, k + 1, ctx.seed, 2);
  const DensityKernel gamma = density_matrix(psi, ctx.guardrail);
  const ObservableKernel J = make_observable(g, k, ctx.seed + 1);
  const RadialPotential h(PotentialFamily::exp_bump, 1.0, 1.0);
  const auto rows = delta_lemma_ratios(gamma, 1, J.J, h, c.hierarchy.betas);
  CsvWriter csv(ctx.artifact("delta_lemma.csv"), {"beta", "lhs", "lhs_over_sqrt_beta", "ratio"});
  json out = json::array();
  double sup = 0.0;
  bool decreasing = true;
  bool bounded = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    csv.row({r.beta, r.lhs, r.lhs_over_sqrt_beta, r.ratio});
    out.push_back({{"beta", r.beta}, {"lhs", r.lhs}, {"ratio", r.ratio}});
    sup = std::max(sup, r.ratio);
    if (i > 0) decreasing = decreasing && r.lhs < rows[i - 1].lhs;
    bounded = bounded && r.ratio <= 1.5 * rows.front().ratio;
  }
  ctx.results["rows"] = out;
  ctx.results["sup_ratio"] = sup;
  ctx.results["sobolev_trace"] = sobolev_trace(gamma, 1, k + 1);
  ctx.check("lhs_decreasing", decreasing);
  ctx.check("ratio_bounded", bounded);
}

void run_mf(Context& ctx) {
  const auto& c = ctx.config;
  const Grid g = grid_of(c);
  const Field phi = profile_of(c, g);
  CsvWriter csv(ctx.artifact("mf_convergence.csv"), {"N", "t", "hs_distance"});
  json rows = json::array();
  std::vector<double> dist;
  for (int N : c.hierarchy.N_list) {
    const Field V = sampled(pair_potential(c, N), g, ctx, "potential");
    EvolutionParams p{.dt = c.time.dt,
                      .t_end = c.time.t_end,
                      .snapshot_every = 0,
                      .scheme = scheme_of(c),
                      .potential = V,
                      .guardrail = ctx.guardrail};
    const NBodyTrajectory traj = evolve(product_state(phi, N, ctx.guardrail), p);
    const DensityKernel g1 = partial_trace_from_state(traj.snapshots.back(), 1, ctx.guardrail);
    const Field VH = sampled(hartree_potential(c, N), g, ctx, "hartree_potential");
    FlowParams fp{c.time.dt, c.time.t_end, 0, 1e-3};
    const CondensateTrajectory ht = evolve_hartree(CondensateState{phi, 0.0}, VH, fp);
    const double d = hs_distance(g1, pure_state_kernel(ht.snapshots.back().u));
    csv.row({N, c.time.t_end, d});
    rows.push_back({{"N", N}, {"hs_distance", d}});
    dist.push_back(d);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < dist.size(); ++i) decreasing = decreasing && dist[i] < dist[i - 1];
  ctx.results["rows"] = rows;
  ctx.check("distance_strictly_decreasing", decreasing);
}

json config_json(const ExperimentConfig& c) {
  json out = json::object();
  for (const auto& e : config_entries(c)) out[e.section][e.key] = e.value;
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

}  // namespace

RunOutcome run(const ExperimentConfig& config, const std::filesystem::path& out_dir,
               std::uint64_t seed) {
  RunOutcome outcome;
  outcome.violations = validate(config);
  if (!outcome.violations.empty()) {
    bool only_guardrail = true;
    for (const auto& v : outcome.violations) {
      only_guardrail = only_guardrail && v.kind == ViolationKind::guardrail;
    }
    outcome.exit_code = only_guardrail ? exit_guardrail : exit_validation;
    return outcome;
  }

  std::filesystem::create_directories(out_dir);
  Context ctx{config, out_dir, seed, Guardrail{config.max_entries}};
  const auto start = std::chrono::steady_clock::now();
  json error = nullptr;
  std::string status = "ok";
  try {
    const std::string& e = config.experiment;
    if (e == "scatter") run_scatter(ctx);
    else if (e == "coupling-compare") run_coupling(ctx);
    else if (e == "evolve-nbody") run_evolve_nbody(ctx);
    else if (e == "evolve-gp") run_evolve_gp(ctx);
    else if (e == "bbgky-residual") run_bbgky(ctx);
    else if (e == "gph-residual") run_gph(ctx);
    else if (e == "delta-lemma") run_delta_lemma(ctx);
    else if (e == "mf-convergence") run_mf(ctx);
  } catch (const GuardrailError& ex) {
    status = "failed";
    error = {{"kind", "guardrail"}, {"message", ex.what()}};
    outcome.exit_code = exit_guardrail;
  } catch (const NumericalError& ex) {
    status = "failed";
    error = {{"kind", "numerical"}, {"message", ex.what()}};
    outcome.exit_code = exit_failed;
  } catch (const std::exception& ex) {
    status = "failed";
    error = {{"kind", "error"}, {"message", ex.what()}};
    outcome.exit_code = exit_failed;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json report = json::object();
  report["experiment"] = config.experiment;
  report["version"] = version_string();
  report["status"] = status;
  report["config"] = config_json(config);
  report["seed"] = seed;
  report["wall_time_s"] = wall;
  report["results"] = ctx.results;
  report["artifacts"] = ctx.artifacts;
  report["checks"] = ctx.checks;
  report["error"] = error;
  outcome.report_json = report.dump(2) + "\n";
  outcome.report_path = out_dir / "report.json";
  write_text(outcome.report_path, outcome.report_json);
  return outcome;
}

}  // namespace gplab
