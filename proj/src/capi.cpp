#include "gplab/gplab.h"

#include <cstdlib>
#include <cstring>
#include <json.hpp>
#include <string>

#include "gplab/condensate.hpp"
#include "gplab/config.hpp"
#include "gplab/experiments.hpp"
#include "gplab/fewbody.hpp"
#include "gplab/marginals.hpp"
#include "gplab/potentials.hpp"
#include "gplab/scattering.hpp"

struct gplab_grid {
  gplab::Grid grid;
};
struct gplab_potential {
  gplab::RadialPotential V;
};
struct gplab_scattering {
  gplab::ScatteringSolution sol;
  gplab::RadialPotential V;
};
struct gplab_field {
  gplab::Field f;
};
struct gplab_nbody {
  gplab::NBodyState state;
};
struct gplab_kernel {
  gplab::DensityKernel gamma;
};

namespace {

thread_local std::string last_error;

gplab_status fail(gplab_status code, const char* message) {
  last_error = message;
  return code;
}

template <typename F>
gplab_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return GPLAB_OK;
  } catch (const gplab::InvalidArgument& e) {
    return fail(GPLAB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const gplab::GuardrailError& e) {
    return fail(GPLAB_ERR_GUARDRAIL, e.what());
  } catch (const gplab::NumericalError& e) {
    return fail(GPLAB_ERR_NUMERICAL, e.what());
  } catch (const gplab::IoError& e) {
    return fail(GPLAB_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(GPLAB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GPLAB_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) throw gplab::InvalidArgument(std::string(what) + " must not be NULL");
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void copy_out(const std::vector<gplab::cplx>& v, double* values, size_t count) {
  if (count != v.size()) throw gplab::InvalidArgument("count does not match the grid size");
  for (size_t i = 0; i < count; ++i) {
    values[2 * i] = v[i].real();
    values[2 * i + 1] = v[i].imag();
  }
}

}  // namespace

extern "C" {

const char* gplab_version(void) {
  static const std::string v = gplab::version_string();
  return v.c_str();
}

const char* gplab_last_error(void) { return last_error.c_str(); }

void gplab_string_free(char* s) { std::free(s); }

gplab_status gplab_grid_create(int d, int M, double L, gplab_grid** out) {
  return guarded([&] {
    need(out, "out");
    *out = new gplab_grid{gplab::Grid(d, M, L)};
  });
}

void gplab_grid_destroy(gplab_grid* grid) { delete grid; }

size_t gplab_grid_size(const gplab_grid* grid) { return grid ? grid->grid.size() : 0; }

gplab_status gplab_potential_create(const char* family, double R, double lambda,
                                    gplab_potential** out) {
  return guarded([&] {
    need(family, "family");
    need(out, "out");
    *out = new gplab_potential{gplab::RadialPotential(gplab::parse_family(family), R, lambda)};
  });
}

void gplab_potential_destroy(gplab_potential* V) { delete V; }

gplab_status gplab_potential_b0(const gplab_potential* V, double scale, double prefactor,
                                double* out) {
  return guarded([&] {
    need(V, "V");
    need(out, "out");
    *out = gplab::b0(gplab::ScaledPotential(V->V, scale, prefactor));
  });
}

gplab_status gplab_scattering_solve(const gplab_potential* V, double r_max, double tol,
                                    gplab_scattering** out) {
  return guarded([&] {
    need(V, "V");
    need(out, "out");
    *out = new gplab_scattering{gplab::solve_zero_energy(V->V, r_max, tol), V->V};
  });
}

void gplab_scattering_destroy(gplab_scattering* sol) { delete sol; }

gplab_status gplab_scattering_lengths(const gplab_scattering* sol, double* a0_asym,
                                      double* a0_int) {
  return guarded([&] {
    need(sol, "sol");
    if (a0_asym) *a0_asym = sol->V.is_zero() ? 0.0 : gplab::scattering_length_asymptotic(sol->sol);
    if (a0_int) *a0_int = gplab::scattering_length_integral(sol->V, sol->sol);
  });
}

gplab_status gplab_scattering_f(const gplab_scattering* sol, double r, double* out) {
  return guarded([&] {
    need(sol, "sol");
    need(out, "out");
    *out = sol->sol.f(r);
  });
}

gplab_status gplab_neumann_solve(const gplab_potential* V, double ell1, double tol, double* e,
                                 double* a) {
  return guarded([&] {
    need(V, "V");
    const auto n = gplab::solve_neumann_ball(gplab::ScaledPotential(V->V), ell1, tol);
    if (e) *e = n.e;
    if (a) *a = n.a;
  });
}

gplab_status gplab_profile_create(const gplab_grid* grid, const char* kind, double amplitude,
                                  int mode, double width, double center, gplab_field** out) {
  return guarded([&] {
    need(grid, "grid");
    need(kind, "kind");
    need(out, "out");
    gplab::OneBodyProfile p;
    p.kind = gplab::parse_profile_kind(kind);
    p.amplitude = amplitude;
    p.mode = mode;
    p.width = width;
    p.center = center;
    *out = new gplab_field{gplab::make_profile(grid->grid, p)};
  });
}

gplab_status gplab_field_create(const gplab_grid* grid, const double* values, size_t count,
                                gplab_field** out) {
  return guarded([&] {
    need(grid, "grid");
    need(values, "values");
    need(out, "out");
    if (count != grid->grid.size()) throw gplab::InvalidArgument("count must equal M^d");
    std::vector<gplab::cplx> v(count);
    for (size_t i = 0; i < count; ++i) v[i] = {values[2 * i], values[2 * i + 1]};
    *out = new gplab_field{gplab::Field(grid->grid, std::move(v))};
  });
}

void gplab_field_destroy(gplab_field* f) { delete f; }

gplab_status gplab_field_values(const gplab_field* f, double* values, size_t count) {
  return guarded([&] {
    need(f, "f");
    need(values, "values");
    copy_out(f->f.values, values, count);
  });
}

gplab_status gplab_nbody_product(const gplab_field* phi, int N, gplab_nbody** out) {
  return guarded([&] {
    need(phi, "phi");
    need(out, "out");
    *out = new gplab_nbody{gplab::product_state(phi->f, N)};
  });
}

void gplab_nbody_destroy(gplab_nbody* state) { delete state; }

gplab_status gplab_nbody_norm(const gplab_nbody* state, double* out) {
  return guarded([&] {
    need(state, "state");
    need(out, "out");
    *out = gplab::norm(state->state);
  });
}

gplab_status gplab_nbody_evolve(const gplab_nbody* state, const gplab_potential* V, double scale,
                                double prefactor, double dt, double t_end, gplab_nbody** out,
                                double* max_energy_drift) {
  return guarded([&] {
    need(state, "state");
    need(out, "out");
    const gplab::Grid& g = state->state.grid;
    gplab::Field pair(g);
    if (V != nullptr) {
      pair = gplab::sample_on_torus(gplab::ScaledPotential(V->V, scale, prefactor), g).field;
    }
    gplab::EvolutionParams p{.dt = dt, .t_end = t_end, .potential = pair};
    auto traj = gplab::evolve(state->state, p);
    if (max_energy_drift) *max_energy_drift = traj.max_energy_drift;
    *out = new gplab_nbody{std::move(traj.snapshots.back())};
  });
}

gplab_status gplab_nbody_marginal(const gplab_nbody* state, int k, gplab_kernel** out) {
  return guarded([&] {
    need(state, "state");
    need(out, "out");
    *out = new gplab_kernel{gplab::partial_trace_from_state(state->state, k)};
  });
}

gplab_status gplab_kernel_pure(const gplab_field* phi, gplab_kernel** out) {
  return guarded([&] {
    need(phi, "phi");
    need(out, "out");
    *out = new gplab_kernel{gplab::pure_state_kernel(phi->f)};
  });
}

void gplab_kernel_destroy(gplab_kernel* gamma) { delete gamma; }

size_t gplab_kernel_dim(const gplab_kernel* gamma) { return gamma ? gamma->gamma.dim() : 0; }

gplab_status gplab_kernel_trace(const gplab_kernel* gamma, double* re, double* im) {
  return guarded([&] {
    need(gamma, "gamma");
    const auto t = gplab::trace(gamma->gamma);
    if (re) *re = t.real();
    if (im) *im = t.imag();
  });
}

gplab_status gplab_kernel_hs_distance(const gplab_kernel* a, const gplab_kernel* b, double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = gplab::hs_distance(a->gamma, b->gamma);
  });
}

gplab_status gplab_gp_evolve(const gplab_field* u0, double a0, double dt, double t_end,
                             gplab_field** out, double* max_energy_drift) {
  return guarded([&] {
    need(u0, "u0");
    need(out, "out");
    gplab::FlowParams p{dt, t_end, 0, 1e-3};
    auto traj = gplab::evolve_gp(gplab::CondensateState{u0->f, 0.0}, a0, p);
    if (max_energy_drift) *max_energy_drift = traj.max_energy_drift;
    *out = new gplab_field{std::move(traj.snapshots.back().u)};
  });
}

gplab_status gplab_validate_config(const char* config_text, char** violations) {
  return guarded([&] {
    need(config_text, "config_text");
    need(violations, "violations");
    const auto found = gplab::validate(gplab::parse_config(config_text));
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& v : found) {
      arr.push_back({{"kind", v.kind == gplab::ViolationKind::guardrail ? "guardrail" : "validation"},
                     {"message", v.message}});
    }
    *violations = duplicate(arr.dump());
  });
}

gplab_status gplab_run(const char* experiment, const char* config_text, const char* out_dir,
                       uint64_t seed, int* exit_code, char** report) {
  return guarded([&] {
    need(out_dir, "out_dir");
    if (experiment == nullptr && config_text == nullptr) {
      throw gplab::InvalidArgument("either experiment or config_text is required");
    }
    gplab::ExperimentConfig config;
    try {
      config = config_text ? gplab::parse_config(config_text, experiment ? experiment : "")
                           : gplab::default_config(experiment);
    } catch (const gplab::InvalidArgument& e) {
      if (exit_code) *exit_code = gplab::exit_validation;
      if (report) *report = duplicate("");
      last_error = e.what();
      return;
    }
    const auto outcome = gplab::run(config, out_dir, seed);
    if (exit_code) *exit_code = outcome.exit_code;
    if (!outcome.violations.empty()) {
      std::string msg;
      for (const auto& v : outcome.violations) msg += (msg.empty() ? "" : "; ") + v.message;
      last_error = msg;
    }
    if (report) *report = duplicate(outcome.report_json);
  });
}

}  // extern "C"
