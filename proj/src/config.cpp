#include "gplab/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "gplab/error.hpp"
#include "gplab/fewbody.hpp"
#include "gplab/potentials.hpp"

namespace gplab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
    throw InvalidArgument(key + ": expected a number, got '" + text + "'");
  }
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw InvalidArgument(key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const long long v = parse_integer(key, text);
  if (v < -(1LL << 31) || v > (1LL << 31) - 1) throw InvalidArgument(key + ": out of range");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw InvalidArgument(key + ": expected true or false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

template <typename T, typename F>
std::string join(const std::vector<T>& values, F&& format) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format(values[i]);
  }
  return out;
}

// One entry per key: how to read it into a config and how to print it.
struct Key {
  std::string section;
  std::string name;
  std::function<void(ExperimentConfig&, const std::string&)> read;
  std::function<std::string(const ExperimentConfig&)> write;
};

#define GPLAB_DOUBLE(sec, key, member)                                                  \
  Key{sec, key,                                                                         \
      [](ExperimentConfig& c, const std::string& v) { c.member = parse_double(sec "." key, v); }, \
      [](const ExperimentConfig& c) { return fmt(c.member); }}
#define GPLAB_INT(sec, key, member)                                                     \
  Key{sec, key,                                                                         \
      [](ExperimentConfig& c, const std::string& v) { c.member = parse_int(sec "." key, v); }, \
      [](const ExperimentConfig& c) { return std::to_string(c.member); }}
#define GPLAB_STRING(sec, key, member)                                                  \
  Key{sec, key, [](ExperimentConfig& c, const std::string& v) { c.member = trim(v); },  \
      [](const ExperimentConfig& c) { return c.member; }}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      GPLAB_STRING("experiment", "name", experiment),
      GPLAB_INT("grid", "d", grid.d),
      GPLAB_INT("grid", "M", grid.M),
      GPLAB_DOUBLE("grid", "L", grid.L),
      GPLAB_STRING("potential", "family", potential.family),
      GPLAB_DOUBLE("potential", "R", potential.R),
      GPLAB_DOUBLE("potential", "lambda", potential.lambda),
      GPLAB_STRING("scaling", "kind", scaling.kind),
      GPLAB_DOUBLE("scaling", "beta", scaling.beta),
      GPLAB_INT("system", "N", N),
      GPLAB_DOUBLE("time", "dt", time.dt),
      GPLAB_DOUBLE("time", "t_end", time.t_end),
      GPLAB_INT("time", "snapshot_every", time.snapshot_every),
      GPLAB_DOUBLE("time", "dt_obs", time.dt_obs),
      GPLAB_STRING("time", "scheme", time.scheme),
      GPLAB_STRING("init", "profile", init.profile),
      GPLAB_DOUBLE("init", "amplitude", init.amplitude),
      GPLAB_INT("init", "mode", init.mode),
      GPLAB_DOUBLE("init", "width", init.width),
      GPLAB_DOUBLE("init", "center", init.center),
      Key{"init", "dyson_weight",
          [](ExperimentConfig& c, const std::string& v) {
            c.init.dyson_weight = parse_bool("init.dyson_weight", v);
          },
          [](const ExperimentConfig& c) { return std::string(c.init.dyson_weight ? "true" : "false"); }},
      GPLAB_DOUBLE("scatter", "r_max", scatter.r_max),
      GPLAB_DOUBLE("scatter", "tol", scatter.tol),
      Key{"scatter", "ell1_over_a",
          [](ExperimentConfig& c, const std::string& v) {
            c.scatter.ell1_over_a.clear();
            for (const auto& s : split_list(v)) {
              c.scatter.ell1_over_a.push_back(parse_double("scatter.ell1_over_a", s));
            }
          },
          [](const ExperimentConfig& c) { return join(c.scatter.ell1_over_a, fmt); }},
      GPLAB_STRING("gp", "mode", gp.mode),
      GPLAB_DOUBLE("gp", "a0", gp.a0),
      GPLAB_INT("hierarchy", "k", hierarchy.k),
      GPLAB_DOUBLE("hierarchy", "nu", hierarchy.nu),
      Key{"hierarchy", "times",
          [](ExperimentConfig& c, const std::string& v) {
            c.hierarchy.times.clear();
            for (const auto& s : split_list(v)) {
              c.hierarchy.times.push_back(parse_double("hierarchy.times", s));
            }
          },
          [](const ExperimentConfig& c) { return join(c.hierarchy.times, fmt); }},
      Key{"hierarchy", "betas",
          [](ExperimentConfig& c, const std::string& v) {
            c.hierarchy.betas.clear();
            for (const auto& s : split_list(v)) {
              c.hierarchy.betas.push_back(parse_double("hierarchy.betas", s));
            }
          },
          [](const ExperimentConfig& c) { return join(c.hierarchy.betas, fmt); }},
      Key{"hierarchy", "N_list",
          [](ExperimentConfig& c, const std::string& v) {
            c.hierarchy.N_list.clear();
            for (const auto& s : split_list(v)) {
              c.hierarchy.N_list.push_back(parse_int("hierarchy.N_list", s));
            }
          },
          [](const ExperimentConfig& c) {
            return join(c.hierarchy.N_list, [](int n) { return std::to_string(n); });
          }},
      Key{"guardrail", "max_entries",
          [](ExperimentConfig& c, const std::string& v) {
            const long long n = parse_integer("guardrail.max_entries", v);
            if (n <= 0) throw InvalidArgument("guardrail.max_entries must be positive");
            c.max_entries = static_cast<std::size_t>(n);
          },
          [](const ExperimentConfig& c) { return std::to_string(c.max_entries); }},
  };
  return table;
}

#undef GPLAB_DOUBLE
#undef GPLAB_INT
#undef GPLAB_STRING

bool is_power_of_two(int M) { return M > 0 && (M & (M - 1)) == 0; }

// True if t is a non-negative integer multiple of dt.
bool multiple_of(double t, double dt) {
  if (dt <= 0.0 || t < 0.0) return false;
  const double n = t / dt;
  return std::abs(n - std::round(n)) < 1e-9 * std::max(1.0, n);
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "scatter",     "evolve-nbody",     "evolve-gp", "bbgky-residual",
      "gph-residual", "delta-lemma", "coupling-compare", "mf-convergence"};
  return names;
}

ExperimentConfig default_config(const std::string& experiment) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end()) {
    throw InvalidArgument("unknown experiment '" + experiment + "'");
  }
  ExperimentConfig c;
  c.experiment = experiment;
  // Three-dimensional radial bump for the scattering studies.
  const PotentialSpec scattering_bump{"bump", 1.0, 10.0};
  if (experiment == "scatter") {
    c.potential = scattering_bump;
  } else if (experiment == "coupling-compare") {
    c.potential = scattering_bump;
    c.hierarchy.N_list = {10, 100, 1000};
  } else if (experiment == "evolve-nbody") {
    c.N = 2;
  } else if (experiment == "evolve-gp") {
    c.grid.M = 64;
    c.gp.a0 = 0.01;
    c.time.t_end = 0.1;
  } else if (experiment == "bbgky-residual") {
    // Broad, weak C^2 bump: pair correlations put little weight on the fast
    // high modes, so the dt_obs^2 difference error stays small for k = 2.
    c.N = 3;
    c.potential = {"poly", 0.45, 0.1};
    c.init.amplitude = 0.02;
    c.hierarchy.k = 2;
    c.hierarchy.times = {0.05};
  } else if (experiment == "gph-residual") {
    c.grid.M = 64;
    c.gp.a0 = 0.01;
    c.time.dt = 1e-4;
    c.time.dt_obs = 2e-4;
    c.hierarchy.k = 2;
    c.hierarchy.times = {0.05, 0.1};
  } else if (experiment == "delta-lemma") {
    c.grid.M = 64;
    c.grid.L = 0.5;
    c.hierarchy.k = 1;
  } else if (experiment == "mf-convergence") {
    c.scaling.kind = "meanfield";
    c.scaling.beta = 1.0;
    c.potential.lambda = 5.0;
    c.time.t_end = 0.5;
    c.hierarchy.N_list = {2, 3, 4, 5};
  }
  return c;
}

ExperimentConfig parse_config(const std::string& text) { return parse_config(text, ""); }

ExperimentConfig parse_config(const std::string& text, const std::string& experiment) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InvalidArgument(std::string("config syntax: ") + e.what());
  }
  const auto name = tree.get_optional<std::string>("experiment.name");
  if (!name && experiment.empty()) throw InvalidArgument("config: missing [experiment] name");
  if (name && !experiment.empty() && trim(*name) != experiment) {
    throw InvalidArgument("config names experiment '" + trim(*name) + "' but '" + experiment +
                          "' was requested");
  }
  ExperimentConfig config = default_config(name ? trim(*name) : experiment);

  std::map<std::string, const Key*> by_path;
  for (const auto& k : keys()) by_path[k.section + "." + k.name] = &k;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw InvalidArgument("config: key '" + section + "' outside a section");
    }
    for (const auto& [key, value] : body) {
      const auto it = by_path.find(section + "." + key);
      if (it == by_path.end()) {
        throw InvalidArgument("config: unknown key '" + key + "' in [" + section + "]");
      }
      it->second->read(config, value.data());
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<ConfigEntry> config_entries(const ExperimentConfig& config) {
  std::vector<ConfigEntry> out;
  for (const auto& k : keys()) out.push_back({k.section, k.name, k.write(config)});
  return out;
}

std::string serialize_config(const ExperimentConfig& config) {
  std::string out;
  std::string section;
  for (const auto& e : config_entries(config)) {
    if (e.section != section) {
      if (!section.empty()) out += "\n";
      section = e.section;
      out += "[" + section + "]\n";
    }
    out += e.key + " = " + e.value + "\n";
  }
  return out;
}

std::vector<Violation> validate(const ExperimentConfig& c) {
  std::vector<Violation> found;
  auto invalid = [&](const std::string& m) { found.push_back({ViolationKind::validation, m}); };
  auto guard = [&](std::size_t entries, const std::string& what) {
    if (entries > c.max_entries) {
      found.push_back({ViolationKind::guardrail,
                       what + " needs " + std::to_string(entries) + " complex entries (" +
                           std::to_string(entries > SIZE_MAX / 16 ? SIZE_MAX : entries * 16) +
                           " bytes), guardrail is " + std::to_string(c.max_entries)});
    }
  };

  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), c.experiment) == names.end()) {
    invalid("unknown experiment '" + c.experiment + "'");
    return found;
  }
  const std::string& e = c.experiment;
  const bool radial = e == "scatter" || e == "coupling-compare";
  const bool torus = !radial;

  bool grid_ok = true;
  if (torus) {
    if (c.grid.d < 1 || c.grid.d > 3) {
      invalid("grid.d must be 1, 2 or 3");
      grid_ok = false;
    }
    if (c.grid.M < 4 || !is_power_of_two(c.grid.M)) {
      invalid("grid.M must be a power of two >= 4, got " + std::to_string(c.grid.M));
      grid_ok = false;
    }
    if (!(c.grid.L > 0.0)) {
      invalid("grid.L must be positive");
      grid_ok = false;
    }
  }
  const std::size_t P = grid_ok ? checked_pow(c.grid.M, c.grid.d) : 0;
  const double h = grid_ok ? c.grid.L / c.grid.M : 0.0;

  const bool uses_potential = radial || e == "evolve-nbody" || e == "bbgky-residual" ||
                              e == "mf-convergence" || (e == "evolve-gp" && c.gp.mode == "hartree");
  bool potential_ok = true;
  if (uses_potential) {
    try {
      parse_family(c.potential.family);
    } catch (const Error&) {
      invalid("potential.family must be zero, bump or poly, got '" + c.potential.family + "'");
      potential_ok = false;
    }
    if (!(c.potential.R > 0.0)) {
      invalid("potential.R must be positive");
      potential_ok = false;
    }
    if (c.potential.lambda < 0.0) {
      invalid("potential.lambda must be non-negative");
      potential_ok = false;
    }
  }

  const bool nbody = e == "evolve-nbody" || e == "bbgky-residual";
  if (nbody || e == "mf-convergence" || (e == "evolve-gp" && c.gp.mode == "hartree")) {
    if (c.scaling.kind != "none" && c.scaling.kind != "gp" && c.scaling.kind != "meanfield") {
      invalid("scaling.kind must be none, gp or meanfield");
    } else if (potential_ok && grid_ok) {
      double support = c.potential.R;
      if (c.scaling.kind == "gp") support /= c.N;
      if (c.scaling.kind == "meanfield") {
        if (!(c.scaling.beta >= 1.0)) invalid("scaling.beta must be >= 1");
        else support /= c.scaling.beta;
      }
      if (!(support < 0.5 * c.grid.L)) {
        invalid("scaled potential support " + fmt(support) + " must be below L/2");
      }
      if (c.init.dyson_weight && c.scaling.kind != "gp") {
        invalid("init.dyson_weight requires scaling.kind = gp");
      }
    }
  }

  if (torus) {
    try {
      if (parse_profile_kind(c.init.profile) == ProfileKind::gaussian && !(c.init.width > 0.0)) {
        invalid("init.width must be positive");
      }
    } catch (const Error&) {
      invalid("init.profile must be constant, cosine, gaussian or plane_wave");
    }
  }

  const bool timed = e == "evolve-nbody" || e == "evolve-gp" || e == "bbgky-residual" ||
                     e == "gph-residual" || e == "mf-convergence";
  if (timed) {
    if (!(c.time.dt > 0.0)) {
      invalid("time.dt must be positive");
    } else {
      if (!multiple_of(c.time.t_end, c.time.dt)) {
        invalid("time.t_end must be a non-negative multiple of time.dt");
      }
      if (c.time.snapshot_every < 0) invalid("time.snapshot_every must be >= 0");
      if (e == "bbgky-residual" || e == "gph-residual") {
        if (!multiple_of(c.time.dt_obs, c.time.dt) || c.time.dt_obs <= 0.0) {
          invalid("time.dt_obs must be a positive multiple of time.dt");
        }
        if (c.hierarchy.times.empty()) invalid("hierarchy.times must not be empty");
        for (double t : c.hierarchy.times) {
          if (t - c.time.dt_obs < -1e-12 || !multiple_of(t, c.time.dt)) {
            invalid("hierarchy.times entry " + fmt(t) +
                    " must be a multiple of dt and at least dt_obs");
          }
        }
      }
    }
    if (c.time.scheme != "strang" && c.time.scheme != "lie") {
      invalid("time.scheme must be strang or lie");
    }
  }

  if (nbody) {
    if (c.N < 1) invalid("system.N must be >= 1");
    else if (grid_ok) guard(checked_pow(P, c.N), "N-body state");
  }
  if (e == "bbgky-residual" && grid_ok && c.N >= 1) {
    if (c.hierarchy.k < 1 || c.hierarchy.k > c.N) {
      invalid("hierarchy.k must be in [1, N]");
    } else {
      const int top = std::min(c.hierarchy.k + 1, c.N);
      guard(checked_pow(P, 2 * top), "kernel gamma^(" + std::to_string(top) + ")");
    }
  }
  if (e == "mf-convergence") {
    if (c.hierarchy.N_list.empty()) invalid("hierarchy.N_list must not be empty");
    int largest = 0;
    for (int n : c.hierarchy.N_list) {
      if (n < 1) invalid("hierarchy.N_list entries must be >= 1");
      largest = std::max(largest, n);
    }
    if (grid_ok && largest > 0) guard(checked_pow(P, largest), "N-body state");
  }

  if (e == "evolve-gp" || e == "gph-residual") {
    if (e == "evolve-gp" && c.gp.mode != "hartree" && c.gp.mode != "gp" && c.gp.mode != "mixed") {
      invalid("gp.mode must be hartree, gp or mixed");
    }
    if (c.gp.a0 < 0.0) invalid("gp.a0 must be non-negative");
    if (e == "evolve-gp" && c.gp.mode == "mixed" && grid_ok && P > 64) {
      found.push_back({ViolationKind::guardrail,
                       "mixed flow kernel dimension " + std::to_string(P) + " exceeds 64"});
    }
  }
  if (e == "gph-residual") {
    if (c.hierarchy.k < 1 || c.hierarchy.k > 2) {
      invalid("hierarchy.k must be 1 or 2");
    } else if (grid_ok) {
      guard(checked_pow(P, 2 * c.hierarchy.k), "kernel gamma^(" + std::to_string(c.hierarchy.k) + ")");
    }
  }
  if (e == "gph-residual" || e == "bbgky-residual") {
    if (!(c.hierarchy.nu > 1.0)) invalid("hierarchy.nu must be > 1");
  }

  if (e == "delta-lemma") {
    if (c.hierarchy.k < 1 || c.hierarchy.k > 2) {
      invalid("hierarchy.k must be 1 or 2");
    } else if (grid_ok) {
      guard(checked_pow(P, 2 * (c.hierarchy.k + 1)),
            "kernel gamma^(" + std::to_string(c.hierarchy.k + 1) + ")");
    }
    if (c.hierarchy.betas.empty()) invalid("hierarchy.betas must not be empty");
    for (std::size_t i = 0; i < c.hierarchy.betas.size(); ++i) {
      const double b = c.hierarchy.betas[i];
      if (i > 0 && !(b < c.hierarchy.betas[i - 1])) invalid("hierarchy.betas must be decreasing");
      if (grid_ok && b < 2.0 * h) {
        invalid("delta width beta = " + fmt(b) + " is under-resolved (beta < 2h = " +
                fmt(2.0 * h) + ")");
      }
      if (grid_ok && !(b < 0.5 * c.grid.L)) {
        invalid("delta width beta = " + fmt(b) + " must be below L/2");
      }
    }
  }

  if (radial && potential_ok) {
    if (!(c.scatter.tol > 0.0)) invalid("scatter.tol must be positive");
    if (c.scatter.r_max < 5.0 * c.potential.R) invalid("scatter.r_max must be >= 5 R");
    if (e == "scatter") {
      for (double r : c.scatter.ell1_over_a) {
        if (!(r >= 10.0)) invalid("scatter.ell1_over_a entries must be >= 10");
      }
    }
    if (e == "coupling-compare") {
      if (c.hierarchy.N_list.empty()) invalid("hierarchy.N_list must not be empty");
      for (int n : c.hierarchy.N_list) {
        if (n < 1) invalid("hierarchy.N_list entries must be >= 1");
      }
    }
  }
  return found;
}

}  // namespace gplab
