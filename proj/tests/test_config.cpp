#include <doctest.h>

#include <algorithm>
#include <string>

#include "gplab/config.hpp"
#include "gplab/error.hpp"

using namespace gplab;

namespace {

bool has_kind(const std::vector<Violation>& v, ViolationKind kind, const std::string& fragment = "") {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) {
    return x.kind == kind && x.message.find(fragment) != std::string::npos;
  });
}

}  // namespace

TEST_CASE("every experiment default validates and round-trips through text") {
  REQUIRE(experiment_names().size() == 8);
  for (const auto& name : experiment_names()) {
    CAPTURE(name);
    const ExperimentConfig c = default_config(name);
    CHECK(c.experiment == name);
    CHECK(validate(c).empty());
    CHECK(parse_config(serialize_config(c)) == c);
  }
  CHECK_THROWS_AS(default_config("nope"), InvalidArgument);
}

TEST_CASE("round trip keeps non-default values exactly") {
  ExperimentConfig c = default_config("delta-lemma");
  c.hierarchy.betas = {0.3, 0.1 + 0.2, 1.0 / 3.0 * 0.1};
  c.time.dt = 1.0 / 3.0 * 1e-3;
  c.init.dyson_weight = true;
  c.max_entries = 12345;
  CHECK(parse_config(serialize_config(c)) == c);
}

TEST_CASE("parsing starts from the experiment defaults") {
  const ExperimentConfig c = parse_config(
      "[experiment]\nname = evolve-nbody\n\n[grid]\nM = 8\n[system]\nN = 3\n"
      "[hierarchy]\nN_list = 4, 2\n");
  ExperimentConfig expect = default_config("evolve-nbody");
  expect.grid.M = 8;
  expect.N = 3;
  expect.hierarchy.N_list = {4, 2};
  CHECK(c == expect);
}

TEST_CASE("malformed text is rejected at parse time") {
  CHECK_THROWS_AS(parse_config("[experiment]\nname = scatter\n[grid]\nbogus = 1\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("[experiment]\nname = scatter\n[nowhere]\nM = 1\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("[experiment]\nname = scatter\n[grid]\nM = eight\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("[experiment]\nname = scatter\n[grid]\nM = 8.5\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("[grid]\nM = 8\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("[experiment]\nname = mystery\n"), InvalidArgument);
}

TEST_CASE("experiment name falls back to the subcommand and must agree with it") {
  CHECK(parse_config("[grid]\nM = 8\n", "evolve-gp").experiment == "evolve-gp");
  CHECK(parse_config("", "scatter") == default_config("scatter"));
  CHECK_THROWS_AS(parse_config("[experiment]\nname = scatter\n", "evolve-gp"), InvalidArgument);
}

TEST_CASE("validation findings") {
  ExperimentConfig c = default_config("evolve-nbody");
  c.grid.M = 7;
  CHECK(has_kind(validate(c), ViolationKind::validation, "M"));

  c = default_config("evolve-nbody");
  c.grid.M = 32;
  c.N = 6;
  CHECK(has_kind(validate(c), ViolationKind::guardrail));
  CHECK_FALSE(has_kind(validate(c), ViolationKind::validation));
  c.max_entries = std::size_t{1} << 31;
  CHECK(validate(c).empty());

  c = default_config("delta-lemma");
  c.hierarchy.betas = {0.2, 0.1, 0.005};
  CHECK(has_kind(validate(c), ViolationKind::validation, "under-resolved"));

  c = default_config("evolve-nbody");
  c.potential.R = 0.6;
  CHECK(has_kind(validate(c), ViolationKind::validation));

  c = default_config("evolve-nbody");
  c.time.t_end = 0.1005;
  CHECK(has_kind(validate(c), ViolationKind::validation));

  c = default_config("scatter");
  c.scatter.r_max = 2.0;
  c.scatter.ell1_over_a = {5.0};
  CHECK(validate(c).size() >= 2);

  c = default_config("mf-convergence");
  c.scaling.beta = 0.5;
  CHECK(has_kind(validate(c), ViolationKind::validation));

  c = default_config("evolve-nbody");
  c.potential.lambda = -1.0;
  CHECK(has_kind(validate(c), ViolationKind::validation));
}
