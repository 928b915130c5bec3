#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "marsupial/core.hpp"
#include "marsupial/safety.hpp"
#include "marsupial/sim.hpp"

namespace marsupial {

/// Everything a run needs, as read from a `.scn` file.
///
/// The file is a flat `key = value` list, one entry per line, `#` starts a
/// comment. Vectors are written `[a, b, c]`; an obstacle is
/// `obstacle = [cx, cy], radius` and may repeat. Unknown keys are rejected.
struct ScenarioFile {
  int dimension = 0;
  Vec x_c;
  Vec x_p;
  Vec x_t;
  Params params;
  double dt = 0.0;
  double t_end = 0.0;
  Integrator integrator = Integrator::RK4;
  CarrierPolicyKind carrier_policy = CarrierPolicyKind::StopOnSeparation;
  bool planar_carrier = false;
  ControllerKind controller = ControllerKind::EquilibriumDriven;
  double k_nav = kDefaultBaselineGain;
  std::optional<CbfConfig> cbf;
  std::vector<Obstacle> obstacles;
  std::string out_csv;
  std::string out_svg;
  std::string out_report;

  WorldState initial_state() const;
  SimConfig sim_config() const;

  bool operator==(const ScenarioFile& other) const;
};

/// A syntax or semantic problem. Semantic problems carry the name of the
/// condition they break (e.g. "Eq7.bc_lt_eta"); syntax problems use
/// "Syntax.*" names. `line` is 0 when no single line is responsible.
struct ScenarioIssue {
  int line = 0;
  std::string name;
  std::string message;

  std::string describe() const;
};

struct ParseResult {
  std::optional<ScenarioFile> scenario;
  std::vector<ScenarioIssue> errors;

  bool ok() const { return scenario.has_value(); }
};

ParseResult parse_scenario(std::string_view text);
ParseResult load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(render_scenario(s)) reproduces s.
std::string render_scenario(const ScenarioFile& scenario);

/// Runs every start-up check against an already-built scenario.
std::vector<ScenarioIssue> check_scenario(const ScenarioFile& scenario);

}  // namespace marsupial
