#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "marsupial/control.hpp"
#include "marsupial/core.hpp"
#include "marsupial/safety.hpp"

namespace marsupial {

enum class Integrator { Euler, RK4 };
enum class ControllerKind { EquilibriumDriven, EventBaseline };

const char* to_string(Integrator integrator);
const char* to_string(ControllerKind kind);

inline constexpr double kDefaultSeparationOvershoot = 1e-7;

struct SafetyConfig {
  CbfConfig cbf;
  std::vector<Obstacle> obstacles;
};

struct SimConfig {
  double dt = 1e-3;     ///< s
  double t_end = 30.0;  ///< s
  Integrator integrator = Integrator::RK4;
  CarrierPolicy carrier_policy;
  /// Zero the last component of u_c so the carrier stays in its plane.
  bool planar_carrier = false;
  std::optional<SafetyConfig> safety;
  ControllerKind controller = ControllerKind::EquilibriumDriven;
  double k_nav = kDefaultBaselineGain;  ///< baseline controller only
  /// The carrier latches to Separated once ||e_tc|| <= bc - overshoot (m).
  /// At exactly bc the potential gradient vanishes at e_pc = 0, which is an
  /// equilibrium of the passenger; the overshoot gives it a nonzero start.
  double separation_overshoot = kDefaultSeparationOvershoot;
};

struct TrajectoryRow {
  double t = 0.0;
  Vec x_c;
  Vec x_p;
  Vec u_c;
  Vec u_p;
  double e_pc = 0.0;  ///< ||e_pc||
  double e_tc = 0.0;  ///< ||e_tc||
  double e_pt = 0.0;  ///< ||e_pt||
  double P = 0.0;
  AttachmentMode mode = AttachmentMode::Attached;
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  /// First time the pair is separated; located inside the crossing step.
  std::optional<double> separation_time;
  /// Fixed target position; empty when unknown (e.g. read back from CSV).
  Vec target;

  Eigen::Index dimension() const { return rows.empty() ? 0 : rows.front().x_c.size(); }
  /// Index of the first separated row, if any.
  std::optional<std::size_t> first_separated_row() const;
};

/// Non-finite state encountered during integration.
class NumericalDivergenceError : public std::runtime_error {
 public:
  NumericalDivergenceError(double t, const std::string& what)
      : std::runtime_error(what), time(t) {}
  double time;
};

/// Run aborted part-way; carries what was recorded up to the failure.
class SimulationAborted : public std::runtime_error {
 public:
  enum class Cause { NumericalDivergence, SafetyInfeasible };
  SimulationAborted(Cause c, double t, const std::string& what, Trajectory partial_traj)
      : std::runtime_error(what), cause(c), time(t), partial(std::move(partial_traj)) {}
  Cause cause;
  double time;
  Trajectory partial;
};

/// Inputs applied at `state` under `cfg`, using the state's latched mode.
ControlOutput evaluate_controls(const WorldState& state, const SimConfig& cfg,
                                const Params& params);

/// Result of one integration step.
struct StepOutcome {
  WorldState state;
  /// Set when the pair separated during this step.
  std::optional<double> separation_time;
};

/// Advances one dt. The mode latch is evaluated at the step start and the
/// branch is held through integrator stages; if the carrier crosses the
/// separation surface inside the step, the crossing is located by bisection,
/// the latch flips there and the remainder of the step runs separated.
StepOutcome advance(const WorldState& state, const SimConfig& cfg, const Params& params);

WorldState step(const WorldState& state, const SimConfig& cfg, const Params& params);

/// Integrates from `initial` to cfg.t_end, recording one row per step.
/// Throws SimulationAborted on divergence or filter infeasibility.
Trajectory run(const WorldState& initial, const SimConfig& cfg, const Params& params);

/// Separation time of the attached phase in closed form,
/// ln(||e_tc(0)|| / (b c)) / k_c. Throws std::domain_error below bc.
double separation_time_oracle(double e_tc0_norm, const Params& params);

}  // namespace marsupial
