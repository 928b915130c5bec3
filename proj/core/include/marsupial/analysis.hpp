#pragma once

#include <optional>
#include <string>

#include "marsupial/core.hpp"
#include "marsupial/sim.hpp"

namespace marsupial {

/// Pass/fail thresholds. The paper-level statements are asymptotic; these
/// are the finite-horizon numbers the checks are held to.
struct Thresholds {
  double eps_sep = kDefaultSeparationTolerance;  ///< m, "||e_pc|| = 0"
  double convergence = 0.05;                     ///< m, final ||e_pt||
  double monotone_slack = 1e-9;                  ///< m, per-step ||e_pt|| increase allowed
  double avoidance_floor = 0.0;                  ///< m, min ||e_tc|| must exceed this
  double lyapunov_slack = 1e-9;                  ///< per-step V increase allowed
  double smooth_jump = 0.01;                     ///< m/s, equilibrium jump at separation
  double baseline_min_jump = 1.0;                ///< m/s, event-baseline jump at trigger

  static Thresholds from(const Params& params) {
    Thresholds t;
    t.eps_sep = params.eps_sep;
    return t;
  }
};

struct SeparationProperty {
  std::optional<double> T;
  double pre_T_max_epc = 0.0;   ///< max ||e_pc|| over rows with t <= T
  double post_T_epc = 0.0;      ///< max ||e_pc|| over rows with t > T
  bool stays_separated = false; ///< once beyond eps_sep, never back inside
  bool pass = false;
};

struct NavigationProperty {
  double final_ept = 0.0;
  bool monotone_after_T = false;
  bool pass = false;
};

struct AvoidanceProperty {
  double min_etc = 0.0;
  bool pass = false;
};

/// Largest single-step increase of each Lyapunov candidate on its interval
/// (floored at zero).
struct LyapunovSummary {
  double V1_max_increase = 0.0;         ///< 1/2 ||e_tc||^2 on [0, T]
  double V2_max_increase_pre_T = 0.0;   ///< 1/2 ||e_pc||^2 on [0, T]
  double V3_max_increase_post_T = 0.0;  ///< 1/2 ||e_pt||^2 on (T, t_end]
  bool pass = false;
};

struct SmoothnessSummary {
  double max_rel_input_jump = 0.0;  ///< m/s, max over consecutive rows
  std::optional<double> jump_at_T;  ///< m/s, across the separation step
  std::optional<double> baseline_jump;
};

struct PropertyReport {
  SeparationProperty p1;
  NavigationProperty p2;
  AvoidanceProperty p3;
  LyapunovSummary lyapunov;
  SmoothnessSummary smoothness;

  bool all_pass() const { return p1.pass && p2.pass && p3.pass; }
};

PropertyReport check_properties(const Trajectory& traj, const Thresholds& thresholds = {});

struct LyapunovSeries {
  std::vector<double> t;
  std::vector<double> V1;
  std::vector<double> V2;
  std::vector<double> V3;
  LyapunovSummary summary;
};

LyapunovSeries lyapunov_series(const Trajectory& traj, double slack = 1e-9);

/// Per-row ||delta(u_p - u_c)|| between consecutive rows (not divided by dt).
std::vector<double> relative_input_jumps(const Trajectory& traj);

struct SmoothnessComparison {
  double equilibrium_jump_at_T = 0.0;
  double equilibrium_max_jump = 0.0;
  double baseline_jump_at_T = 0.0;
  double baseline_max_jump = 0.0;
  double jump_at_T_difference = 0.0;
  double ratio = 0.0;  ///< baseline / equilibrium jump at separation
  bool pass = false;
};

/// Both trajectories must have separated.
SmoothnessComparison smoothness_report(const Trajectory& equilibrium, const Trajectory& baseline,
                                       const Thresholds& thresholds = {});

struct ResidualReport {
  double max_residual = 0.0;  ///< m/s
  std::size_t samples = 0;
  double at_time = 0.0;
};

/// Central-difference derivative of e_pc against the branch-selected
/// analytic rate, skipping stencils that straddle a mode or branch change.
/// Needs `traj.target`.
ResidualReport dynamics_residual(const Trajectory& traj, const Params& params);

/// Coarse separation time from a recorded trajectory: linear interpolation
/// of ||e_tc|| - bc across the step into the first separated row.
std::optional<double> interpolate_separation_time(const Trajectory& traj, const Params& params);

std::string to_json(const PropertyReport& report, int indent = 2);
std::string to_json(const SmoothnessComparison& cmp, int indent = 2);

}  // namespace marsupial
