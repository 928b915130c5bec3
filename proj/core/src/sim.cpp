#include "marsupial/sim.hpp"

#include <cmath>
#include <sstream>

#include "marsupial/potential.hpp"

namespace marsupial {

const char* to_string(Integrator integrator) {
  return integrator == Integrator::Euler ? "euler" : "rk4";
}

const char* to_string(ControllerKind kind) {
  return kind == ControllerKind::EquilibriumDriven ? "equilibrium" : "baseline";
}

std::optional<std::size_t> Trajectory::first_separated_row() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].mode == AttachmentMode::Separated) return i;
  }
  return std::nullopt;
}

namespace {

constexpr int kMaxBisections = 64;

void project_planar(Vec& u, bool planar) {
  if (planar) u[u.size() - 1] = 0.0;
}

// Controls with the passenger branch optionally pinned, so integrator stages
// see the branch chosen at the step start.
ControlOutput controls(const WorldState& state, const SimConfig& cfg, const Params& params,
                       std::optional<Branch> hold) {
  const ErrorTriple errors = compute_errors(state);
  const auto* safety = cfg.safety ? &*cfg.safety : nullptr;

  if (cfg.controller == ControllerKind::EventBaseline) {
    ControlOutput out = baseline_event_controller(errors, state.mode, params, cfg.k_nav);
    const bool riding = out.branch == Branch::AttachedBranch;
    project_planar(out.u_c, cfg.planar_carrier);
    if (safety) {
      out.u_c = filter(out.u_c, state.x_c, safety->obstacles, safety->cbf);
      project_planar(out.u_c, cfg.planar_carrier);
    }
    if (riding) {
      out.u_p = out.u_c;
    } else if (safety) {
      out.u_p = filter(out.u_p, state.x_p, safety->obstacles, safety->cbf);
    }
    return out;
  }

  Vec u_c = carrier_input(errors, state.mode, params, cfg.carrier_policy, state.t);
  project_planar(u_c, cfg.planar_carrier);
  if (safety) {
    u_c = filter(u_c, state.x_c, safety->obstacles, safety->cbf);
    project_planar(u_c, cfg.planar_carrier);
  }

  // The passenger rides until the latch flips, whatever the sign of P.
  if (!hold && state.mode == AttachmentMode::Attached) hold = Branch::AttachedBranch;

  ControlOutput out;
  if (!hold) {
    out = passenger_input(errors, u_c, params, state.frozen_etc_norm);
  } else {
    const double etc = state.frozen_etc_norm.value_or(errors.e_tc.norm());
    out.P_value = eval_P(errors.e_pc.norm(), etc, params);
    out.branch = *hold;
    out.u_c = u_c;
    out.u_p = *hold == Branch::AttachedBranch ? Vec(-out.P_value * errors.e_pc + u_c)
                                              : Vec(out.P_value * errors.e_pt + u_c);
  }
  // While riding, the passenger shares the (already filtered) carrier input.
  if (safety && state.mode == AttachmentMode::Separated) {
    out.u_p = filter(out.u_p, state.x_p, safety->obstacles, safety->cbf);
  }
  return out;
}

bool separation_triggered(const WorldState& s, const SimConfig& cfg, const Params& params) {
  const double etc = (s.x_t - s.x_c).norm();
  if (cfg.controller == ControllerKind::EventBaseline) return etc <= params.bc();
  return etc <= params.bc() - cfg.separation_overshoot;
}

void latch_separated(WorldState& s, const SimConfig& cfg) {
  s.mode = AttachmentMode::Separated;
  if (cfg.carrier_policy.kind == CarrierPolicyKind::ContinueWithFrozenEtc) {
    s.frozen_etc_norm = (s.x_t - s.x_c).norm();
  }
}

void check_finite(const WorldState& s) {
  if (!all_finite(s.x_c) || !all_finite(s.x_p)) {
    std::ostringstream msg;
    msg << "non-finite state at t = " << s.t;
    throw NumericalDivergenceError(s.t, msg.str());
  }
}

// One integrator step of length h with mode and branch held fixed.
WorldState integrate(const WorldState& s, double h, const SimConfig& cfg, const Params& params) {
  const Branch branch = controls(s, cfg, params, std::nullopt).branch;
  auto rates = [&](const WorldState& at) { return controls(at, cfg, params, branch); };

  WorldState next = s;
  const ControlOutput k1 = rates(s);
  if (cfg.integrator == Integrator::Euler) {
    next.x_c = s.x_c + h * k1.u_c;
    next.x_p = s.x_p + h * k1.u_p;
  } else {
    WorldState stage = s;
    stage.x_c = s.x_c + 0.5 * h * k1.u_c;
    stage.x_p = s.x_p + 0.5 * h * k1.u_p;
    stage.t = s.t + 0.5 * h;
    const ControlOutput k2 = rates(stage);
    stage.x_c = s.x_c + 0.5 * h * k2.u_c;
    stage.x_p = s.x_p + 0.5 * h * k2.u_p;
    const ControlOutput k3 = rates(stage);
    stage.x_c = s.x_c + h * k3.u_c;
    stage.x_p = s.x_p + h * k3.u_p;
    stage.t = s.t + h;
    const ControlOutput k4 = rates(stage);
    next.x_c = s.x_c + (h / 6.0) * (k1.u_c + 2.0 * k2.u_c + 2.0 * k3.u_c + k4.u_c);
    next.x_p = s.x_p + (h / 6.0) * (k1.u_p + 2.0 * k2.u_p + 2.0 * k3.u_p + k4.u_p);
  }
  next.t = s.t + h;
  check_finite(next);
  return next;
}

}  // namespace

ControlOutput evaluate_controls(const WorldState& state, const SimConfig& cfg,
                                const Params& params) {
  return controls(state, cfg, params, std::nullopt);
}

StepOutcome advance(const WorldState& state, const SimConfig& cfg, const Params& params) {
  StepOutcome out{state, std::nullopt};
  WorldState s = state;
  if (s.mode == AttachmentMode::Attached && separation_triggered(s, cfg, params)) {
    latch_separated(s, cfg);
    out.separation_time = s.t;
  }
  if (s.mode == AttachmentMode::Separated) {
    out.state = integrate(s, cfg.dt, cfg, params);
    return out;
  }

  WorldState end = integrate(s, cfg.dt, cfg, params);
  if (!separation_triggered(end, cfg, params)) {
    out.state = std::move(end);
    return out;
  }

  // Locate the crossing: `lo` is known attached, `hi` known triggered.
  double lo = 0.0;
  double hi = 1.0;
  WorldState at_hi = std::move(end);
  for (int i = 0; i < kMaxBisections && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    WorldState probe = integrate(s, mid * cfg.dt, cfg, params);
    if (separation_triggered(probe, cfg, params)) {
      hi = mid;
      at_hi = std::move(probe);
    } else {
      lo = mid;
    }
  }
  latch_separated(at_hi, cfg);
  out.separation_time = at_hi.t;
  const double remaining = (1.0 - hi) * cfg.dt;
  out.state = remaining > 0.0 ? integrate(at_hi, remaining, cfg, params) : std::move(at_hi);
  out.state.t = s.t + cfg.dt;
  return out;
}

WorldState step(const WorldState& state, const SimConfig& cfg, const Params& params) {
  return advance(state, cfg, params).state;
}

namespace {

TrajectoryRow make_row(const WorldState& s, const ControlOutput& ctrl) {
  TrajectoryRow row;
  row.t = s.t;
  row.x_c = s.x_c;
  row.x_p = s.x_p;
  row.u_c = ctrl.u_c;
  row.u_p = ctrl.u_p;
  row.e_pc = (s.x_p - s.x_c).norm();
  row.e_tc = (s.x_t - s.x_c).norm();
  row.e_pt = (s.x_p - s.x_t).norm();
  row.P = ctrl.P_value;
  row.mode = s.mode;
  return row;
}

}  // namespace

Trajectory run(const WorldState& initial, const SimConfig& cfg, const Params& params) {
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0)) {
    throw ConfigurationError("dt and t_end must be positive");
  }
  compute_errors(initial);  // dimension check

  Trajectory traj;
  traj.target = initial.x_t;
  WorldState s = initial;
  const double t0 = initial.t;
  const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  traj.rows.reserve(steps + 1);

  auto abort_with = [&](SimulationAborted::Cause cause, double t, const char* what) {
    throw SimulationAborted(cause, t, what, std::move(traj));
  };

  if (s.mode == AttachmentMode::Attached && separation_triggered(s, cfg, params)) {
    latch_separated(s, cfg);
    traj.separation_time = s.t;
  } else if (s.mode == AttachmentMode::Separated) {
    traj.separation_time = s.t;
  }

  for (std::size_t k = 0;; ++k) {
    try {
      traj.rows.push_back(make_row(s, evaluate_controls(s, cfg, params)));
      if (k == steps) break;
      StepOutcome next = advance(s, cfg, params);
      if (next.separation_time && !traj.separation_time) {
        traj.separation_time = next.separation_time;
      }
      s = std::move(next.state);
      s.t = t0 + static_cast<double>(k + 1) * cfg.dt;
    } catch (const NumericalDivergenceError& e) {
      abort_with(SimulationAborted::Cause::NumericalDivergence, e.time, e.what());
    } catch (const SafetyInfeasibleError& e) {
      abort_with(SimulationAborted::Cause::SafetyInfeasible, s.t, e.what());
    }
  }
  return traj;
}

double separation_time_oracle(double e_tc0_norm, const Params& params) {
  if (e_tc0_norm < params.bc()) {
    throw std::domain_error("separation time undefined: initial distance below b*c");
  }
  return std::log(e_tc0_norm / params.bc()) / params.k_c;
}

}  // namespace marsupial
