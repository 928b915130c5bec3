#include "marsupial/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "marsupial/potential.hpp"

namespace marsupial {

namespace {

// Rows at or before T count as pre-separation; without a T every row does.
bool before_separation(const TrajectoryRow& row, const std::optional<double>& T) {
  return !T || row.t <= *T;
}

Vec relative(const TrajectoryRow& row) { return row.u_p - row.u_c; }

}  // namespace

std::vector<double> relative_input_jumps(const Trajectory& traj) {
  std::vector<double> jumps;
  if (traj.rows.size() < 2) return jumps;
  jumps.reserve(traj.rows.size() - 1);
  Vec prev = relative(traj.rows.front());
  for (std::size_t i = 1; i < traj.rows.size(); ++i) {
    Vec cur = relative(traj.rows[i]);
    jumps.push_back((cur - prev).norm());
    prev = std::move(cur);
  }
  return jumps;
}

LyapunovSeries lyapunov_series(const Trajectory& traj, double slack) {
  LyapunovSeries out;
  const auto& rows = traj.rows;
  const auto& T = traj.separation_time;
  out.t.reserve(rows.size());
  for (const auto& row : rows) {
    out.t.push_back(row.t);
    out.V1.push_back(0.5 * row.e_tc * row.e_tc);
    out.V2.push_back(0.5 * row.e_pc * row.e_pc);
    out.V3.push_back(0.5 * row.e_pt * row.e_pt);
  }
  auto& s = out.summary;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (before_separation(rows[i - 1], T)) {
      s.V1_max_increase = std::max(s.V1_max_increase, out.V1[i] - out.V1[i - 1]);
      if (before_separation(rows[i], T)) {
        s.V2_max_increase_pre_T = std::max(s.V2_max_increase_pre_T, out.V2[i] - out.V2[i - 1]);
      }
    } else {
      s.V3_max_increase_post_T = std::max(s.V3_max_increase_post_T, out.V3[i] - out.V3[i - 1]);
    }
  }
  s.pass = s.V1_max_increase <= slack && s.V2_max_increase_pre_T <= slack &&
           s.V3_max_increase_post_T <= slack;
  return out;
}

PropertyReport check_properties(const Trajectory& traj, const Thresholds& th) {
  PropertyReport report;
  const auto& rows = traj.rows;
  const auto& T = traj.separation_time;
  if (rows.empty()) return report;

  // P1: on the carrier up to T, off it afterwards for good.
  auto& p1 = report.p1;
  p1.T = T;
  bool left = false;
  p1.stays_separated = true;
  for (const auto& row : rows) {
    if (before_separation(row, T)) {
      p1.pre_T_max_epc = std::max(p1.pre_T_max_epc, row.e_pc);
    } else {
      p1.post_T_epc = std::max(p1.post_T_epc, row.e_pc);
      if (row.e_pc > th.eps_sep) {
        left = true;
      } else if (left) {
        p1.stays_separated = false;
      }
    }
  }
  if (!T) p1.stays_separated = false;
  p1.pass = T.has_value() && p1.pre_T_max_epc <= th.eps_sep && p1.post_T_epc > th.eps_sep &&
            p1.stays_separated;

  // P2: passenger settles on the target, never moving away after T.
  auto& p2 = report.p2;
  p2.final_ept = rows.back().e_pt;
  p2.monotone_after_T = T.has_value();
  for (std::size_t i = 1; T && i < rows.size(); ++i) {
    if (before_separation(rows[i - 1], T)) continue;
    if (rows[i].e_pt > rows[i - 1].e_pt + th.monotone_slack) {
      p2.monotone_after_T = false;
      break;
    }
  }
  p2.pass = T.has_value() && p2.final_ept <= th.convergence && p2.monotone_after_T;

  // P3: carrier never reaches the target.
  auto& p3 = report.p3;
  p3.min_etc = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) p3.min_etc = std::min(p3.min_etc, row.e_tc);
  p3.pass = p3.min_etc > th.avoidance_floor;

  report.lyapunov = lyapunov_series(traj, th.lyapunov_slack).summary;

  const auto jumps = relative_input_jumps(traj);
  for (double j : jumps) {
    report.smoothness.max_rel_input_jump = std::max(report.smoothness.max_rel_input_jump, j);
  }
  if (auto k = traj.first_separated_row(); k && *k > 0) {
    report.smoothness.jump_at_T = jumps[*k - 1];
  }
  return report;
}

SmoothnessComparison smoothness_report(const Trajectory& equilibrium, const Trajectory& baseline,
                                       const Thresholds& th) {
  auto summarize = [](const Trajectory& traj, double& at_T, double& max_jump) {
    const auto jumps = relative_input_jumps(traj);
    max_jump = jumps.empty() ? 0.0 : *std::max_element(jumps.begin(), jumps.end());
    const auto k = traj.first_separated_row();
    if (!k || *k == 0) {
      throw std::invalid_argument("smoothness comparison needs a separation inside the run");
    }
    at_T = jumps[*k - 1];
  };
  SmoothnessComparison cmp;
  summarize(equilibrium, cmp.equilibrium_jump_at_T, cmp.equilibrium_max_jump);
  summarize(baseline, cmp.baseline_jump_at_T, cmp.baseline_max_jump);
  cmp.jump_at_T_difference = std::abs(cmp.baseline_jump_at_T - cmp.equilibrium_jump_at_T);
  if (cmp.equilibrium_jump_at_T > 0.0) {
    cmp.ratio = cmp.baseline_jump_at_T / cmp.equilibrium_jump_at_T;
  } else {
    cmp.ratio = cmp.baseline_jump_at_T > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  cmp.pass = cmp.equilibrium_jump_at_T <= th.smooth_jump &&
             cmp.baseline_jump_at_T >= th.baseline_min_jump && cmp.ratio >= 100.0;
  return cmp;
}

ResidualReport dynamics_residual(const Trajectory& traj, const Params& params) {
  if (traj.target.size() == 0) {
    throw std::invalid_argument("dynamics residual needs the target position");
  }
  ResidualReport out;
  const auto& rows = traj.rows;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const auto& prev = rows[i - 1];
    const auto& row = rows[i];
    const auto& next = rows[i + 1];
    if (prev.mode != row.mode || next.mode != row.mode) continue;
    const bool held = row.P >= 0.0;
    if ((prev.P >= 0.0) != held || (next.P >= 0.0) != held) continue;

    const Vec e_pc = row.x_p - row.x_c;
    const Vec e_pt = row.x_p - traj.target;
    const double P = eval_P(e_pc.norm(), row.e_tc, params);
    const Vec analytic = P >= 0.0 ? Vec(-P * e_pc) : Vec(P * e_pt);
    const Vec fd = ((next.x_p - next.x_c) - (prev.x_p - prev.x_c)) / (next.t - prev.t);
    const double r = (fd - analytic).norm();
    ++out.samples;
    if (r > out.max_residual) {
      out.max_residual = r;
      out.at_time = row.t;
    }
  }
  return out;
}

std::optional<double> interpolate_separation_time(const Trajectory& traj, const Params& params) {
  const auto k = traj.first_separated_row();
  if (!k) return std::nullopt;
  if (*k == 0) return traj.rows.front().t;
  const auto& a = traj.rows[*k - 1];
  const auto& b = traj.rows[*k];
  const double ga = a.e_tc - params.bc();
  const double gb = b.e_tc - params.bc();
  if (!(ga > gb)) return b.t;
  // Rounding can leave the last attached row a hair below bc; clamp into the step.
  const double frac = std::clamp(ga / (ga - gb), 0.0, 1.0);
  return a.t + (b.t - a.t) * frac;
}

namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string to_json(const PropertyReport& r, int indent) {
  nlohmann::ordered_json j;
  j["p1"] = {{"T", optional_number(r.p1.T)},
             {"pre_T_max_epc", r.p1.pre_T_max_epc},
             {"post_T_epc", r.p1.post_T_epc},
             {"stays_separated", r.p1.stays_separated},
             {"pass", r.p1.pass}};
  j["p2"] = {{"final_ept", r.p2.final_ept},
             {"monotone_after_T", r.p2.monotone_after_T},
             {"pass", r.p2.pass}};
  j["p3"] = {{"min_etc", r.p3.min_etc}, {"pass", r.p3.pass}};
  j["lyapunov"] = {{"V1_max_increase", r.lyapunov.V1_max_increase},
                   {"V2_max_increase_pre_T", r.lyapunov.V2_max_increase_pre_T},
                   {"V3_max_increase_post_T", r.lyapunov.V3_max_increase_post_T},
                   {"pass", r.lyapunov.pass}};
  j["smoothness"] = {{"max_rel_input_jump", r.smoothness.max_rel_input_jump},
                     {"jump_at_T", optional_number(r.smoothness.jump_at_T)},
                     {"baseline_jump", optional_number(r.smoothness.baseline_jump)}};
  j["all_pass"] = r.all_pass();
  return j.dump(indent);
}

std::string to_json(const SmoothnessComparison& c, int indent) {
  nlohmann::ordered_json j;
  j["equilibrium_jump_at_T"] = c.equilibrium_jump_at_T;
  j["equilibrium_max_jump"] = c.equilibrium_max_jump;
  j["baseline_jump_at_T"] = c.baseline_jump_at_T;
  j["baseline_max_jump"] = c.baseline_max_jump;
  j["jump_at_T_difference"] = c.jump_at_T_difference;
  // JSON has no infinity.
  j["ratio"] = std::isfinite(c.ratio) ? nlohmann::ordered_json(c.ratio) : nullptr;
  j["pass"] = c.pass;
  return j.dump(indent);
}

}  // namespace marsupial
