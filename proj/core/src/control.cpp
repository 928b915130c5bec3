#include "marsupial/control.hpp"

#include "marsupial/potential.hpp"

namespace marsupial {

Vec carrier_input(const ErrorTriple& errors, AttachmentMode mode, const Params& params,
                  const CarrierPolicy& policy, double t) {
  if (mode == AttachmentMode::Attached) return params.k_c * errors.e_tc;
  if (policy.kind == CarrierPolicyKind::ContinueWithFrozenEtc && policy.planner) {
    Vec u = policy.planner(errors, t);
    if (u.size() != errors.e_tc.size()) {
      throw ConfigurationError("carrier planner returned a vector of the wrong dimension");
    }
    return u;
  }
  return Vec::Zero(errors.e_tc.size());
}

ControlOutput passenger_input(const ErrorTriple& errors, const Vec& u_c, const Params& params,
                              std::optional<double> frozen_etc_norm) {
  const double etc = frozen_etc_norm.value_or(errors.e_tc.norm());
  ControlOutput out;
  out.P_value = eval_P(errors.e_pc.norm(), etc, params);
  out.u_c = u_c;
  if (out.P_value >= 0.0) {
    out.branch = Branch::AttachedBranch;
    out.u_p = -out.P_value * errors.e_pc + u_c;
  } else {
    out.branch = Branch::SeparatedBranch;
    out.u_p = out.P_value * errors.e_pt + u_c;
  }
  return out;
}

Vec relative_input(const ControlOutput& out) { return out.u_p - out.u_c; }

ControlOutput baseline_event_controller(const ErrorTriple& errors, AttachmentMode mode,
                                        const Params& params, double k_nav) {
  ControlOutput out;
  const double etc = errors.e_tc.norm();
  out.P_value = eval_P(errors.e_pc.norm(), etc, params);
  if (mode == AttachmentMode::Attached && etc > params.bc()) {
    out.branch = Branch::AttachedBranch;
    out.u_c = params.k_c * errors.e_tc;
    out.u_p = out.u_c;
  } else {
    out.branch = Branch::SeparatedBranch;
    out.u_c = Vec::Zero(errors.e_tc.size());
    out.u_p = -k_nav * errors.e_pt;
  }
  return out;
}

}  // namespace marsupial
