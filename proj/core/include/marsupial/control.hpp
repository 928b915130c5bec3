#pragma once

#include <functional>
#include <optional>

#include "marsupial/core.hpp"

namespace marsupial {

enum class Branch { AttachedBranch, SeparatedBranch };

struct ControlOutput {
  Vec u_c;
  Vec u_p;
  double P_value = 0.0;
  Branch branch = Branch::AttachedBranch;
};

/// Carrier motion after separation under ContinueWithFrozenEtc. Receives the
/// current errors and time; an empty planner keeps the carrier at rest.
using CarrierPlanner = std::function<Vec(const ErrorTriple&, double t)>;

enum class CarrierPolicyKind { StopOnSeparation, ContinueWithFrozenEtc };

struct CarrierPolicy {
  CarrierPolicyKind kind = CarrierPolicyKind::StopOnSeparation;
  CarrierPlanner planner;
};

/// Carrier law: drive toward the target while carrying the passenger, then
/// stop (or hand over to the planner) once the passenger has left.
Vec carrier_input(const ErrorTriple& errors, AttachmentMode mode, const Params& params,
                  const CarrierPolicy& policy = {}, double t = 0.0);

/// Passenger law. The sign of the potential gradient selects the branch:
///   P >= 0:  u_p = -P e_pc + u_c   (held on the carrier)
///   P <  0:  u_p =  P e_pt + u_c   (driven toward the target)
/// `frozen_etc_norm` replaces ||e_tc|| inside P when set.
ControlOutput passenger_input(const ErrorTriple& errors, const Vec& u_c, const Params& params,
                              std::optional<double> frozen_etc_norm = std::nullopt);

/// u_p - u_c. Both branches are scaled by P, so this is continuous across P = 0.
Vec relative_input(const ControlOutput& out);

inline constexpr double kDefaultBaselineGain = 1.0;

/// Event-triggered reference controller: the pair rides together while
/// ||e_tc|| > bc, then the carrier halts and the passenger switches to a
/// proportional go-to-target law. The switch produces an input jump of
/// ||k_nav e_pt||. `P_value` is still reported for comparison.
ControlOutput baseline_event_controller(const ErrorTriple& errors, AttachmentMode mode,
                                        const Params& params,
                                        double k_nav = kDefaultBaselineGain);

}  // namespace marsupial
