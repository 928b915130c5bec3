#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace marsupial {

/// Real coordinate vector in R^n. Positions are in meters, inputs in m/s.
using Vec = Eigen::VectorXd;

/// Tolerance standing in for the exact test ||e_pc|| == 0.
inline constexpr double kDefaultSeparationTolerance = 1e-9;

/// Control gains and potential-shape parameters.
///
/// The shape parameters place the zeros of the cubic potential gradient:
/// b > 1 keeps the middle zero below the outer one, and b * c < eta keeps the
/// middle zero positive at start-up.
struct Params {
  double k_c = 0.5;  ///< carrier gain, 1/s
  double k_p = 1.0;  ///< passenger gain
  double b = 8.0;
  double c = 1.0;  ///< m
  double d = 1.0;  ///< m
  double eta = 9.0;  ///< lower bound on the initial carrier-target distance, m
  double eps_sep = kDefaultSeparationTolerance;  ///< m

  /// Carrier-target distance at which the passenger separates.
  double bc() const { return b * c; }

  bool operator==(const Params&) const = default;
};

enum class AttachmentMode { Attached, Separated };

const char* to_string(AttachmentMode mode);

struct ErrorTriple {
  Vec e_pc;  ///< passenger minus carrier
  Vec e_pt;  ///< passenger minus target
  Vec e_tc;  ///< target minus carrier
};

struct WorldState {
  Vec x_c;
  Vec x_p;
  Vec x_t;
  AttachmentMode mode = AttachmentMode::Attached;
  /// ||e_tc|| recorded at separation; only set under the carrier-continue policy.
  std::optional<double> frozen_etc_norm;
  double t = 0.0;

  Eigen::Index dimension() const { return x_c.size(); }
};

/// Thrown for malformed inputs: dimension mismatches, non-finite vectors.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Position errors of the pair relative to each other and to the target.
ErrorTriple compute_errors(const WorldState& state);

/// A violated start-up condition, named by the condition it breaks.
struct Violation {
  std::string name;
  std::string detail;
};

namespace violation {
inline constexpr const char* kBGreaterThanOne = "Eq7.b_gt_1";
inline constexpr const char* kBcBelowEta = "Eq7.bc_lt_eta";
inline constexpr const char* kInitialDistance = "Assumption1.initial_distance";
inline constexpr const char* kCoincidentStart = "Assumption2.coincident_start";
inline constexpr const char* kPositiveGain = "Params.positive";
inline constexpr const char* kDimension = "State.dimension";
inline constexpr const char* kFinite = "State.finite";
}  // namespace violation

/// Checks parameter and initial-state preconditions. Returns every violated
/// condition; an empty list means the pair is admissible. Never throws.
std::vector<Violation> validate(const Params& params, const WorldState& initial);

bool all_finite(const Vec& v);

}  // namespace marsupial
