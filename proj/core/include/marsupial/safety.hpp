#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "marsupial/core.hpp"

namespace marsupial {

/// Spherical (circular in 2D) keep-out region.
struct Obstacle {
  Vec center;
  double radius = 1.0;

  bool operator==(const Obstacle& other) const {
    return radius == other.radius && center.size() == other.center.size() &&
           center == other.center;
  }
};

struct CbfConfig {
  double alpha = 1.0;   ///< slope of the linear class-K function, 1/s
  double margin = 0.0;  ///< inflation added to every radius, m

  bool operator==(const CbfConfig&) const = default;
};

/// Raised when the active constraints admit no input (e.g. two antipodal
/// half-spaces), or more constraints are simultaneously active than the
/// enumeration handles.
class SafetyInfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BarrierValue {
  double h;     ///< ||x - center||^2 - (radius + margin)^2
  Vec grad_h;   ///< 2 (x - center)
};

BarrierValue barrier(const Vec& x, const Obstacle& obs, double margin);

/// Minimally modifies `u_nom` so that grad_h_i . u >= -alpha h_i holds for
/// every obstacle, i.e. solves
///
///   min ||u - u_nom||^2  s.t.  A u >= rhs
///
/// by enumerating active sets of size 0, 1 and 2. The returned input equals
/// `u_nom` bit for bit when no constraint is violated.
Vec filter(const Vec& u_nom, const Vec& x, std::span<const Obstacle> obstacles,
           const CbfConfig& cfg);

}  // namespace marsupial
