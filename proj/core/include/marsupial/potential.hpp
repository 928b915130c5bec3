#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "marsupial/core.hpp"

namespace marsupial {

enum class EquilibriumRegime { ThreeDistinct, MidAtZero, MidNegative };

const char* to_string(EquilibriumRegime regime);

/// Zeros of the potential gradient as a cubic in ||e_pc||.
struct EquilibriumSet {
  double root_neg = 0.0;    ///< -d, never physical
  double root_mid = 0.0;    ///< ||e_tc|| / b - c
  double root_outer = 0.0;  ///< ||e_tc||
  EquilibriumRegime regime = EquilibriumRegime::ThreeDistinct;
};

inline constexpr double kRegimeTolerance = 1e-12;

/// Cubic potential gradient
///   k_p (r - s) (r + d) (r - (s - bc)/b),  r = ||e_pc||, s = ||e_tc||,
/// evaluated in factored form so the zeros are exact.
double eval_P(double e_pc_norm, double e_tc_norm, const Params& params);

EquilibriumSet equilibria(double e_tc_norm, const Params& params);

struct PotentialSample {
  double e_pc_norm;
  double value;
};

std::vector<PotentialSample> sweep_P(double e_tc_norm, std::span<const double> grid,
                                     const Params& params);

/// `count` evenly spaced samples on [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// Two-column CSV, header `e_pc_norm,P`.
void write_sweep_csv(std::ostream& os, std::span<const PotentialSample> samples);

}  // namespace marsupial
