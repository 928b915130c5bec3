#include "marsupial/potential.hpp"

#include <cmath>
#include <ostream>

#include "marsupial/format.hpp"

namespace marsupial {

const char* to_string(EquilibriumRegime regime) {
  switch (regime) {
    case EquilibriumRegime::ThreeDistinct:
      return "three_distinct";
    case EquilibriumRegime::MidAtZero:
      return "mid_at_zero";
    case EquilibriumRegime::MidNegative:
      return "mid_negative";
  }
  return "unknown";
}

namespace {

double mid_root(double s, const Params& params) { return (s - params.bc()) / params.b; }

}  // namespace

double eval_P(double e_pc_norm, double e_tc_norm, const Params& params) {
  const double r = e_pc_norm;
  const double s = e_tc_norm;
  // Middle factor written as r - (s - bc)/b so it vanishes exactly at s = bc.
  return params.k_p * (r - s) * (r + params.d) * (r - mid_root(s, params));
}

EquilibriumSet equilibria(double e_tc_norm, const Params& params) {
  EquilibriumSet set;
  set.root_neg = -params.d;
  set.root_mid = mid_root(e_tc_norm, params);
  set.root_outer = e_tc_norm;
  if (std::abs(set.root_mid) <= kRegimeTolerance) {
    set.regime = EquilibriumRegime::MidAtZero;
  } else if (set.root_mid < 0.0) {
    set.regime = EquilibriumRegime::MidNegative;
  } else {
    set.regime = EquilibriumRegime::ThreeDistinct;
  }
  return set;
}

std::vector<PotentialSample> sweep_P(double e_tc_norm, std::span<const double> grid,
                                     const Params& params) {
  std::vector<PotentialSample> out;
  out.reserve(grid.size());
  for (double r : grid) out.push_back({r, eval_P(r, e_tc_norm, params)});
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  if (count == 0) return out;
  if (count == 1) return {lo};
  out.reserve(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i + 1 < count; ++i) out.push_back(lo + step * static_cast<double>(i));
  out.push_back(hi);
  return out;
}

void write_sweep_csv(std::ostream& os, std::span<const PotentialSample> samples) {
  os << "e_pc_norm,P\n";
  for (const auto& s : samples) os << format_real(s.e_pc_norm) << ',' << format_real(s.value) << '\n';
}

}  // namespace marsupial
