#pragma once

#include <iosfwd>
#include <string>

#include "marsupial/sim.hpp"

namespace marsupial {

/// Header line for an n-dimensional trajectory:
/// `t,xc1..xcn,xp1..xpn,uc1..ucn,up1..upn,e_pc,e_tc,e_pt,P,mode`.
std::string trajectory_csv_header(Eigen::Index dimension);

/// One row per recorded step, numbers printed with 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// Inverse of write_trajectory_csv. The separation time is taken as the time
/// of the first separated row; the target is left empty. Throws
/// ConfigurationError on malformed input.
Trajectory read_trajectory_csv(std::istream& is);

struct SvgOptions {
  int width = 960;
  int height = 480;
  std::string title;
};

/// Two panels: the path of both robots projected on the first two axes,
/// and the three distances over time.
void write_trajectory_svg(std::ostream& os, const Trajectory& traj, const SvgOptions& opts = {});

}  // namespace marsupial
