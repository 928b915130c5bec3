#include <sstream>

#include <gtest/gtest.h>

#include "marsupial/trajectory_io.hpp"
#include "oracles.hpp"

using namespace marsupial;

namespace {

Trajectory short_run(int dim) {
  SimConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 4.0;
  Vec dir = Vec::Ones(dim);
  return run(oracle::start_at_distance(12.0, dir), cfg, Params{});
}

}  // namespace

TEST(TrajectoryCsv, Header) {
  EXPECT_EQ(trajectory_csv_header(2),
            "t,xc1,xc2,xp1,xp2,uc1,uc2,up1,up2,e_pc,e_tc,e_pt,P,mode");
  EXPECT_EQ(trajectory_csv_header(3),
            "t,xc1,xc2,xc3,xp1,xp2,xp3,uc1,uc2,uc3,up1,up2,up3,e_pc,e_tc,e_pt,P,mode");
}

TEST(TrajectoryCsv, FirstRowFormatting) {
  Trajectory t;
  TrajectoryRow r;
  r.t = 0.1;
  r.x_c = r.x_p = r.u_c = r.u_p = Eigen::Vector2d(1.0 / 3.0, -2);
  r.e_tc = 8;
  r.mode = AttachmentMode::Separated;
  t.rows.push_back(r);
  std::ostringstream os;
  write_trajectory_csv(os, t);
  const auto text = os.str();
  const auto second = text.substr(text.find('\n') + 1);
  EXPECT_EQ(second,
            "0.10000000000000001,0.33333333333333331,-2,0.33333333333333331,-2,"
            "0.33333333333333331,-2,0.33333333333333331,-2,0,8,0,0,separated\n");
}

TEST(TrajectoryCsv, RoundTripIsExact) {
  for (int dim : {2, 3}) {
    const auto traj = short_run(dim);
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    std::istringstream is(os.str());
    const auto back = read_trajectory_csv(is);
    ASSERT_EQ(back.rows.size(), traj.rows.size());
    for (std::size_t i = 0; i < traj.rows.size(); ++i) {
      const auto& a = traj.rows[i];
      const auto& b = back.rows[i];
      EXPECT_EQ(a.t, b.t);
      EXPECT_EQ(a.x_c, b.x_c);
      EXPECT_EQ(a.x_p, b.x_p);
      EXPECT_EQ(a.u_c, b.u_c);
      EXPECT_EQ(a.u_p, b.u_p);
      EXPECT_EQ(a.e_pc, b.e_pc);
      EXPECT_EQ(a.P, b.P);
      EXPECT_EQ(a.mode, b.mode);
    }
    ASSERT_TRUE(back.separation_time.has_value());
    EXPECT_EQ(*back.separation_time, traj.rows[*traj.first_separated_row()].t);
    EXPECT_EQ(back.target.size(), 0);
    // and writing again gives the same bytes
    std::ostringstream again;
    write_trajectory_csv(again, back);
    EXPECT_EQ(again.str(), os.str());
  }
}

TEST(TrajectoryCsv, Deterministic) {
  std::ostringstream a, b;
  write_trajectory_csv(a, short_run(3));
  write_trajectory_csv(b, short_run(3));
  EXPECT_EQ(a.str(), b.str());
}

TEST(TrajectoryCsv, RejectsMalformed) {
  auto read = [](const std::string& s) {
    std::istringstream is(s);
    return read_trajectory_csv(is);
  };
  EXPECT_THROW(read(""), ConfigurationError);
  EXPECT_THROW(read("a,b,c\n"), ConfigurationError);
  const std::string h = trajectory_csv_header(2) + "\n";
  EXPECT_THROW(read(h + "0,1,2\n"), ConfigurationError);
  EXPECT_THROW(read(h + "0,0,0,0,0,0,0,0,0,0,8,8,1,flying\n"), ConfigurationError);
  EXPECT_THROW(read(h + "0,x,0,0,0,0,0,0,0,0,8,8,1,attached\n"), ConfigurationError);
  EXPECT_NO_THROW(read(h + "0,0,0,0,0,0,0,0,0,0,8,8,1,attached\r\n"));
}

TEST(TrajectorySvg, Structure) {
  auto traj = short_run(2);
  std::ostringstream os;
  write_trajectory_svg(os, traj, SvgOptions{640, 320, "demo"});
  const auto svg = os.str();
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("width=\"640\""), std::string::npos);
  EXPECT_NE(svg.find(">demo</text>"), std::string::npos);
  std::size_t polylines = 0;
  for (auto at = svg.find("<polyline"); at != std::string::npos; at = svg.find("<polyline", at + 1)) {
    ++polylines;
  }
  EXPECT_EQ(polylines, 5u);  // two paths, three distances
  EXPECT_NE(svg.find("stroke-dasharray=\"2 2\""), std::string::npos);  // separation marker
  EXPECT_EQ(svg.substr(svg.size() - 7), "</svg>\n");
  EXPECT_EQ(svg.find("nan"), std::string::npos);
}

TEST(TrajectorySvg, Decimates) {
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 30.0;
  const auto traj = run(oracle::start_at_distance(oracle::kReferenceEtc0, Eigen::Vector2d(1, 0)), cfg,
                        Params{});
  std::ostringstream os;
  write_trajectory_svg(os, traj);
  EXPECT_LT(os.str().size(), 250'000u);
}
