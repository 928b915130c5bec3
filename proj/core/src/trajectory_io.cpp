#include "marsupial/trajectory_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "marsupial/format.hpp"

namespace marsupial {

std::string trajectory_csv_header(Eigen::Index n) {
  std::string h = "t";
  for (const char* prefix : {"xc", "xp", "uc", "up"}) {
    for (Eigen::Index i = 1; i <= n; ++i) h += "," + std::string(prefix) + std::to_string(i);
  }
  return h + ",e_pc,e_tc,e_pt,P,mode";
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << trajectory_csv_header(traj.dimension()) << '\n';
  for (const auto& row : traj.rows) {
    os << format_real(row.t);
    for (const Vec* v : {&row.x_c, &row.x_p, &row.u_c, &row.u_p}) {
      for (Eigen::Index i = 0; i < v->size(); ++i) os << ',' << format_real((*v)[i]);
    }
    os << ',' << format_real(row.e_pc) << ',' << format_real(row.e_tc) << ','
       << format_real(row.e_pt) << ',' << format_real(row.P) << ',' << to_string(row.mode) << '\n';
  }
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

double to_real(std::string_view s, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigurationError("line " + std::to_string(line) + ": bad number `" + std::string(s) +
                             "`");
  }
  return v;
}

}  // namespace

Trajectory read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigurationError("empty trajectory file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  if (header.size() < 10 || (header.size() - 6) % 4 != 0) {
    throw ConfigurationError("unrecognized trajectory header");
  }
  const auto n = static_cast<Eigen::Index>((header.size() - 6) / 4);
  if (line != trajectory_csv_header(n)) throw ConfigurationError("unrecognized trajectory header");

  Trajectory traj;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw ConfigurationError("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " fields");
    }
    TrajectoryRow row;
    std::size_t c = 0;
    row.t = to_real(cells[c++], line_no);
    for (Vec* v : {&row.x_c, &row.x_p, &row.u_c, &row.u_p}) {
      v->resize(n);
      for (Eigen::Index i = 0; i < n; ++i) (*v)[i] = to_real(cells[c++], line_no);
    }
    row.e_pc = to_real(cells[c++], line_no);
    row.e_tc = to_real(cells[c++], line_no);
    row.e_pt = to_real(cells[c++], line_no);
    row.P = to_real(cells[c++], line_no);
    const auto mode = cells[c];
    if (mode == "attached") {
      row.mode = AttachmentMode::Attached;
    } else if (mode == "separated") {
      row.mode = AttachmentMode::Separated;
    } else {
      throw ConfigurationError("line " + std::to_string(line_no) + ": bad mode `" +
                               std::string(mode) + "`");
    }
    traj.rows.push_back(std::move(row));
  }
  if (auto k = traj.first_separated_row()) traj.separation_time = traj.rows[*k].t;
  return traj;
}

namespace {

struct Box {
  double x0, y0, w, h;  // pixel frame
  double lo_x = std::numeric_limits<double>::infinity();
  double hi_x = -std::numeric_limits<double>::infinity();
  double lo_y = std::numeric_limits<double>::infinity();
  double hi_y = -std::numeric_limits<double>::infinity();

  void include(double x, double y) {
    lo_x = std::min(lo_x, x);
    hi_x = std::max(hi_x, x);
    lo_y = std::min(lo_y, y);
    hi_y = std::max(hi_y, y);
  }
  void finish(bool equal_aspect) {
    if (!(hi_x > lo_x)) hi_x = lo_x + 1.0;
    if (!(hi_y > lo_y)) hi_y = lo_y + 1.0;
    if (equal_aspect) {
      const double sx = (hi_x - lo_x) / w;
      const double sy = (hi_y - lo_y) / h;
      const double s = std::max(sx, sy);
      const double cx = 0.5 * (lo_x + hi_x);
      const double cy = 0.5 * (lo_y + hi_y);
      lo_x = cx - 0.5 * s * w;
      hi_x = cx + 0.5 * s * w;
      lo_y = cy - 0.5 * s * h;
      hi_y = cy + 0.5 * s * h;
    }
  }
  double px(double x) const { return x0 + (x - lo_x) / (hi_x - lo_x) * w; }
  double py(double y) const { return y0 + h - (y - lo_y) / (hi_y - lo_y) * h; }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Keeps at most ~2000 points per polyline.
template <typename Fn>
void polyline(std::ostream& os, const Box& box, std::size_t count, Fn point, const char* color,
              const char* dash = nullptr) {
  const std::size_t stride = std::max<std::size_t>(1, count / 2000);
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
  if (dash) os << " stroke-dasharray=\"" << dash << "\"";
  os << " points=\"";
  for (std::size_t i = 0; i < count; i += stride) {
    const auto [x, y] = point(i);
    os << fmt(box.px(x)) << ',' << fmt(box.py(y)) << ' ';
  }
  if (count > 0 && (count - 1) % stride != 0) {
    const auto [x, y] = point(count - 1);
    os << fmt(box.px(x)) << ',' << fmt(box.py(y));
  }
  os << "\"/>\n";
}

void axes(std::ostream& os, const Box& box, const std::string& xlabel, const std::string& ylabel) {
  os << "<rect x=\"" << fmt(box.x0) << "\" y=\"" << fmt(box.y0) << "\" width=\"" << fmt(box.w)
     << "\" height=\"" << fmt(box.h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  const double bottom = box.y0 + box.h;
  os << "<text x=\"" << fmt(box.x0) << "\" y=\"" << fmt(bottom + 16) << "\">" << label(box.lo_x)
     << "</text>\n";
  os << "<text x=\"" << fmt(box.x0 + box.w) << "\" y=\"" << fmt(bottom + 16)
     << "\" text-anchor=\"end\">" << label(box.hi_x) << "</text>\n";
  os << "<text x=\"" << fmt(box.x0 + box.w / 2) << "\" y=\"" << fmt(bottom + 32)
     << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  os << "<text x=\"" << fmt(box.x0 - 6) << "\" y=\"" << fmt(bottom) << "\" text-anchor=\"end\">"
     << label(box.lo_y) << "</text>\n";
  os << "<text x=\"" << fmt(box.x0 - 6) << "\" y=\"" << fmt(box.y0 + 10)
     << "\" text-anchor=\"end\">" << label(box.hi_y) << "</text>\n";
  os << "<text x=\"" << fmt(box.x0 + 4) << "\" y=\"" << fmt(box.y0 - 6) << "\">" << ylabel
     << "</text>\n";
}

}  // namespace

void write_trajectory_svg(std::ostream& os, const Trajectory& traj, const SvgOptions& opts) {
  const auto& rows = traj.rows;
  const double margin = 56.0;
  const double panel_w = opts.width / 2.0 - 1.5 * margin;
  const double panel_h = opts.height - 2.0 * margin;

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
     << opts.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty()) {
    os << "<text x=\"" << opts.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
       << opts.title << "</text>\n";
  }

  Box path{margin, margin, panel_w, panel_h};
  for (const auto& r : rows) {
    path.include(r.x_c[0], r.x_c[1]);
    path.include(r.x_p[0], r.x_p[1]);
  }
  if (traj.target.size() >= 2) path.include(traj.target[0], traj.target[1]);
  path.finish(true);
  axes(os, path, "x1 [m]", "x2 [m]");
  polyline(os, path, rows.size(), [&](std::size_t i) {
    return std::pair{rows[i].x_c[0], rows[i].x_c[1]};
  }, "#1f77b4");
  polyline(os, path, rows.size(), [&](std::size_t i) {
    return std::pair{rows[i].x_p[0], rows[i].x_p[1]};
  }, "#d62728", "4 3");
  if (traj.target.size() >= 2) {
    os << "<circle cx=\"" << fmt(path.px(traj.target[0])) << "\" cy=\""
       << fmt(path.py(traj.target[1])) << "\" r=\"4\" fill=\"black\"/>\n";
  }

  Box dist{opts.width / 2.0 + margin / 2.0, margin, panel_w, panel_h};
  for (const auto& r : rows) {
    dist.include(r.t, r.e_pc);
    dist.include(r.t, r.e_tc);
    dist.include(r.t, r.e_pt);
  }
  if (!rows.empty()) dist.include(rows.front().t, 0.0);
  dist.finish(false);
  axes(os, dist, "t [s]", "distance [m]");
  polyline(os, dist, rows.size(), [&](std::size_t i) { return std::pair{rows[i].t, rows[i].e_pc}; },
           "#d62728");
  polyline(os, dist, rows.size(), [&](std::size_t i) { return std::pair{rows[i].t, rows[i].e_tc}; },
           "#1f77b4");
  polyline(os, dist, rows.size(), [&](std::size_t i) { return std::pair{rows[i].t, rows[i].e_pt}; },
           "#2ca02c");
  const double lx = dist.x0 + dist.w - 90;
  const char* names[] = {"|e_pc|", "|e_tc|", "|e_pt|"};
  const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c"};
  for (int i = 0; i < 3; ++i) {
    const double ly = dist.y0 + 16 + 14 * i;
    os << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\"" << fmt(lx + 18)
       << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << colors[i] << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fmt(lx + 24) << "\" y=\"" << fmt(ly) << "\">" << names[i] << "</text>\n";
  }
  if (traj.separation_time) {
    const double x = dist.px(*traj.separation_time);
    os << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(dist.y0) << "\" x2=\"" << fmt(x)
       << "\" y2=\"" << fmt(dist.y0 + dist.h) << "\" stroke=\"#888\" stroke-dasharray=\"2 2\"/>\n";
  }
  os << "</svg>\n";
}

}  // namespace marsupial
