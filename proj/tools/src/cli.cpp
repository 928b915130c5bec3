#include "marsupial_cli/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "marsupial/format.hpp"
#include "marsupial/marsupial.hpp"

namespace marsupial::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_number(std::string_view s, const std::string& what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw UsageError(what + ": `" + std::string(s) + "` is not a number");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto at = s.find(sep);
    parts.push_back(s.substr(0, at));
    if (at == std::string_view::npos) break;
    s.remove_prefix(at + 1);
  }
  return parts;
}

// "k_p=1,b=8,c=1,d=1" on top of the defaults.
Params parse_params(const std::string& text) {
  Params p;
  if (text.empty()) return p;
  const std::map<std::string, double Params::*> fields = {
      {"k_c", &Params::k_c}, {"k_p", &Params::k_p}, {"b", &Params::b},
      {"c", &Params::c},     {"d", &Params::d},     {"eta", &Params::eta}};
  for (auto item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw UsageError("--params: expected key=value, got `" +
                                                       std::string(item) + "`");
    const std::string key(item.substr(0, eq));
    const auto it = fields.find(key);
    if (it == fields.end()) throw UsageError("--params: unknown parameter `" + key + "`");
    p.*(it->second) = parse_number(item.substr(eq + 1), "--params " + key);
  }
  return p;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw UsageError("cannot write " + path.string());
  body(os);
  if (!os) throw UsageError("write failed: " + path.string());
}

std::optional<ScenarioFile> load(const std::string& path, std::ostream& err) {
  auto r = load_scenario(path);
  if (!r.ok()) {
    for (const auto& e : r.errors) err << path << ": " << e.describe() << '\n';
    return std::nullopt;
  }
  return std::move(*r.scenario);
}

Trajectory simulate(const ScenarioFile& s) { return run(s.initial_state(), s.sim_config(), s.params); }

int report_abort(const SimulationAborted& e, std::ostream& err) {
  const char* what = e.cause == SimulationAborted::Cause::NumericalDivergence
                         ? "numerical divergence"
                         : "safety filter infeasible";
  err << what << " at t = " << format_real(e.time) << ": " << e.what() << '\n';
  return kExitDivergence;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string scenario, out, svg, report;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  auto s = load(a.scenario, err);
  if (!s) return kExitValidation;
  const std::string csv = a.out.empty() ? s->out_csv : a.out;
  const std::string svg = a.svg.empty() ? s->out_svg : a.svg;
  const std::string report = a.report.empty() ? s->out_report : a.report;

  Trajectory traj;
  try {
    traj = simulate(*s);
  } catch (const SimulationAborted& e) {
    if (!csv.empty()) write_file(csv, [&](std::ostream& os) { write_trajectory_csv(os, e.partial); });
    return report_abort(e, err);
  }
  if (!csv.empty()) write_file(csv, [&](std::ostream& os) { write_trajectory_csv(os, traj); });
  if (!svg.empty()) {
    write_file(svg, [&](std::ostream& os) {
      write_trajectory_svg(os, traj, SvgOptions{.title = fs::path(a.scenario).filename().string()});
    });
  }
  const auto json = to_json(check_properties(traj, Thresholds::from(s->params)));
  if (!report.empty()) {
    write_file(report, [&](std::ostream& os) { os << json << '\n'; });
  } else {
    out << json << '\n';
  }
  return kExitOk;
}

struct AnalyzeArgs {
  std::string csv, report, scenario;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  std::ifstream in(a.csv);
  if (!in) {
    err << "cannot open " << a.csv << '\n';
    return kExitValidation;
  }
  Trajectory traj;
  try {
    traj = read_trajectory_csv(in);
  } catch (const ConfigurationError& e) {
    err << a.csv << ": " << e.what() << '\n';
    return kExitValidation;
  }
  Params params;
  std::optional<ScenarioFile> s;
  if (!a.scenario.empty()) {
    s = load(a.scenario, err);
    if (!s) return kExitValidation;
    params = s->params;
    if (s->x_t.size() == traj.dimension()) traj.target = s->x_t;
  }
  // The CSV only pins T to the first separated row; refine it inside the step.
  traj.separation_time = interpolate_separation_time(traj, params);
  auto j = nlohmann::ordered_json::parse(to_json(check_properties(traj, Thresholds::from(params))));
  if (traj.target.size() > 0) {
    const auto r = dynamics_residual(traj, params);
    j["residual"] = {{"max", r.max_residual}, {"samples", r.samples}, {"at_time", r.at_time}};
  }
  const auto text = j.dump(2);
  if (!a.report.empty()) {
    write_file(a.report, [&](std::ostream& os) { os << text << '\n'; });
  } else {
    out << text << '\n';
  }
  return kExitOk;
}

struct PotentialArgs {
  double etc = 0.0;
  std::string params, out;
  std::size_t samples = 801;
  std::optional<double> max;
};

int cmd_potential(const PotentialArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.etc >= 0.0)) {
    err << "--etc must be >= 0\n";
    return kExitValidation;
  }
  if (a.samples < 2) {
    err << "--samples must be at least 2\n";
    return kExitValidation;
  }
  const Params p = parse_params(a.params);
  const double hi = a.max.value_or(a.etc > 0.0 ? 1.25 * a.etc : 1.0);
  if (!(hi > 0.0)) {
    err << "--max must be > 0\n";
    return kExitValidation;
  }
  const auto grid = linspace(0.0, hi, a.samples);
  const auto samples = sweep_P(a.etc, grid, p);
  if (a.out.empty()) {
    write_sweep_csv(out, samples);
    return kExitOk;
  }
  write_file(a.out, [&](std::ostream& os) { write_sweep_csv(os, samples); });
  const auto eq = equilibria(a.etc, p);
  out << "roots " << format_real(eq.root_neg) << ' ' << format_real(eq.root_mid) << ' '
      << format_real(eq.root_outer) << " (" << to_string(eq.regime) << ")\n";
  return kExitOk;
}

struct BaselineArgs {
  std::string scenario, report;
  std::optional<double> k_nav;
};

int cmd_baseline(const BaselineArgs& a, std::ostream& out, std::ostream& err) {
  auto s = load(a.scenario, err);
  if (!s) return kExitValidation;
  if (a.k_nav) {
    if (!(*a.k_nav > 0.0)) {
      err << "--k-nav must be > 0\n";
      return kExitValidation;
    }
    s->k_nav = *a.k_nav;
  }
  ScenarioFile eq = *s, base = *s;
  eq.controller = ControllerKind::EquilibriumDriven;
  base.controller = ControllerKind::EventBaseline;
  SmoothnessComparison cmp;
  try {
    cmp = smoothness_report(simulate(eq), simulate(base), Thresholds::from(s->params));
  } catch (const SimulationAborted& e) {
    return report_abort(e, err);
  } catch (const std::invalid_argument& e) {
    err << e.what() << '\n';
    return kExitValidation;
  }
  const auto json = to_json(cmp);
  if (!a.report.empty()) {
    write_file(a.report, [&](std::ostream& os) { os << json << '\n'; });
  } else {
    out << json << '\n';
  }
  return kExitOk;
}

// Parameters `sweep` can vary.
bool set_param(ScenarioFile& s, const std::string& name, double v) {
  static const std::map<std::string, std::function<void(ScenarioFile&, double)>> setters = {
      {"k_c", [](ScenarioFile& s, double v) { s.params.k_c = v; }},
      {"k_p", [](ScenarioFile& s, double v) { s.params.k_p = v; }},
      {"b", [](ScenarioFile& s, double v) { s.params.b = v; }},
      {"c", [](ScenarioFile& s, double v) { s.params.c = v; }},
      {"d", [](ScenarioFile& s, double v) { s.params.d = v; }},
      {"eta", [](ScenarioFile& s, double v) { s.params.eta = v; }},
      {"dt", [](ScenarioFile& s, double v) { s.dt = v; }},
      {"t_end", [](ScenarioFile& s, double v) { s.t_end = v; }},
      {"k_nav", [](ScenarioFile& s, double v) { s.k_nav = v; }},
      {"cbf_alpha", [](ScenarioFile& s, double v) {
         s.cbf = s.cbf.value_or(CbfConfig{});
         s.cbf->alpha = v;
       }},
      {"cbf_margin", [](ScenarioFile& s, double v) {
         s.cbf = s.cbf.value_or(CbfConfig{});
         s.cbf->margin = v;
       }},
      // distance of the target from the carrier start along the initial direction
      {"etc0", [](ScenarioFile& s, double v) {
         const Vec dir = s.x_t - s.x_c;
         const double n = dir.norm();
         if (n > 0.0) s.x_t = s.x_c + dir * (v / n);
       }},
  };
  const auto it = setters.find(name);
  if (it == setters.end()) return false;
  it->second(s, v);
  return true;
}

struct SweepArgs {
  std::string scenario, param, range, out_dir = "sweep";
  unsigned jobs = 0;
};

struct SweepPoint {
  double value = 0.0;
  std::string status;
  std::string detail;
  std::optional<PropertyReport> report;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  auto base = load(a.scenario, err);
  if (!base) return kExitValidation;

  const auto parts = split(a.range, ':');
  if (parts.size() != 3) throw UsageError("--range: expected a:b:steps");
  const double lo = parse_number(parts[0], "--range start");
  const double hi = parse_number(parts[1], "--range end");
  const double steps_real = parse_number(parts[2], "--range steps");
  if (!(steps_real >= 1.0) || steps_real != std::floor(steps_real)) {
    throw UsageError("--range: steps must be a positive integer");
  }
  const auto steps = static_cast<std::size_t>(steps_real);
  {
    ScenarioFile probe = *base;
    if (!set_param(probe, a.param, lo)) throw UsageError("--param: cannot sweep `" + a.param + "`");
  }
  const auto values = steps == 1 ? std::vector<double>{lo} : linspace(lo, hi, steps);

  const fs::path dir = a.out_dir;
  fs::create_directories(dir);
  auto csv_name = [&](std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "point_%03zu.csv", i);
    return dir / buf;
  };

  // Points are independent; each worker writes only its own file and slot.
  std::vector<SweepPoint> points(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      auto& pt = points[i];
      pt.value = values[i];
      ScenarioFile s = *base;
      set_param(s, a.param, values[i]);
      if (auto issues = check_scenario(s); !issues.empty()) {
        pt.status = "invalid";
        pt.detail = issues.front().name;
        continue;
      }
      try {
        const auto traj = simulate(s);
        write_file(csv_name(i), [&](std::ostream& os) { write_trajectory_csv(os, traj); });
        pt.report = check_properties(traj, Thresholds::from(s.params));
        pt.status = "ok";
      } catch (const SimulationAborted& e) {
        write_file(csv_name(i), [&](std::ostream& os) { write_trajectory_csv(os, e.partial); });
        pt.status = e.cause == SimulationAborted::Cause::NumericalDivergence ? "diverged"
                                                                             : "infeasible";
        pt.detail = e.what();
      } catch (const std::exception& e) {
        pt.status = "error";
        pt.detail = e.what();
      }
    }
  };
  unsigned jobs = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(values.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  int code = kExitOk;
  write_file(dir / "summary.csv", [&](std::ostream& os) {
    os << "index," << a.param << ",status,T,final_ept,min_etc,all_pass,file\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& pt = points[i];
      os << i << ',' << format_real(pt.value) << ',' << pt.status << ',';
      if (pt.report) {
        const auto& r = *pt.report;
        os << (r.p1.T ? format_real(*r.p1.T) : "") << ',' << format_real(r.p2.final_ept) << ','
           << format_real(r.p3.min_etc) << ',' << (r.all_pass() ? "true" : "false");
      } else {
        os << ",,,";
      }
      os << ',' << (pt.status == "invalid" || pt.status == "error" ? "" : csv_name(i).filename().string())
         << '\n';
    }
  });
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    if (pt.status == "ok") continue;
    err << "point " << i << " (" << a.param << " = " << format_real(pt.value) << "): " << pt.status
        << (pt.detail.empty() ? "" : ": " + pt.detail) << '\n';
    code = std::max(code, pt.status == "invalid" || pt.status == "error" ? kExitValidation
                                                                          : kExitDivergence);
  }
  out << points.size() << " points written to " << dir.string() << '\n';
  return code;
}

struct PlotArgs {
  std::string csv, svg, title;
};

int cmd_plot(const PlotArgs& a, std::ostream&, std::ostream& err) {
  std::ifstream in(a.csv);
  if (!in) {
    err << "cannot open " << a.csv << '\n';
    return kExitValidation;
  }
  Trajectory traj;
  try {
    traj = read_trajectory_csv(in);
  } catch (const ConfigurationError& e) {
    err << a.csv << ": " << e.what() << '\n';
    return kExitValidation;
  }
  const std::string title = a.title.empty() ? fs::path(a.csv).filename().string() : a.title;
  write_file(a.svg, [&](std::ostream& os) { write_trajectory_svg(os, traj, SvgOptions{.title = title}); });
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Carrier-passenger separation simulator", "marsupial"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a scenario and check its properties");
  simulate_cmd->add_option("scenario", sim.scenario, "Scenario file")->required();
  simulate_cmd->add_option("--out", sim.out, "Trajectory CSV (defaults to out_csv)");
  simulate_cmd->add_option("--svg", sim.svg, "Trajectory SVG (defaults to out_svg)");
  simulate_cmd->add_option("--report", sim.report, "Property report JSON (defaults to stdout)");

  AnalyzeArgs ana;
  auto* analyze_cmd = app.add_subcommand("analyze", "Check properties of a recorded trajectory");
  analyze_cmd->add_option("csv", ana.csv, "Trajectory CSV")->required();
  analyze_cmd->add_option("--report", ana.report, "Report JSON (defaults to stdout)");
  analyze_cmd->add_option("--scenario", ana.scenario,
                          "Scenario the trajectory came from (parameters and target)");

  PotentialArgs pot;
  auto* potential_cmd = app.add_subcommand("potential", "Sample P over the passenger distance");
  potential_cmd->add_option("--etc", pot.etc, "Carrier-target distance, m")->required();
  potential_cmd->add_option("--params", pot.params, "Overrides, e.g. k_p=1,b=8,c=1,d=1");
  potential_cmd->add_option("--out", pot.out, "CSV path (defaults to stdout)");
  potential_cmd->add_option("--samples", pot.samples, "Grid points")->capture_default_str();
  potential_cmd->add_option("--max", pot.max, "Upper end of the grid, m (default 1.25 etc)");

  BaselineArgs bl;
  auto* baseline_cmd =
      app.add_subcommand("baseline", "Compare input smoothness against the event-triggered baseline");
  baseline_cmd->add_option("scenario", bl.scenario, "Scenario file")->required();
  baseline_cmd->add_option("--k-nav", bl.k_nav, "Baseline navigation gain");
  baseline_cmd->add_option("--report", bl.report, "Comparison JSON (defaults to stdout)");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Batch runs over one parameter");
  sweep_cmd->add_option("scenario", sw.scenario, "Base scenario file")->required();
  sweep_cmd->add_option("--param", sw.param,
                        "k_c, k_p, b, c, d, eta, dt, t_end, k_nav, cbf_alpha, cbf_margin or etc0")
      ->required();
  sweep_cmd->add_option("--range", sw.range, "start:end:points")->required();
  sweep_cmd->add_option("--out-dir", sw.out_dir, "Output directory")->capture_default_str();
  sweep_cmd->add_option("--jobs", sw.jobs, "Worker threads (0 = all cores)");

  PlotArgs pl;
  auto* plot_cmd = app.add_subcommand("plot", "Render a trajectory CSV as SVG");
  plot_cmd->add_option("csv", pl.csv, "Trajectory CSV")->required();
  plot_cmd->add_option("--svg", pl.svg, "SVG path")->required();
  plot_cmd->add_option("--title", pl.title, "Figure title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(sim, out, err);
    if (*analyze_cmd) return cmd_analyze(ana, out, err);
    if (*potential_cmd) return cmd_potential(pot, out, err);
    if (*baseline_cmd) return cmd_baseline(bl, out, err);
    if (*sweep_cmd) return cmd_sweep(sw, out, err);
    if (*plot_cmd) return cmd_plot(pl, out, err);
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return kExitValidation;
  } catch (const ConfigurationError& e) {
    err << e.what() << '\n';
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace marsupial::cli
