#include "marsupial/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "marsupial/format.hpp"

namespace marsupial {

WorldState ScenarioFile::initial_state() const {
  WorldState s;
  s.x_c = x_c;
  s.x_p = x_p;
  s.x_t = x_t;
  return s;
}

SimConfig ScenarioFile::sim_config() const {
  SimConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.integrator = integrator;
  cfg.carrier_policy.kind = carrier_policy;
  cfg.planar_carrier = planar_carrier;
  cfg.controller = controller;
  cfg.k_nav = k_nav;
  if (cbf || !obstacles.empty()) {
    cfg.safety = SafetyConfig{cbf.value_or(CbfConfig{}), obstacles};
  }
  return cfg;
}

namespace {

bool same_vec(const Vec& a, const Vec& b) { return a.size() == b.size() && a == b; }

}  // namespace

bool ScenarioFile::operator==(const ScenarioFile& o) const {
  return dimension == o.dimension && same_vec(x_c, o.x_c) && same_vec(x_p, o.x_p) &&
         same_vec(x_t, o.x_t) && params == o.params && dt == o.dt && t_end == o.t_end &&
         integrator == o.integrator && carrier_policy == o.carrier_policy &&
         planar_carrier == o.planar_carrier && controller == o.controller && k_nav == o.k_nav &&
         cbf == o.cbf && obstacles == o.obstacles && out_csv == o.out_csv &&
         out_svg == o.out_svg && out_report == o.out_report;
}

std::string ScenarioIssue::describe() const {
  std::ostringstream os;
  if (line > 0) os << "line " << line << ": ";
  os << name << ": " << message;
  return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Parses `[a, b, ...]`; on success also returns the unparsed remainder.
std::optional<Vec> parse_vector(std::string_view s, std::string_view* rest = nullptr) {
  s = trim(s);
  if (s.empty() || s.front() != '[') return std::nullopt;
  const auto close = s.find(']');
  if (close == std::string_view::npos) return std::nullopt;
  std::string_view body = s.substr(1, close - 1);
  std::vector<double> values;
  if (!trim(body).empty()) {
    while (true) {
      const auto comma = body.find(',');
      const auto v = parse_real(body.substr(0, comma));
      if (!v) return std::nullopt;
      values.push_back(*v);
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
  }
  if (rest) {
    *rest = s.substr(close + 1);
  } else if (!trim(s.substr(close + 1)).empty()) {
    return std::nullopt;
  }
  return Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string parse_text(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::string render_vector(const Vec& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_real(v[i]);
  }
  return out + "]";
}

// Which key a semantic condition should point at.
const std::map<std::string, std::string>& issue_keys() {
  static const std::map<std::string, std::string> keys = {
      {violation::kBGreaterThanOne, "b"},
      {violation::kBcBelowEta, "eta"},
      {violation::kInitialDistance, "x_t"},
      {violation::kCoincidentStart, "x_p"},
      {"Sim.dt_positive", "dt"},
      {"Sim.t_end_positive", "t_end"},
      {"Planar.target_height", "x_t"},
      {"Safety.alpha_positive", "cbf_alpha"},
      {"Safety.margin_nonnegative", "cbf_margin"},
      {"Baseline.k_nav_positive", "k_nav"},
  };
  return keys;
}

}  // namespace

std::vector<ScenarioIssue> check_scenario(const ScenarioFile& s) {
  std::vector<ScenarioIssue> issues;
  auto add = [&](std::string name, std::string message) {
    issues.push_back(ScenarioIssue{0, std::move(name), std::move(message)});
  };

  const auto n = static_cast<Eigen::Index>(s.dimension);
  if (s.dimension < 2) add(violation::kDimension, "dimension must be at least 2");
  for (const auto& [name, v] : {std::pair<const char*, const Vec*>{"x_c", &s.x_c},
                                {"x_p", &s.x_p},
                                {"x_t", &s.x_t}}) {
    if (v->size() != n) {
      add(violation::kDimension, std::string(name) + " has " + std::to_string(v->size()) +
                                     " components, expected " + std::to_string(n));
    }
  }
  if (!issues.empty()) return issues;

  for (auto& v : validate(s.params, s.initial_state())) add(v.name, v.detail);

  if (!(s.dt > 0.0)) add("Sim.dt_positive", "dt must be > 0");
  if (!(s.t_end > 0.0)) add("Sim.t_end_positive", "t_end must be > 0");
  if (!(s.k_nav > 0.0)) add("Baseline.k_nav_positive", "k_nav must be > 0");
  if (s.planar_carrier) {
    const double height = std::abs(s.x_t[n - 1] - s.x_c[n - 1]);
    if (!(height <= s.params.bc())) {
      add("Planar.target_height", "target is " + format_real(height) +
                                      " off the carrier plane, above b*c = " +
                                      format_real(s.params.bc()));
    }
  }
  if (s.cbf) {
    if (!(s.cbf->alpha > 0.0)) add("Safety.alpha_positive", "cbf_alpha must be > 0");
    if (!(s.cbf->margin >= 0.0)) add("Safety.margin_nonnegative", "cbf_margin must be >= 0");
  }
  const double margin = s.cbf ? s.cbf->margin : 0.0;
  for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
    const auto& obs = s.obstacles[i];
    const std::string label = "obstacle " + std::to_string(i + 1);
    if (obs.center.size() != n) {
      add("Safety.dimension", label + " center has the wrong dimension");
      continue;
    }
    if (!(obs.radius > 0.0)) add("Safety.radius_positive", label + " radius must be > 0");
    if (!(barrier(s.x_c, obs, margin).h > 0.0) || !(barrier(s.x_p, obs, margin).h > 0.0)) {
      add("Safety.start_outside", label + " contains a starting position");
    }
  }
  return issues;
}

ParseResult parse_scenario(std::string_view text) {
  ParseResult result;
  auto& errors = result.errors;
  ScenarioFile s;
  std::map<std::string, int> seen;

  static const std::set<std::string> kKeys = {
      "dimension", "x_c",         "x_p",       "x_t",        "k_c",      "k_p",
      "b",         "c",           "d",         "eta",        "eps_sep",  "dt",
      "t_end",     "integrator",  "carrier_policy", "planar_carrier", "controller",
      "k_nav",     "cbf_alpha",   "cbf_margin", "obstacle",  "out_csv",  "out_svg",
      "out_report"};
  static const std::set<std::string> kRequired = {"dimension", "x_c", "x_t", "k_c", "k_p", "b",
                                                  "c",         "d",   "eta", "dt",  "t_end"};

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    auto syntax = [&](std::string msg) {
      errors.push_back(ScenarioIssue{line_no, "Syntax.error", std::move(msg)});
    };
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      syntax("expected `key = value`");
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!kKeys.count(key)) {
      errors.push_back(ScenarioIssue{line_no, "Syntax.unknown_key", "unknown key `" + key + "`"});
      continue;
    }
    if (key != "obstacle") {
      if (auto it = seen.find(key); it != seen.end()) {
        errors.push_back(ScenarioIssue{line_no, "Syntax.duplicate_key",
                                       "`" + key + "` already set on line " +
                                           std::to_string(it->second)});
        continue;
      }
      seen[key] = line_no;
    }
    if (value.empty()) {
      syntax("missing value for `" + key + "`");
      continue;
    }

    auto real = [&](double& out) {
      if (auto v = parse_real(value)) {
        out = *v;
      } else {
        syntax("`" + key + "` expects a number, got `" + std::string(value) + "`");
      }
    };
    auto vec = [&](Vec& out) {
      if (auto v = parse_vector(value)) {
        out = std::move(*v);
      } else {
        syntax("`" + key + "` expects a vector literal like [1, 2]");
      }
    };
    auto choice = [&](std::initializer_list<std::string_view> options) -> int {
      int i = 0;
      for (auto opt : options) {
        if (value == opt) return i;
        ++i;
      }
      std::string msg = "`" + key + "` must be one of:";
      for (auto opt : options) msg += " " + std::string(opt);
      syntax(msg);
      return -1;
    };
    auto ensure_cbf = [&]() -> CbfConfig& {
      if (!s.cbf) s.cbf = CbfConfig{};
      return *s.cbf;
    };

    if (key == "dimension") {
      double v = 0;
      real(v);
      if (v != std::floor(v) || v < 0 || v > 1e6) {
        syntax("`dimension` must be a non-negative integer");
      } else {
        s.dimension = static_cast<int>(v);
      }
    } else if (key == "x_c") {
      vec(s.x_c);
    } else if (key == "x_p") {
      vec(s.x_p);
    } else if (key == "x_t") {
      vec(s.x_t);
    } else if (key == "k_c") {
      real(s.params.k_c);
    } else if (key == "k_p") {
      real(s.params.k_p);
    } else if (key == "b") {
      real(s.params.b);
    } else if (key == "c") {
      real(s.params.c);
    } else if (key == "d") {
      real(s.params.d);
    } else if (key == "eta") {
      real(s.params.eta);
    } else if (key == "eps_sep") {
      real(s.params.eps_sep);
    } else if (key == "dt") {
      real(s.dt);
    } else if (key == "t_end") {
      real(s.t_end);
    } else if (key == "integrator") {
      if (int i = choice({"rk4", "euler"}); i >= 0) {
        s.integrator = i == 0 ? Integrator::RK4 : Integrator::Euler;
      }
    } else if (key == "carrier_policy") {
      if (int i = choice({"stop", "continue"}); i >= 0) {
        s.carrier_policy =
            i == 0 ? CarrierPolicyKind::StopOnSeparation : CarrierPolicyKind::ContinueWithFrozenEtc;
      }
    } else if (key == "planar_carrier") {
      if (int i = choice({"true", "false"}); i >= 0) s.planar_carrier = i == 0;
    } else if (key == "controller") {
      if (int i = choice({"equilibrium", "baseline"}); i >= 0) {
        s.controller = i == 0 ? ControllerKind::EquilibriumDriven : ControllerKind::EventBaseline;
      }
    } else if (key == "k_nav") {
      real(s.k_nav);
    } else if (key == "cbf_alpha") {
      real(ensure_cbf().alpha);
    } else if (key == "cbf_margin") {
      real(ensure_cbf().margin);
    } else if (key == "obstacle") {
      std::string_view rest;
      auto center = parse_vector(value, &rest);
      rest = trim(rest);
      std::optional<double> radius;
      if (center && !rest.empty() && rest.front() == ',') radius = parse_real(rest.substr(1));
      if (!center || !radius) {
        syntax("`obstacle` expects `[cx, cy, ...], radius`");
      } else {
        s.obstacles.push_back(Obstacle{std::move(*center), *radius});
      }
    } else if (key == "out_csv") {
      s.out_csv = parse_text(value);
    } else if (key == "out_svg") {
      s.out_svg = parse_text(value);
    } else if (key == "out_report") {
      s.out_report = parse_text(value);
    }
  }

  for (const auto& key : kRequired) {
    if (!seen.count(key)) {
      errors.push_back(ScenarioIssue{0, "Syntax.missing_key", "required key `" + key + "` is absent"});
    }
  }
  if (!errors.empty()) return result;

  if (s.x_p.size() == 0) s.x_p = s.x_c;
  if (!s.obstacles.empty() && !s.cbf) s.cbf = CbfConfig{};

  for (auto issue : check_scenario(s)) {
    if (auto it = issue_keys().find(issue.name); it != issue_keys().end()) {
      if (auto line = seen.find(it->second); line != seen.end()) issue.line = line->second;
    }
    errors.push_back(std::move(issue));
  }
  if (errors.empty()) result.scenario = std::move(s);
  return result;
}

ParseResult load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.errors.push_back(ScenarioIssue{0, "IO.unreadable", "cannot open " + path.string()});
    return r;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string render_scenario(const ScenarioFile& s) {
  std::ostringstream os;
  os << "dimension = " << s.dimension << '\n';
  os << "x_c = " << render_vector(s.x_c) << '\n';
  os << "x_p = " << render_vector(s.x_p) << '\n';
  os << "x_t = " << render_vector(s.x_t) << '\n';
  os << "k_c = " << format_real(s.params.k_c) << '\n';
  os << "k_p = " << format_real(s.params.k_p) << '\n';
  os << "b = " << format_real(s.params.b) << '\n';
  os << "c = " << format_real(s.params.c) << '\n';
  os << "d = " << format_real(s.params.d) << '\n';
  os << "eta = " << format_real(s.params.eta) << '\n';
  os << "eps_sep = " << format_real(s.params.eps_sep) << '\n';
  os << "dt = " << format_real(s.dt) << '\n';
  os << "t_end = " << format_real(s.t_end) << '\n';
  os << "integrator = " << to_string(s.integrator) << '\n';
  os << "carrier_policy = "
     << (s.carrier_policy == CarrierPolicyKind::StopOnSeparation ? "stop" : "continue") << '\n';
  os << "planar_carrier = " << (s.planar_carrier ? "true" : "false") << '\n';
  os << "controller = " << to_string(s.controller) << '\n';
  os << "k_nav = " << format_real(s.k_nav) << '\n';
  if (s.cbf) {
    os << "cbf_alpha = " << format_real(s.cbf->alpha) << '\n';
    os << "cbf_margin = " << format_real(s.cbf->margin) << '\n';
  }
  for (const auto& obs : s.obstacles) {
    os << "obstacle = " << render_vector(obs.center) << ", " << format_real(obs.radius) << '\n';
  }
  if (!s.out_csv.empty()) os << "out_csv = \"" << s.out_csv << "\"\n";
  if (!s.out_svg.empty()) os << "out_svg = \"" << s.out_svg << "\"\n";
  if (!s.out_report.empty()) os << "out_report = \"" << s.out_report << "\"\n";
  return os.str();
}

}  // namespace marsupial
