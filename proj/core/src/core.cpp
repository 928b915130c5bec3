#include "marsupial/core.hpp"

#include <cmath>
#include <sstream>

namespace marsupial {

const char* to_string(AttachmentMode mode) {
  return mode == AttachmentMode::Attached ? "attached" : "separated";
}

bool all_finite(const Vec& v) { return v.allFinite(); }

ErrorTriple compute_errors(const WorldState& state) {
  const auto n = state.x_c.size();
  if (state.x_p.size() != n || state.x_t.size() != n) {
    std::ostringstream msg;
    msg << "dimension mismatch: x_c has " << n << ", x_p has " << state.x_p.size()
        << ", x_t has " << state.x_t.size();
    throw ConfigurationError(msg.str());
  }
  // e_pt is formed from the other two so that e_pt = e_pc - e_tc holds bit for bit;
  // it differs from x_p - x_t by at most a few ulps.
  Vec e_pc = state.x_p - state.x_c;
  Vec e_tc = state.x_t - state.x_c;
  Vec e_pt = e_pc - e_tc;
  return ErrorTriple{std::move(e_pc), std::move(e_pt), std::move(e_tc)};
}

std::vector<Violation> validate(const Params& params, const WorldState& initial) {
  std::vector<Violation> out;
  auto add = [&out](const char* name, std::string detail) {
    out.push_back(Violation{name, std::move(detail)});
  };

  const std::pair<const char*, double> positives[] = {
      {"k_c", params.k_c}, {"k_p", params.k_p}, {"b", params.b},     {"c", params.c},
      {"d", params.d},     {"eta", params.eta}, {"eps_sep", params.eps_sep}};
  for (const auto& [name, value] : positives) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      add(violation::kPositiveGain, std::string(name) + " must be finite and > 0");
    }
  }
  if (!(params.b > 1.0)) {
    add(violation::kBGreaterThanOne, "b = " + std::to_string(params.b) + " must exceed 1");
  }
  if (!(params.bc() < params.eta)) {
    add(violation::kBcBelowEta, "b*c = " + std::to_string(params.bc()) +
                                    " must be below eta = " + std::to_string(params.eta));
  }

  const auto n = initial.x_c.size();
  if (n < 2 || initial.x_p.size() != n || initial.x_t.size() != n) {
    add(violation::kDimension, "x_c, x_p, x_t must share one dimension n >= 2");
    return out;
  }
  if (!all_finite(initial.x_c) || !all_finite(initial.x_p) || !all_finite(initial.x_t)) {
    add(violation::kFinite, "initial positions must be finite");
    return out;
  }

  const double etc0 = (initial.x_t - initial.x_c).norm();
  if (!(etc0 >= params.eta)) {
    add(violation::kInitialDistance, "||x_c(0) - x_t|| = " + std::to_string(etc0) +
                                         " is below eta = " + std::to_string(params.eta));
  }
  const double epc0 = (initial.x_p - initial.x_c).norm();
  if (!(epc0 <= params.eps_sep)) {
    add(violation::kCoincidentStart,
        "passenger must start on the carrier (||x_p(0) - x_c(0)|| = " + std::to_string(epc0) +
            ")");
  }
  return out;
}

}  // namespace marsupial
