#include "marsupial/safety.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace marsupial {

namespace {

struct HalfSpace {
  Vec a;       // grad_h
  double rhs;  // -alpha h
};

bool satisfies(const HalfSpace& c, const Vec& u) {
  const double lhs = c.a.dot(u);
  const double slack = 1e-9 * std::max({1.0, std::abs(c.rhs), c.a.norm() * u.norm()});
  return lhs >= c.rhs - slack;
}

bool satisfies_all(std::span<const HalfSpace> cs, const Vec& u) {
  for (const auto& c : cs) {
    if (!satisfies(c, u)) return false;
  }
  return true;
}

}  // namespace

BarrierValue barrier(const Vec& x, const Obstacle& obs, double margin) {
  const Vec diff = x - obs.center;
  const double r = obs.radius + margin;
  return BarrierValue{diff.squaredNorm() - r * r, 2.0 * diff};
}

Vec filter(const Vec& u_nom, const Vec& x, std::span<const Obstacle> obstacles,
           const CbfConfig& cfg) {
  std::vector<HalfSpace> cs;
  cs.reserve(obstacles.size());
  bool nominal_ok = true;
  for (const auto& obs : obstacles) {
    auto [h, grad] = barrier(x, obs, cfg.margin);
    HalfSpace c{std::move(grad), -cfg.alpha * h};
    // Exact comparison here so an inactive filter is a bitwise no-op.
    if (c.a.dot(u_nom) < c.rhs) nominal_ok = false;
    cs.push_back(std::move(c));
  }
  if (nominal_ok) return u_nom;

  Vec best;
  double best_cost = std::numeric_limits<double>::infinity();
  auto consider = [&](Vec u) {
    if (!satisfies_all(cs, u)) return;
    const double cost = (u - u_nom).squaredNorm();
    if (cost < best_cost) {
      best_cost = cost;
      best = std::move(u);
    }
  };

  for (const auto& c : cs) {
    const double aa = c.a.squaredNorm();
    if (aa == 0.0) continue;
    const double mu = (c.rhs - c.a.dot(u_nom)) / aa;
    if (mu <= 0.0) continue;
    consider(u_nom + mu * c.a);
  }

  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      const auto& ci = cs[i];
      const auto& cj = cs[j];
      const double gii = ci.a.squaredNorm();
      const double gjj = cj.a.squaredNorm();
      const double gij = ci.a.dot(cj.a);
      const double det = gii * gjj - gij * gij;
      if (!(det > 1e-12 * gii * gjj)) continue;  // parallel or antiparallel normals
      const double ri = ci.rhs - ci.a.dot(u_nom);
      const double rj = cj.rhs - cj.a.dot(u_nom);
      const double mu_i = (gjj * ri - gij * rj) / det;
      const double mu_j = (gii * rj - gij * ri) / det;
      if (mu_i < 0.0 || mu_j < 0.0) continue;
      consider(u_nom + mu_i * ci.a + mu_j * cj.a);
    }
  }

  if (!std::isfinite(best_cost)) {
    std::ostringstream msg;
    msg << "CBF filter infeasible at x = [" << x.transpose() << "], u_nom = ["
        << u_nom.transpose() << "]; barrier values:";
    for (const auto& obs : obstacles) msg << ' ' << barrier(x, obs, cfg.margin).h;
    throw SafetyInfeasibleError(msg.str());
  }
  return best;
}

}  // namespace marsupial
