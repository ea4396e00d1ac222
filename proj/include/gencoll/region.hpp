#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gencoll/barrier.hpp"
#include "gencoll/collision_graph.hpp"
#include "gencoll/error.hpp"
#include "gencoll/rational.hpp"
#include "gencoll/spectral.hpp"

namespace gencoll {

// C_i = f_i * prod_{j in I(i)} (1 - f_j). Works for Rational (exact) and double.
template <typename T>
std::vector<T> throughput_point(std::span<const T> f, const CollisionGraph& g) {
  if (f.size() != g.num_links())
    throw DomainError("duty factor vector has " + std::to_string(f.size()) + " entries, profile has " +
                      std::to_string(g.num_links()) + " links");
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!(f[i] >= T(0) && f[i] <= T(1)))
      throw DomainError("duty factor f_" + std::to_string(i + 1) + " outside [0, 1]");
  std::vector<T> c(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    T v = f[i];
    for (std::size_t j : g.interferers(i)) v *= T(1) - f[j];
    c[i] = v;
  }
  return c;
}

template <typename T>
std::vector<T> throughput_point(const std::vector<T>& f, const CollisionGraph& g) {
  return throughput_point(std::span<const T>(f), g);
}

// F(E + I) with F = diag(f).
inline Grid<double> weighted_adjacency(std::span<const double> f, const CollisionGraph& g) {
  const std::size_t m = g.num_links();
  if (f.size() != m) throw DomainError("duty factor vector size does not match the profile");
  const auto e = g.adjacency_matrix();
  Grid<double> a(m, m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a(i, j) = f[i] * (e(i, j) + (i == j ? 1.0 : 0.0));
  return a;
}

inline bool in_open_box(std::span<const double> f) {
  return std::all_of(f.begin(), f.end(), [](double v) { return v > 0.0 && v < 1.0; });
}

// Perron root of F(E+I) to within tol.
inline PerronRoot spectral_radius(std::span<const double> f, const CollisionGraph& g, double tol = 1e-9) {
  for (double v : f)
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("duty factors must lie in [0, 1]");
  // Bisection is cheap; resolve well below the requested tolerance.
  auto root = perron_root(weighted_adjacency(f, g), std::min(tol, 1e-12) / 4);
  if (root.error_bound <= tol) root.converged = true;
  return root;
}

inline PerronRoot spectral_radius(const std::vector<double>& f, const CollisionGraph& g, double tol = 1e-9) {
  return spectral_radius(std::span<const double>(f), g, tol);
}

// g_k(f) = ln T_k - ln f_k - sum_{i in I(k)} ln(1 - f_i); -inf when T_k <= 0.
inline double log_constraint(std::span<const double> f, double target, std::size_t k, const CollisionGraph& g) {
  if (!(target > 0.0)) return -std::numeric_limits<double>::infinity();
  double v = std::log(target) - std::log(f[k]);
  for (std::size_t i : g.interferers(k)) v -= std::log1p(-f[i]);
  return v;
}

struct KktResiduals {
  double primal = 0.0;        // max_k max(0, g_k)
  double box = 0.0;           // 0 inside (0,1)^M, +inf otherwise
  double dual = 0.0;          // max(0, -min lambda)
  double slackness = 0.0;     // max_k |lambda_k g_k|
  double stationarity = 0.0;  // ||lambda - F(E+I) lambda||_inf

  double max() const { return std::max({primal, box, dual, slackness, stationarity}); }
};

// lambda[0] must equal 1 (objective weight); targets[k-1] is the target of link k, k >= 1.
inline KktResiduals kkt_residual(std::span<const double> f, std::span<const double> lambda,
                                 std::span<const double> targets, const CollisionGraph& g) {
  const std::size_t m = g.num_links();
  if (f.size() != m || lambda.size() != m || targets.size() + 1 != m)
    throw DomainError("kkt_residual: expected " + std::to_string(m) + " duty factors and multipliers and " +
                      std::to_string(m - 1) + " targets");
  if (lambda[0] != 1.0) throw DomainError("kkt_residual: lambda_1 must equal 1");
  constexpr double inf = std::numeric_limits<double>::infinity();
  KktResiduals r;
  for (double l : lambda) r.dual = std::max(r.dual, -l);
  if (!in_open_box(f)) {
    r.box = r.primal = r.slackness = inf;
  } else {
    for (std::size_t k = 1; k < m; ++k) {
      const double gk = log_constraint(f, targets[k - 1], k, g);
      r.primal = std::max(r.primal, gk);
      const double s = lambda[k] == 0.0 ? 0.0 : std::abs(lambda[k] * gk);
      r.slackness = std::max(r.slackness, s);
    }
  }
  const auto a = weighted_adjacency(f, g);
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) row += a(i, j) * lambda[j];
    r.stationarity = std::max(r.stationarity, std::abs(lambda[i] - row));
  }
  return r;
}

inline KktResiduals kkt_residual(const std::vector<double>& f, const std::vector<double>& lambda,
                                 const std::vector<double>& targets, const CollisionGraph& g) {
  return kkt_residual(std::span<const double>(f), std::span<const double>(lambda), std::span<const double>(targets), g);
}

enum class BoundaryVerdict { on_boundary, interior, degenerate };

inline const char* to_string(BoundaryVerdict v) {
  switch (v) {
    case BoundaryVerdict::on_boundary: return "on-boundary";
    case BoundaryVerdict::interior: return "interior";
    case BoundaryVerdict::degenerate: return "degenerate-uncharacterized";
  }
  return "?";
}

struct BoundaryCertificate {
  std::vector<double> f;
  double rho = 0.0;
  double rho_error = 0.0;
  // Perron vector scaled to lambda_1 = 1; empty when its first entry vanishes.
  std::vector<double> lambda;
  // KKT residuals against the tight targets T_k = C_k(f).
  std::optional<KktResiduals> residuals;
  BoundaryVerdict verdict = BoundaryVerdict::interior;
  // Exact decision from rational arithmetic, when available.
  std::optional<bool> exact_on_boundary;
};

namespace detail {

inline Rational exact_determinant(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][k] == 0) ++p;
    if (p == n) return Rational(0);
    if (p != k) {
      std::swap(a[p], a[k]);
      det = -det;
    }
    det *= a[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      const Rational factor = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= factor * a[k][j];
    }
  }
  return det;
}

}  // namespace detail

inline constexpr std::size_t kExactBoundaryMaxLinks = 10;

// rho(F(E+I)) == 1 exactly iff det(I - F(E+I)) = 0 and every principal minor of
// the Z-matrix I - F(E+I) is nonnegative (it is then a singular M-matrix).
// nullopt when f is outside (0,1)^M or M exceeds kExactBoundaryMaxLinks.
inline std::optional<bool> exact_on_boundary(const std::vector<Rational>& f, const CollisionGraph& g) {
  const std::size_t m = g.num_links();
  if (f.size() != m) throw DomainError("duty factor vector size does not match the profile");
  if (m > kExactBoundaryMaxLinks) return std::nullopt;
  for (const auto& v : f)
    if (!(v > 0 && v < 1)) return std::nullopt;
  const auto e = g.adjacency_matrix();
  std::vector<std::vector<Rational>> b(m, std::vector<Rational>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) b[i][j] = Rational(i == j ? 1 : 0) - f[i] * (e(i, j) + (i == j ? 1 : 0));
  if (detail::exact_determinant(b) != 0) return false;
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << m); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1U) idx.push_back(i);
    std::vector<std::vector<Rational>> sub(idx.size(), std::vector<Rational>(idx.size()));
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) sub[r][c] = b[idx[r]][idx[c]];
    if (detail::exact_determinant(std::move(sub)) < 0) return false;
  }
  return true;
}

// f maps to an outer-boundary point iff the Perron root of F(E+I) is 1.
inline BoundaryCertificate is_on_outer_boundary(std::span<const double> f, const CollisionGraph& g,
                                                double tol = 1e-9) {
  BoundaryCertificate cert;
  cert.f.assign(f.begin(), f.end());
  const auto root = spectral_radius(f, g, tol);
  if (!root.converged)
    throw DomainError("spectral radius did not converge (achieved bound " + std::to_string(root.error_bound) + ")");
  cert.rho = root.rho;
  cert.rho_error = root.error_bound;
  if (!in_open_box(f)) {
    cert.verdict = BoundaryVerdict::degenerate;
    return cert;
  }
  cert.verdict = std::abs(root.rho - 1.0) <= tol ? BoundaryVerdict::on_boundary : BoundaryVerdict::interior;
  if (root.eigenvector[0] > 0.0) {
    cert.lambda = root.eigenvector;
    const double scale = root.eigenvector[0];
    for (auto& v : cert.lambda) v /= scale;
    cert.lambda[0] = 1.0;
    const auto c = throughput_point(f, g);
    std::vector<double> targets(c.begin() + 1, c.end());
    cert.residuals = kkt_residual(f, std::span<const double>(cert.lambda), std::span<const double>(targets), g);
  }
  return cert;
}

inline BoundaryCertificate is_on_outer_boundary(const std::vector<double>& f, const CollisionGraph& g,
                                                double tol = 1e-9) {
  return is_on_outer_boundary(std::span<const double>(f), g, tol);
}

struct BoundaryProjection {
  std::vector<double> f;  // input scaled by 1/rho
  double rho = 0.0;       // Perron root of the input
  double projected_rho = 0.0;
  std::vector<std::size_t> degenerate;  // links whose scaled duty factor reached 1
};

// Scales f by 1/rho so the Perron root becomes 1.
inline BoundaryProjection project_to_boundary(std::span<const double> f, const CollisionGraph& g, double tol = 1e-9) {
  if (!in_open_box(f)) throw DomainError("project_to_boundary needs f in (0,1)^M");
  const auto root = spectral_radius(f, g, tol);
  if (!root.converged) throw DomainError("spectral radius did not converge");
  BoundaryProjection out;
  out.rho = root.rho;
  out.f.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    // rho >= f_i since f_i is a diagonal entry of F(E+I).
    const double v = std::min(1.0, f[i] / root.rho);
    if (v >= 1.0 - tol) out.degenerate.push_back(i);
    out.f.push_back(v);
  }
  out.projected_rho = spectral_radius(out.f, g, tol).rho;
  return out;
}

inline BoundaryProjection project_to_boundary(const std::vector<double>& f, const CollisionGraph& g,
                                              double tol = 1e-9) {
  return project_to_boundary(std::span<const double>(f), g, tol);
}

struct SolverOptions {
  double tol = 1e-7;
  std::size_t max_outer = 40;
};

namespace detail {

inline LogSeparable log_constraint_fn(const CollisionGraph& g, std::size_t k, double target, Eigen::Index vars) {
  const auto m = static_cast<Eigen::Index>(g.num_links());
  LogSeparable fn;
  fn.constant = std::log(target);
  fn.log_coef = Eigen::VectorXd::Zero(m);
  fn.log1m_coef = Eigen::VectorXd::Zero(m);
  fn.linear = Eigen::VectorXd::Zero(vars);
  fn.log_coef[static_cast<Eigen::Index>(k)] = -1.0;
  for (std::size_t i : g.interferers(k)) fn.log1m_coef[static_cast<Eigen::Index>(i)] = -1.0;
  return fn;
}

// Minimizes s subject to g_k(f) <= s over the links with a positive target.
// Returns (f, s, lower bound on the optimal s).
struct PhaseOneResult {
  Eigen::VectorXd f;
  double s = 0.0;
  double s_lower = 0.0;
};

inline PhaseOneResult phase_one(const CollisionGraph& g, std::span<const double> targets, bool stop_at_feasible,
                                const SolverOptions& options) {
  const auto m = static_cast<Eigen::Index>(g.num_links());
  BarrierProblem p;
  p.box_vars = static_cast<std::size_t>(m);
  p.objective.log_coef = Eigen::VectorXd::Zero(m);
  p.objective.log1m_coef = Eigen::VectorXd::Zero(m);
  p.objective.linear = Eigen::VectorXd::Zero(m + 1);
  p.objective.linear[m] = 1.0;
  for (std::size_t k = 0; k < g.num_links(); ++k) {
    if (!(targets[k] > 0.0)) continue;
    auto c = log_constraint_fn(g, k, targets[k], m + 1);
    c.linear[m] = -1.0;
    p.constraints.push_back(std::move(c));
  }
  std::size_t widest = 1;
  for (std::size_t i = 0; i < g.num_links(); ++i) widest = std::max(widest, g.index_set(i).size());
  Eigen::VectorXd x(m + 1);
  x.head(m).setConstant(1.0 / static_cast<double>(widest + 1));
  double s0 = 0.0;
  for (const auto& c : p.constraints) s0 = std::max(s0, c.value(x));
  x[m] = s0 + 1.0;

  BarrierOptions bo;
  bo.max_outer = options.max_outer;
  bo.gap_tol = 1e-12;
  if (stop_at_feasible) {
    bo.stop_when = [&](const Eigen::VectorXd& z) {
      for (const auto& c : p.constraints)
        if (!(c.value(z) + z[m] < 0.0)) return false;  // g_k(f) < 0
      return true;
    };
  }
  const auto r = solve_barrier(p, x, bo);
  PhaseOneResult out;
  out.f = r.x.head(m);
  out.s = r.x[m];
  out.s_lower = out.s - r.gap_bound;
  return out;
}

// Newton on the KKT system for a fixed active set: unknowns (f, lambda_active).
inline bool polish_kkt(const CollisionGraph& g, std::span<const double> full_targets, const std::vector<std::size_t>& active,
                       std::vector<double>& f, std::vector<double>& lambda) {
  const std::size_t m = g.num_links();
  const std::size_t na = active.size();
  const auto e = g.adjacency_matrix();
  auto ei = [&](std::size_t i, std::size_t j) { return e(i, j) + (i == j ? 1.0 : 0.0); };

  std::vector<double> lam(m, 0.0);
  lam[0] = 1.0;
  for (std::size_t a : active) lam[a] = std::max(lambda[a], 1e-12);
  std::vector<double> x = f;

  auto residual = [&](const std::vector<double>& ff, const std::vector<double>& ll) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(m + na));
    for (std::size_t i = 0; i < m; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < m; ++j) row += ei(i, j) * ll[j];
      r[static_cast<Eigen::Index>(i)] = ff[i] * row - ll[i];
    }
    for (std::size_t a = 0; a < na; ++a)
      r[static_cast<Eigen::Index>(m + a)] = log_constraint(ff, full_targets[active[a]], active[a], g);
    return r;
  };

  Eigen::VectorXd r = residual(x, lam);
  for (int it = 0; it < 100 && r.lpNorm<Eigen::Infinity>() > 1e-15; ++it) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m + na), static_cast<Eigen::Index>(m + na));
    for (std::size_t i = 0; i < m; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < m; ++j) row += ei(i, j) * lam[j];
      jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = row;
      for (std::size_t a = 0; a < na; ++a)
        jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m + a)) =
            x[i] * ei(i, active[a]) - (i == active[a] ? 1.0 : 0.0);
    }
    for (std::size_t a = 0; a < na; ++a) {
      const std::size_t k = active[a];
      const auto row = static_cast<Eigen::Index>(m + a);
      jac(row, static_cast<Eigen::Index>(k)) = -1.0 / x[k];
      for (std::size_t i : g.interferers(k)) jac(row, static_cast<Eigen::Index>(i)) = 1.0 / (1.0 - x[i]);
    }
    const Eigen::VectorXd step = jac.fullPivLu().solve(-r);
    if (!step.allFinite()) return false;
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
      std::vector<double> xn = x;
      std::vector<double> ln = lam;
      for (std::size_t i = 0; i < m; ++i) xn[i] += alpha * step[static_cast<Eigen::Index>(i)];
      for (std::size_t a = 0; a < na; ++a) ln[active[a]] += alpha * step[static_cast<Eigen::Index>(m + a)];
      if (!in_open_box(xn)) continue;
      const Eigen::VectorXd rn = residual(xn, ln);
      if (rn.lpNorm<Eigen::Infinity>() < r.lpNorm<Eigen::Infinity>() || alpha < 1e-6) {
        x = std::move(xn);
        lam = std::move(ln);
        r = rn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  f = std::move(x);
  lambda = std::move(lam);
  return r.allFinite();
}

}  // namespace detail

struct Op2Solution {
  std::vector<double> f_star;
  double objective = 0.0;      // C_1(f_star)
  std::vector<double> lambda;  // lambda[0] = 1
  KktResiduals residuals;
  double kkt_residual = 0.0;   // residuals.max()
  bool converged = false;
};

// Maximize C_1(f) subject to C_k(f) >= targets[k-1] for k = 2..M over (0,1)^M,
// via a log-barrier method on the convex log-domain program followed by a
// Newton polish of the KKT system. converged iff the KKT residual <= tol.
inline Op2Solution solve_op2(std::span<const double> targets, const CollisionGraph& g, const SolverOptions& options = {}) {
  const std::size_t m = g.num_links();
  if (targets.size() + 1 != m)
    throw DomainError("solve_op2 expects " + std::to_string(m - 1) + " targets (links 2..M)");
  for (double t : targets)
    if (!(t > 0.0)) throw DomainError("solve_op2 targets must be positive");
  if (g.interferers(0).empty()) throw DomainError("link 1 must have a nonempty collision set");

  std::vector<double> full(m, 0.0);
  std::copy(targets.begin(), targets.end(), full.begin() + 1);

  const auto p1 = detail::phase_one(g, full, true, options);
  for (std::size_t k = 1; k < m; ++k)
    if (!(log_constraint(std::span<const double>(p1.f.data(), m), full[k], k, g) < 0.0)) {
      if (p1.s_lower > 0.0) throw DomainError("targets are infeasible");
      throw DomainError("no strictly feasible duty factors found for these targets");
    }

  const auto mi = static_cast<Eigen::Index>(m);
  detail::BarrierProblem p;
  p.box_vars = m;
  p.objective.log_coef = Eigen::VectorXd::Zero(mi);
  p.objective.log1m_coef = Eigen::VectorXd::Zero(mi);
  p.objective.linear = Eigen::VectorXd::Zero(mi);
  p.objective.log_coef[0] = -1.0;
  for (std::size_t i : g.interferers(0)) p.objective.log1m_coef[static_cast<Eigen::Index>(i)] = -1.0;
  for (std::size_t k = 1; k < m; ++k) p.constraints.push_back(detail::log_constraint_fn(g, k, full[k], mi));
  detail::BarrierOptions bo;
  bo.max_outer = options.max_outer;
  bo.gap_tol = 1e-10;
  const auto r = detail::solve_barrier(p, p1.f, bo);

  auto evaluate = [&](std::vector<double> f, std::vector<double> lambda) {
    Op2Solution s;
    s.residuals = kkt_residual(std::span<const double>(f), std::span<const double>(lambda),
                               std::span<const double>(targets), g);
    s.kkt_residual = s.residuals.max();
    s.f_star = std::move(f);
    s.lambda = std::move(lambda);
    return s;
  };

  std::vector<double> f0(r.x.data(), r.x.data() + m);
  std::vector<double> l0(m, 0.0);
  l0[0] = 1.0;
  for (std::size_t k = 1; k < m; ++k) l0[k] = r.multipliers[static_cast<Eigen::Index>(k - 1)];
  Op2Solution best = evaluate(f0, l0);

  std::vector<std::vector<std::size_t>> candidates;
  for (double tau : {1e-2, 1e-4, 1e-6, 1e-8}) {
    std::vector<std::size_t> by_multiplier, by_slack;
    for (std::size_t k = 1; k < m; ++k) {
      if (l0[k] >= tau) by_multiplier.push_back(k);
      if (-log_constraint(f0, full[k], k, g) <= tau) by_slack.push_back(k);
    }
    for (auto* c : {&by_multiplier, &by_slack})
      if (std::find(candidates.begin(), candidates.end(), *c) == candidates.end()) candidates.push_back(*c);
  }
  for (const auto& active : candidates) {
    std::vector<double> f = f0;
    std::vector<double> lambda = l0;
    if (!detail::polish_kkt(g, full, active, f, lambda)) continue;
    for (std::size_t k = 1; k < m; ++k)
      if (std::find(active.begin(), active.end(), k) == active.end()) lambda[k] = 0.0;
    lambda[0] = 1.0;
    auto s = evaluate(std::move(f), std::move(lambda));
    if (s.kkt_residual < best.kkt_residual) best = std::move(s);
  }
  best.objective = throughput_point(best.f_star, g)[0];
  best.converged = best.kkt_residual <= options.tol;
  return best;
}

inline Op2Solution solve_op2(const std::vector<double>& targets, const CollisionGraph& g,
                             const SolverOptions& options = {}) {
  return solve_op2(std::span<const double>(targets), g, options);
}

enum class MembershipStatus { feasible, infeasible, not_found };

inline const char* to_string(MembershipStatus s) {
  switch (s) {
    case MembershipStatus::feasible: return "feasible";
    case MembershipStatus::infeasible: return "infeasible";
    case MembershipStatus::not_found: return "not-found";
  }
  return "?";
}

struct MembershipResult {
  MembershipStatus status = MembershipStatus::not_found;
  std::vector<double> f;         // best duty factors found
  std::vector<double> achieved;  // throughput_point(f)
  double violation = 0.0;        // max_k (T_k - C_k(f)), clipped at 0
};

// Searches f with C(f) >= T - tol componentwise by minimizing the largest
// log-ratio ln(T_k / C_k(f)). A positive lower bound on that minimum certifies
// infeasibility.
inline MembershipResult membership(std::span<const double> target, const CollisionGraph& g, double tol = 1e-9,
                                   const SolverOptions& options = {}) {
  const std::size_t m = g.num_links();
  if (target.size() != m)
    throw DomainError("target has " + std::to_string(target.size()) + " entries, profile has " + std::to_string(m));
  for (double t : target)
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("target throughputs must be nonnegative");

  MembershipResult out;
  if (std::all_of(target.begin(), target.end(), [](double t) { return t == 0.0; })) {
    out.status = MembershipStatus::feasible;
    out.f.assign(m, 0.0);
    out.achieved.assign(m, 0.0);
    return out;
  }
  const auto p1 = detail::phase_one(g, target, true, options);
  out.f.assign(p1.f.data(), p1.f.data() + m);
  out.achieved = throughput_point(out.f, g);
  for (std::size_t k = 0; k < m; ++k) out.violation = std::max(out.violation, target[k] - out.achieved[k]);
  if (out.violation <= tol)
    out.status = MembershipStatus::feasible;
  else if (p1.s_lower > 0.0)
    out.status = MembershipStatus::infeasible;
  else
    out.status = MembershipStatus::not_found;
  return out;
}

inline MembershipResult membership(const std::vector<double>& target, const CollisionGraph& g, double tol = 1e-9,
                                   const SolverOptions& options = {}) {
  return membership(std::span<const double>(target), g, tol, options);
}

struct SymmetricSum {
  double sum = 0.0;        // M f (1-f)^(N-1)
  double optimal_f = 0.0;  // 1/N
  double max_sum = 0.0;    // M (1-1/N)^(N-1) / N
};

// Every link has N-1 interferers and duty factor f.
inline SymmetricSum symmetric_sum_throughput(std::size_t links, std::size_t clique, double f) {
  if (links < 1 || clique < 1) throw DomainError("symmetric_sum_throughput needs M >= 1 and N >= 1");
  if (!(f >= 0.0 && f <= 1.0)) throw DomainError("duty factor must lie in [0, 1]");
  const double m = static_cast<double>(links);
  const double n = static_cast<double>(clique);
  SymmetricSum s;
  s.sum = m * f * std::pow(1.0 - f, n - 1.0);
  s.optimal_f = 1.0 / n;
  s.max_sum = m * std::pow(1.0 - 1.0 / n, n - 1.0) / n;
  return s;
}

}  // namespace gencoll
