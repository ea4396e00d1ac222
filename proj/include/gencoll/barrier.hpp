#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace gencoll::detail {

// c + sum_i log_coef[i] ln x_i + sum_i log1m_coef[i] ln(1 - x_i) + linear . x
// The log terms range over the first log_coef.size() variables, which must lie in (0,1).
struct LogSeparable {
  double constant = 0.0;
  Eigen::VectorXd log_coef;
  Eigen::VectorXd log1m_coef;
  Eigen::VectorXd linear;

  double value(const Eigen::VectorXd& x) const {
    double v = constant + linear.dot(x);
    for (Eigen::Index i = 0; i < log_coef.size(); ++i) {
      if (log_coef[i] != 0.0) v += log_coef[i] * std::log(x[i]);
      if (log1m_coef[i] != 0.0) v += log1m_coef[i] * std::log1p(-x[i]);
    }
    return v;
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g = linear;
    for (Eigen::Index i = 0; i < log_coef.size(); ++i) g[i] += log_coef[i] / x[i] - log1m_coef[i] / (1.0 - x[i]);
    return g;
  }

  // The Hessian is diagonal.
  Eigen::VectorXd hessian_diagonal(const Eigen::VectorXd& x) const {
    Eigen::VectorXd h = Eigen::VectorXd::Zero(linear.size());
    for (Eigen::Index i = 0; i < log_coef.size(); ++i)
      h[i] = -log_coef[i] / (x[i] * x[i]) - log1m_coef[i] / ((1.0 - x[i]) * (1.0 - x[i]));
    return h;
  }
};

struct BarrierProblem {
  LogSeparable objective;
  std::vector<LogSeparable> constraints;  // each must stay < 0
  std::size_t box_vars = 0;               // first box_vars variables live in (0,1)
};

struct BarrierOptions {
  double t0 = 1.0;
  double growth = 10.0;
  double gap_tol = 1e-10;
  std::size_t max_newton = 200;
  std::size_t max_outer = 40;
  // Called after each centering step; returning true stops early.
  std::function<bool(const Eigen::VectorXd&)> stop_when;
};

struct BarrierResult {
  Eigen::VectorXd x;
  Eigen::VectorXd multipliers;  // 1 / (t * -h_k)
  double t = 0.0;
  double gap_bound = std::numeric_limits<double>::infinity();
  std::size_t newton_steps = 0;
  bool stopped_early = false;
  bool centered = true;
};

inline bool strictly_inside(const BarrierProblem& p, const Eigen::VectorXd& x) {
  for (std::size_t i = 0; i < p.box_vars; ++i)
    if (!(x[i] > 0.0 && x[i] < 1.0)) return false;
  for (const auto& c : p.constraints)
    if (!(c.value(x) < 0.0)) return false;
  return true;
}

inline double barrier_value(const BarrierProblem& p, const Eigen::VectorXd& x, double t) {
  double v = t * p.objective.value(x);
  for (const auto& c : p.constraints) v -= std::log(-c.value(x));
  for (std::size_t i = 0; i < p.box_vars; ++i) v -= std::log(x[i]) + std::log1p(-x[i]);
  return v;
}

// Log-barrier method with damped Newton centering. x0 must be strictly inside.
inline BarrierResult solve_barrier(const BarrierProblem& p, Eigen::VectorXd x0, const BarrierOptions& options = {}) {
  const Eigen::Index n = x0.size();
  BarrierResult r;
  r.x = std::move(x0);
  double t = options.t0;
  const double m = static_cast<double>(p.constraints.size() + 2 * p.box_vars);

  for (std::size_t outer = 0; outer < options.max_outer; ++outer) {
    for (std::size_t step = 0; step < options.max_newton; ++step) {
      Eigen::VectorXd grad = t * p.objective.gradient(r.x);
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
      hess.diagonal() += t * p.objective.hessian_diagonal(r.x);
      for (const auto& c : p.constraints) {
        const double h = c.value(r.x);
        const Eigen::VectorXd gc = c.gradient(r.x);
        grad += gc / (-h);
        hess += gc * gc.transpose() / (h * h);
        hess.diagonal() += c.hessian_diagonal(r.x) / (-h);
      }
      for (std::size_t i = 0; i < p.box_vars; ++i) {
        const double xi = r.x[i];
        grad[i] += -1.0 / xi + 1.0 / (1.0 - xi);
        hess(i, i) += 1.0 / (xi * xi) + 1.0 / ((1.0 - xi) * (1.0 - xi));
      }
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      Eigen::VectorXd dx = -ldlt.solve(grad);
      if (ldlt.info() != Eigen::Success || !dx.allFinite()) {
        Eigen::MatrixXd reg = hess;
        reg.diagonal().array() += 1e-10 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff());
        dx = -reg.ldlt().solve(grad);
      }
      const double decrement = -grad.dot(dx);
      ++r.newton_steps;
      if (!(decrement > 1e-13)) break;

      double alpha = 1.0;
      const double f0 = barrier_value(p, r.x, t);
      Eigen::VectorXd trial;
      bool moved = false;
      for (int ls = 0; ls < 100; ++ls, alpha *= 0.5) {
        trial = r.x + alpha * dx;
        if (strictly_inside(p, trial) && barrier_value(p, trial, t) <= f0 - 0.25 * alpha * decrement) {
          moved = true;
          break;
        }
      }
      if (!moved) {
        r.centered = false;
        break;
      }
      r.x = trial;
    }
    r.t = t;
    r.gap_bound = m / t;
    if (options.stop_when && options.stop_when(r.x)) {
      r.stopped_early = true;
      break;
    }
    if (m / t < options.gap_tol) break;
    t *= options.growth;
  }
  r.multipliers.resize(static_cast<Eigen::Index>(p.constraints.size()));
  for (std::size_t k = 0; k < p.constraints.size(); ++k)
    r.multipliers[static_cast<Eigen::Index>(k)] = 1.0 / (r.t * -p.constraints[k].value(r.x));
  return r;
}

}  // namespace gencoll::detail
