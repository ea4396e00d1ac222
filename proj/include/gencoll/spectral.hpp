#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "gencoll/error.hpp"
#include "gencoll/grid.hpp"

namespace gencoll {

struct PerronRoot {
  double rho = 0.0;
  // |rho - true spectral radius| <= error_bound when converged.
  double error_bound = 0.0;
  // Nonnegative eigenvector, scaled so its largest entry is 1.
  std::vector<double> eigenvector;
  std::size_t iterations = 0;
  bool converged = false;
};

namespace detail {

// For a nonnegative A, sI - A is a Z-matrix, and it is a nonsingular M-matrix
// (equivalently s > rho(A)) iff every pivot of unpivoted elimination is positive.
inline bool exceeds_spectral_radius(const Grid<double>& a, double s) {
  const std::size_t n = a.rows();
  Eigen::MatrixXd b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = (i == j ? s : 0.0) - a(i, j);
  for (std::size_t k = 0; k < n; ++k) {
    const double pivot = b(k, k);
    if (!(pivot > 0.0)) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = b(i, k) / pivot;
      if (factor == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) b(i, j) -= factor * b(k, j);
    }
  }
  return true;
}

}  // namespace detail

// Spectral radius of a square nonnegative matrix by bisection on the M-matrix
// criterion, bracketed by max diagonal entry and max row sum. Reducible inputs
// are handled the same way; no positivity of the eigenvector is assumed.
inline PerronRoot perron_root(const Grid<double>& a, double tol = 1e-12, std::size_t max_iterations = 400) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n) throw DomainError("perron_root needs a non-empty square matrix");
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (a(i, j) < 0.0 || !std::isfinite(a(i, j))) throw DomainError("perron_root needs a finite nonnegative matrix");
      row_sum += a(i, j);
    }
    lo = std::max(lo, a(i, i));
    hi = std::max(hi, row_sum);
  }
  // Row sums are rounded; widen so the bracket is certain.
  hi = hi * (1.0 + 4.0 * n * 1e-16) + 1e-300;

  PerronRoot out;
  while (hi - lo > tol / 2 && out.iterations < max_iterations) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    if (detail::exceeds_spectral_radius(a, mid))
      hi = mid;
    else
      lo = mid;
    ++out.iterations;
  }
  out.rho = lo + (hi - lo) / 2;
  out.error_bound = (hi - lo) / 2;
  out.converged = out.error_bound <= tol;

  // Inverse iteration just above the root: (sI - A)^{-1} is entrywise
  // nonnegative there, so iterates stay in the nonnegative cone.
  Eigen::MatrixXd b(n, n);
  const double shift = hi + std::max(out.error_bound, 1e-14 * std::max(1.0, hi));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = (i == j ? shift : 0.0) - a(i, j);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  for (int it = 0; it < 4; ++it) {
    x = lu.solve(x);
    x = x.cwiseMax(0.0);
    const double top = x.maxCoeff();
    if (!(top > 0.0) || !std::isfinite(top)) {
      x = Eigen::VectorXd::Ones(n);
      break;
    }
    x /= top;
  }
  out.eigenvector.assign(x.data(), x.data() + n);
  for (auto& v : out.eigenvector)
    if (v < 1e-15) v = 0.0;
  return out;
}

}  // namespace gencoll
