#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "gateways/log_weight.hpp"

namespace gateways {

// Determinant of a matrix given by the logs of its (nonnegative) entries.
// Per-row maxima are factored out before the LU so widely scaled kernels
// do not underflow.
inline LogWeight log_scaled_det(const Eigen::MatrixXd& log_entries) {
  const auto n = log_entries.rows();
  Eigen::MatrixXd a(n, n);
  double shift = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = log_entries.row(i).maxCoeff();
    if (m == -std::numeric_limits<double>::infinity()) return LogWeight::zero();
    shift += m;
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = std::exp(log_entries(i, j) - m);
  }
  const double d = Eigen::PartialPivLU<Eigen::MatrixXd>(a).determinant();
  if (d == 0.0 || !std::isfinite(d)) return LogWeight::zero();
  return LogWeight::from_log(shift + std::log(std::fabs(d)), d > 0 ? +1 : -1);
}

// First-order perturbation bound for det under entrywise errors, with the
// rows of `log_entries` describing magnitudes and `entry_bound` the
// per-entry absolute error: |det(A+E) - det(A)| <~ sum_i ||E_i|| prod_{k!=i} ||A_k||.
inline double det_error_bound(const Eigen::MatrixXd& entries, const Eigen::MatrixXd& entry_bound) {
  const auto n = entries.rows();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double prod = entry_bound.row(i).norm();
    for (Eigen::Index k = 0; k < n; ++k)
      if (k != i) prod *= entries.row(k).norm();
    total += prod;
  }
  // roundoff floor for the LU itself
  double hadamard = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) hadamard *= entries.row(i).norm();
  total += 8.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() * hadamard;
  return total;
}

}  // namespace gateways
