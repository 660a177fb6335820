#include "gateways/km_nd.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "log_det.hpp"

namespace gateways {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

KernelEval continuous_nd(double beta, double t, const ChamberPointC& x, const ChamberPointC& y,
                         bool stationary) {
  const int n = x.size();
  if (y.size() != n) throw std::invalid_argument("nd kernel: dimension mismatch");
  if (!(t > 0.0)) throw PointMassError("nd kernel at t == 0 is a point mass, not a density");
  if (!x.is_interior())
    throw std::domain_error("nd kernel: x must have pairwise distinct coordinates");
  const DiffusionParams p{beta, t};
  if (n == 1) {  // same 1D code path as the kernels1d evaluator
    const Eval1D e = stationary ? cir_density_ev(p, x[0], y[0]) : besq_density_ev(p, x[0], y[0]);
    return {e.value, e.error_bound};
  }
  if (!y.is_interior()) return {0.0, 0.0};

  Eigen::MatrixXd loge(n, n), lin(n, n), bnd(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eval1D e = stationary ? cir_density_ev(p, x[i], y[j]) : besq_density_ev(p, x[i], y[j]);
      lin(i, j) = e.value;
      bnd(i, j) = e.error_bound;
      loge(i, j) = e.value > 0.0 ? std::log(e.value) : kNegInf;
    }
  const LogWeight det = log_scaled_det(loge);
  LogWeight pref = log_vandermonde(y.coords()) / log_vandermonde(x.coords());
  if (stationary)
    pref *= LogWeight::from_log(0.5 * static_cast<double>(n) * (n - 1) * t);
  const double value = (pref * det).value();
  const double err = det_error_bound(lin, bnd) * std::exp(pref.log_abs);
  return {value, err};
}

}  // namespace

KernelEval besq_nd_density(double beta, double t, const ChamberPointC& x, const ChamberPointC& y) {
  return continuous_nd(beta, t, x, y, /*stationary=*/false);
}

KernelEval cir_nd_density(double beta, double t, const ChamberPointC& x, const ChamberPointC& y) {
  return continuous_nd(beta, t, x, y, /*stationary=*/true);
}

KernelEval bd_nd_from_rows(const std::vector<const BirthDeathKernel::Row*>& rows,
                           const ChamberPointD& x, const ChamberPointD& y, double log_prefactor) {
  const int n = x.size();
  Eigen::MatrixXd loge(n, n), lin(n, n), bnd(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& r = *rows[static_cast<size_t>(i)];
    const double row_err = r.series_tail;
    for (int j = 0; j < n; ++j) {
      const double v = r.p[static_cast<size_t>(y[j])];
      lin(i, j) = v;
      bnd(i, j) = row_err;
      loge(i, j) = v > 0.0 ? std::log(v) : kNegInf;
    }
  }
  const LogWeight det = log_scaled_det(loge);
  LogWeight pref = log_vandermonde(y.coords()) / log_vandermonde(x.coords());
  pref *= LogWeight::from_log(log_prefactor);
  return {(pref * det).value(), det_error_bound(lin, bnd) * std::exp(pref.log_abs)};
}

namespace {

KernelEval discrete_nd(double beta, double sigma, double t, const ChamberPointD& x,
                       const ChamberPointD& y, int truncation, ChainKind kind) {
  const int n = x.size();
  if (y.size() != n) throw std::invalid_argument("nd kernel: dimension mismatch");
  if (t < 0.0) throw std::domain_error("nd kernel: t must be >= 0");
  const ChainParams cp{beta, sigma, t, truncation};
  if (n == 1) {
    const Eval1D e = kind == ChainKind::kFree ? bd_free_prob(cp, x[0], y[0])
                                              : bd_stat_prob(cp, x[0], y[0]);
    return {e.value, e.error_bound};
  }
  if (t == 0.0) return {x.coords() == y.coords() ? 1.0 : 0.0, 0.0};

  const BDRates rates{kind, beta, sigma};
  int m = truncation;
  if (m <= 0) {
    const int floor_states = static_cast<int>(std::max<long long>(32, y.max() + 2));
    m = choose_truncation(rates, x.max(), t, 1e-13, floor_states);
  } else if (x.max() >= m || y.max() >= m) {
    throw std::domain_error("nd kernel: state outside truncation window");
  }
  BirthDeathKernel kern(rates, m);
  std::vector<const BirthDeathKernel::Row*> rows;
  rows.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) rows.push_back(&kern.row(x[i], t));
  const double log_pref =
      kind == ChainKind::kStationary ? 0.5 * static_cast<double>(n) * (n - 1) * t : 0.0;
  return bd_nd_from_rows(rows, x, y, log_pref);
}

}  // namespace

KernelEval bd_nd_free_prob(double beta, double t, const ChamberPointD& x, const ChamberPointD& y,
                           int truncation) {
  return discrete_nd(beta, 1.0, t, x, y, truncation, ChainKind::kFree);
}

KernelEval bd_nd_stat_prob(double beta, double sigma, double t, const ChamberPointD& x,
                           const ChamberPointD& y, int truncation) {
  return discrete_nd(beta, sigma, t, x, y, truncation, ChainKind::kStationary);
}

}  // namespace gateways
