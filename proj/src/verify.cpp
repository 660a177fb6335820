#include "gateways/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "gateways/ensembles.hpp"
#include "gateways/quadrature.hpp"
#include "gateways/scalar_math.hpp"
#include "gateways/version.hpp"
#include "log_det.hpp"

namespace gateways::checks {

namespace {

using json = nlohmann::json;

double p2(int n) { return 0.5 * static_cast<double>(n) * (n - 1); }

double rel_of(double a, double b) {
  const double d = std::fabs(a - b);
  const double s = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return d / s;
}

// Poisson(mean) restricted to {0..m-1}; returns the missing tail mass.
std::vector<double> poisson_init(double mean, int m, double* tail) {
  std::vector<double> v(static_cast<size_t>(m), 0.0);
  double acc = 0.0;
  for (int w = 0; w < m; ++w) {
    v[static_cast<size_t>(w)] = poisson_pmf(w, mean);
    acc += v[static_cast<size_t>(w)];
  }
  *tail = std::max(0.0, 1.0 - acc);
  return v;
}

// log pmf of Poisson(sigma z) at y, as a function of z >= 0.
double scaled_poisson_pmf(long long y, double sigma, double z) {
  const double m = sigma * z;
  if (m == 0.0) return y == 0 ? 1.0 : 0.0;
  return std::exp(static_cast<double>(y) * std::log(m) - m -
                  std::lgamma(static_cast<double>(y) + 1.0));
}

struct DetWithBound {
  double value = 0.0;  // determinant itself
  double bound = 0.0;
};

DetWithBound det_of(const PairwiseMatrix& pm) {
  const double d = Eigen::PartialPivLU<Eigen::MatrixXd>(pm.m).determinant();
  return {d, det_error_bound(pm.m, pm.bound)};
}

int free_chain_truncation(double beta, double t, double x_max, long long y_max) {
  const BDRates rates{ChainKind::kFree, beta, 1.0};
  const long long x_eff =
      static_cast<long long>(std::ceil(x_max + 12.0 * std::sqrt(x_max + 1.0) + 10.0));
  const int floor_states = static_cast<int>(std::max<long long>(32, y_max + 2));
  return choose_truncation(rates, x_eff, t, 1e-13, floor_states);
}

int stat_chain_truncation(double beta, double sigma, double t, double x_max, long long y_max) {
  const BDRates rates{ChainKind::kStationary, beta, sigma};
  const long long x_eff =
      static_cast<long long>(std::ceil(x_max + 12.0 * std::sqrt(x_max + 1.0) + 10.0));
  const int floor_states = static_cast<int>(std::max<long long>(32, y_max + 2));
  return choose_truncation(rates, x_eff, t, 1e-13, floor_states);
}

constexpr double kEntryTol = 1e-12;
constexpr double kMomentEntryTol = 1e-13;

double intertwining_tol(int n) {
  switch (n) {
    case 1: return 1e-9;
    case 2: return 1e-7;
    default: return 1e-6;
  }
}

}  // namespace

ResidualPoint make_point(std::string label, double lhs, double rhs, double bound, double tol,
                         bool use_relative) {
  ResidualPoint pt;
  pt.label = std::move(label);
  pt.lhs = lhs;
  pt.rhs = rhs;
  pt.abs_residual = std::fabs(lhs - rhs);
  pt.rel_residual = rel_of(lhs, rhs);
  pt.bound = bound;
  pt.tolerance = tol;
  pt.use_relative = use_relative;
  pt.pass = pt.residual() <= std::max(tol, 10.0 * bound);
  return pt;
}

void CheckReport::finalize() {
  pass = true;
  for (const auto& pt : grid) {
    max_abs_residual = std::max(max_abs_residual, pt.abs_residual);
    max_rel_residual = std::max(max_rel_residual, pt.rel_residual);
    propagated_bound = std::max(propagated_bound, pt.bound);
    tolerance = std::max(tolerance, pt.tolerance);
    pass = pass && pt.pass;
  }
  if (grid.empty()) pass = false;
}

PairwiseMatrix andreif_compose(const std::vector<std::function<double(double)>>& f,
                               const std::vector<std::function<double(double)>>& g,
                               double upper_hint, double abs_tol) {
  const auto n = static_cast<Eigen::Index>(f.size());
  if (g.size() != f.size()) throw std::invalid_argument("andreif_compose: family size mismatch");
  PairwiseMatrix out;
  out.m.resize(n, n);
  out.bound.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& fi = f[static_cast<size_t>(i)];
      const auto& gj = g[static_cast<size_t>(j)];
      const QuadResult q = integrate_gamma_envelope(
          [&](double z) { return fi(z) * gj(z); }, upper_hint, abs_tol);
      out.m(i, j) = q.value;
      out.bound(i, j) = q.error;
    }
  return out;
}

PairwiseMatrix andreif_compose(const std::vector<std::function<double(long long)>>& f,
                               const std::vector<std::function<double(long long)>>& g,
                               long long cap) {
  const auto n = static_cast<Eigen::Index>(f.size());
  if (g.size() != f.size()) throw std::invalid_argument("andreif_compose: family size mismatch");
  PairwiseMatrix out;
  out.m.resize(n, n);
  out.bound.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double acc = 0.0;
      for (long long w = 0; w <= cap; ++w)
        acc += f[static_cast<size_t>(i)](w) * g[static_cast<size_t>(j)](w);
      out.m(i, j) = acc;
      out.bound(i, j) = 0.0;  // caller adds its own truncation certificate
    }
  return out;
}

// ---------------------------------------------------------------------------
// intertwinings
// ---------------------------------------------------------------------------

ResidualPoint check_intertwining_free(double beta, double t, const ChamberPointC& x,
                                      const ChamberPointD& y) {
  const int n = x.size();
  std::ostringstream lbl;
  lbl << "N=" << n << " beta=" << beta << " t=" << t << " x=(" << x.str() << ") y=(" << y.str()
      << ")";
  const double tol = intertwining_tol(n);
  if (t == 0.0) {
    const double v = poisson_link_pmf(x, y);
    return make_point(lbl.str(), v, v, 0.0, tol);
  }

  // quadrature route: entries int q_t(x_i, z) Poisson(y_j; z) dz
  const DiffusionParams dp{beta, t};
  const double hint = std::max(x.max() + beta * t + 12.0 * std::sqrt(2.0 * x.max() * t + beta * t * t + t),
                               static_cast<double>(y.max()) + 12.0 * std::sqrt(static_cast<double>(y.max()) + 1.0)) +
                      5.0;
  std::vector<std::function<double(double)>> f, g;
  for (int i = 0; i < n; ++i) {
    const double xi = x[i];
    f.push_back([dp, xi](double z) { return z > 0.0 ? besq_density(dp, xi, z) : 0.0; });
  }
  for (int j = 0; j < n; ++j) {
    const long long yj = y[j];
    g.push_back([yj](double z) { return scaled_poisson_pmf(yj, 1.0, z); });
  }
  const PairwiseMatrix lhs_m = andreif_compose(f, g, hint, kEntryTol);
  const DetWithBound lhs_det = det_of(lhs_m);

  // summation route: entries [Poisson(x_i) exp(tQ)](y_j)
  const int m = free_chain_truncation(beta, t, x.max(), y.max());
  BirthDeathKernel kern({ChainKind::kFree, beta, 1.0}, m);
  PairwiseMatrix rhs_m;
  rhs_m.m.resize(n, n);
  rhs_m.bound.resize(n, n);
  for (int i = 0; i < n; ++i) {
    double init_tail = 0.0;
    const auto init = poisson_init(x[i], m, &init_tail);
    const auto row = kern.propagate(init, t);
    for (int j = 0; j < n; ++j) {
      rhs_m.m(i, j) = row.p[static_cast<size_t>(y[j])];
      rhs_m.bound(i, j) = init_tail + row.series_tail + row.deficit;
    }
  }
  const DetWithBound rhs_det = det_of(rhs_m);

  const double pref = (log_vandermonde(y.coords()) / log_vandermonde(x.coords())).value();
  const double lhs = pref * lhs_det.value;
  const double rhs = pref * rhs_det.value;
  const double bound = std::fabs(pref) * (lhs_det.bound + rhs_det.bound);
  return make_point(lbl.str(), lhs, rhs, bound, tol);
}

ResidualPoint check_intertwining_star(double beta, double t, const ChamberPointD& y,
                                      const ChamberPointC& x) {
  const int n = y.size();
  std::ostringstream lbl;
  lbl << "N=" << n << " beta=" << beta << " t=" << t << " y=(" << y.str() << ") x=(" << x.str()
      << ")";
  const double tol = intertwining_tol(n);
  if (t == 0.0) {
    const double v = gamma_link_density(beta, y, x);
    return make_point(lbl.str(), v, v, 0.0, tol);
  }

  // summation route: entries sum_w qd_t(y_i, w) GammaPdf(x_j; w+beta, 1)
  const int m = free_chain_truncation(beta, t, static_cast<double>(y.max()), y.max());
  BirthDeathKernel kern({ChainKind::kFree, beta, 1.0}, m);
  PairwiseMatrix lhs_m;
  lhs_m.m.resize(n, n);
  lhs_m.bound.resize(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = kern.row(y[i], t);
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int w = 0; w < m; ++w)
        acc += row.p[static_cast<size_t>(w)] *
               gamma_pdf(x[j], static_cast<double>(w) + beta, 1.0);
      lhs_m.m(i, j) = acc;
      // gamma pdf values are bounded by 1 at the scales used here
      lhs_m.bound(i, j) = row.series_tail + row.deficit;
    }
  }
  const DetWithBound lhs_det = det_of(lhs_m);

  // quadrature route: entries int GammaPdf(z; y_i+beta, 1) q_t(z, x_j) dz
  const DiffusionParams dp{beta, t};
  const double ymax = static_cast<double>(y.max());
  const double hint =
      std::max(ymax + beta + 12.0 * std::sqrt(ymax + beta), (x.max() + beta * t) * 1.5) + 10.0;
  std::vector<std::function<double(double)>> f, g;
  for (int i = 0; i < n; ++i) {
    const double shape = static_cast<double>(y[i]) + beta;
    f.push_back([shape](double z) { return gamma_pdf(z, shape, 1.0); });
  }
  for (int j = 0; j < n; ++j) {
    const double xj = x[j];
    g.push_back([dp, xj](double z) { return z > 0.0 ? besq_density(dp, z, xj) : 0.0; });
  }
  const PairwiseMatrix rhs_m = andreif_compose(f, g, hint, kEntryTol);
  const DetWithBound rhs_det = det_of(rhs_m);

  const double pref = (log_vandermonde(x.coords()) / log_vandermonde(y.coords())).value();
  const double lhs = pref * lhs_det.value;
  const double rhs = pref * rhs_det.value;
  const double bound = std::fabs(pref) * (lhs_det.bound + rhs_det.bound);
  return make_point(lbl.str(), lhs, rhs, bound, tol);
}

ResidualPoint check_intertwining_stationary(double beta, double sigma, double t,
                                            const ChamberPointC& x, const ChamberPointD& y) {
  const int n = x.size();
  std::ostringstream lbl;
  lbl << "N=" << n << " beta=" << beta << " sigma=" << sigma << " t=" << t << " x=(" << x.str()
      << ") y=(" << y.str() << ")";
  const double tol = intertwining_tol(n);
  if (t == 0.0) {
    const double v = poisson_link_sigma_pmf(sigma, x, y);
    return make_point(lbl.str(), v, v, 0.0, tol);
  }

  // quadrature route: entries int k_t(x_i, z) Poisson(y_j; sigma z) dz
  const DiffusionParams dp{beta, t};
  const double ymax = static_cast<double>(y.max());
  const double hint = std::max(x.max() + beta + 10.0,
                               ymax / sigma + 12.0 * std::sqrt(ymax + 1.0) / sigma + 5.0);
  std::vector<std::function<double(double)>> f, g;
  for (int i = 0; i < n; ++i) {
    const double xi = x[i];
    f.push_back([dp, xi](double z) { return z > 0.0 ? cir_density(dp, xi, z) : 0.0; });
  }
  for (int j = 0; j < n; ++j) {
    const long long yj = y[j];
    g.push_back([yj, sigma](double z) { return scaled_poisson_pmf(yj, sigma, z); });
  }
  const PairwiseMatrix lhs_m = andreif_compose(f, g, hint, kEntryTol);
  const DetWithBound lhs_det = det_of(lhs_m);

  // summation route: entries [Poisson(sigma x_i) exp(t Ld)](y_j)
  const int m = stat_chain_truncation(beta, sigma, t, sigma * x.max(), y.max());
  BirthDeathKernel kern({ChainKind::kStationary, beta, sigma}, m);
  PairwiseMatrix rhs_m;
  rhs_m.m.resize(n, n);
  rhs_m.bound.resize(n, n);
  for (int i = 0; i < n; ++i) {
    double init_tail = 0.0;
    const auto init = poisson_init(sigma * x[i], m, &init_tail);
    const auto row = kern.propagate(init, t);
    for (int j = 0; j < n; ++j) {
      rhs_m.m(i, j) = row.p[static_cast<size_t>(y[j])];
      rhs_m.bound(i, j) = init_tail + row.series_tail + row.deficit;
    }
  }
  const DetWithBound rhs_det = det_of(rhs_m);

  const double log_pref = p2(n) * t - p2(n) * std::log(sigma) +
                          (log_vandermonde(y.coords()) / log_vandermonde(x.coords())).log_value();
  const double pref = std::exp(log_pref);
  const double lhs = pref * lhs_det.value;
  const double rhs = pref * rhs_det.value;
  const double bound = pref * (lhs_det.bound + rhs_det.bound);
  return make_point(lbl.str(), lhs, rhs, bound, tol);
}

// ---------------------------------------------------------------------------
// factorizations at t = 1
// ---------------------------------------------------------------------------

ResidualPoint check_factorization_continuous(double beta, const ChamberPointC& x,
                                             const ChamberPointC& y) {
  const int n = x.size();
  std::ostringstream lbl;
  lbl << "N=" << n << " beta=" << beta << " x=(" << x.str() << ") y=(" << y.str() << ")";
  const double tol = n <= 2 ? 1e-7 : 1e-6;

  const KernelEval target = besq_nd_density(beta, 1.0, x, y);

  // Andreif route: entries sum_w Poisson(w; x_i) GammaPdf(y_j; w+beta, 1)
  const long long wmax =
      static_cast<long long>(std::ceil(x.max() + 12.0 * std::sqrt(x.max() + 1.0) + 35.0));
  PairwiseMatrix comp;
  comp.m.resize(n, n);
  comp.bound.resize(n, n);
  for (int i = 0; i < n; ++i) {
    double tail = 1.0;
    for (long long w = 0; w <= wmax; ++w) tail -= poisson_pmf(w, x[i]);
    tail = std::max(0.0, tail);
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (long long w = 0; w <= wmax; ++w)
        acc += poisson_pmf(w, x[i]) * gamma_pdf(y[j], static_cast<double>(w) + beta, 1.0);
      comp.m(i, j) = acc;
      comp.bound(i, j) = tail;
    }
  }
  const DetWithBound comp_det = det_of(comp);
  const double pref = (log_vandermonde(y.coords()) / log_vandermonde(x.coords())).value();
  const double lhs = pref * comp_det.value;
  double residual_src = lhs;
  double bound = std::fabs(pref) * comp_det.bound + target.error_bound;

  // direct chamber-sum route at N <= 2: sum_w Lambda(x, w) Lambda*(w, y)
  if (n <= 2) {
    const PoissonLinkEvaluator lam(x);
    double acc = 0.0;
    double shell = 0.0;
    long long top = n - 1;
    int quiet = 0;
    while (quiet < 3 && top < 400) {
      shell = 0.0;
      for_each_chamber_shell(n, top, [&](const std::vector<long long>& w) {
        const ChamberPointD wd(w);
        shell += lam.pmf(wd) * gamma_link_density(beta, wd, y);
      });
      acc += shell;
      quiet = (shell < 1e-16 * std::max(acc, 1e-30) && top > 4 * n) ? quiet + 1 : 0;
      ++top;
    }
    // worst disagreement among the three values
    if (std::fabs(acc - target.value) > std::fabs(residual_src - target.value)) residual_src = acc;
  }
  return make_point(lbl.str(), residual_src, target.value, bound, tol);
}

ResidualPoint check_factorization_discrete(double beta, const ChamberPointD& x,
                                           const ChamberPointD& y) {
  const int n = x.size();
  std::ostringstream lbl;
  lbl << "N=" << n << " beta=" << beta << " x=(" << x.str() << ") y=(" << y.str() << ")";
  const double tol = n <= 2 ? 1e-7 : 1e-6;

  const KernelEval target = bd_nd_free_prob(beta, 1.0, x, y);

  // quadrature route: entries int GammaPdf(z; x_i+beta, 1) Poisson(y_j; z) dz
  const double xmax = static_cast<double>(x.max());
  const double ymax = static_cast<double>(y.max());
  const double hint = std::max(xmax + beta + 12.0 * std::sqrt(xmax + beta),
                               ymax + 12.0 * std::sqrt(ymax + 1.0)) +
                      5.0;
  std::vector<std::function<double(double)>> f, g;
  for (int i = 0; i < n; ++i) {
    const double shape = static_cast<double>(x[i]) + beta;
    f.push_back([shape](double z) { return gamma_pdf(z, shape, 1.0); });
  }
  for (int j = 0; j < n; ++j) {
    const long long yj = y[j];
    g.push_back([yj](double z) { return scaled_poisson_pmf(yj, 1.0, z); });
  }
  const PairwiseMatrix comp = andreif_compose(f, g, hint, kEntryTol);
  const DetWithBound comp_det = det_of(comp);
  const double pref = (log_vandermonde(y.coords()) / log_vandermonde(x.coords())).value();
  const double lhs = pref * comp_det.value;
  const double bound = std::fabs(pref) * comp_det.bound + target.error_bound;
  return make_point(lbl.str(), lhs, target.value, bound, tol);
}

// ---------------------------------------------------------------------------
// invariance
// ---------------------------------------------------------------------------

ResidualPoint check_invariance_laguerre(double beta, double t, const ChamberPointC& y) {
  const int n = y.size();
  std::ostringstream lbl;
  lbl << "N=" << n << " beta=" << beta << " t=" << t << " y=(" << y.str() << ")";
  const double tol = n == 1 ? 1e-8 : 1e-6;

  const DiffusionParams dp{beta, t};
  const double hint = beta + y.max() + 12.0 * std::sqrt(beta + y.max() + 1.0) + 10.0;
  std::vector<std::function<double(double)>> f, g;
  for (int i = 0; i < n; ++i) {
    f.push_back([i, beta](double z) {
      return std::pow(z, static_cast<double>(i)) * gamma_pdf(z, beta, 1.0);
    });
  }
  for (int j = 0; j < n; ++j) {
    const double yj = y[j];
    g.push_back([dp, yj](double z) { return z > 0.0 ? cir_density(dp, z, yj) : 0.0; });
  }
  const PairwiseMatrix m = andreif_compose(f, g, hint, kMomentEntryTol);
  const DetWithBound det = det_of(m);

  const double log_const = std::lgamma(static_cast<double>(n) + 1.0) -
                           laguerre_log_partition(n, beta);
  const double pref = std::exp(log_const + p2(n) * t) * log_vandermonde(y.coords()).value();
  const double lhs = pref * det.value;
  const double rhs = laguerre_density({n, beta}, y);
  return make_point(lbl.str(), lhs, rhs, std::fabs(pref) * det.bound, tol);
}

ResidualPoint check_invariance_meixner(double beta, double sigma, double t,
                                       const ChamberPointD& y) {
  const int n = y.size();
  std::ostringstream lbl;
  lbl << "N=" << n << " beta=" << beta << " sigma=" << sigma << " t=" << t << " y=(" << y.str()
      << ")";
  const double tol = n == 1 ? 1e-8 : 1e-6;

  const EnsembleParams ep{n, beta, sigma};
  const MeixnerPmf& pmf = meixner_cached(ep);

  // weight tail: find W with sum_{w > W} w^{n-1} eta(w) below 1e-15
  const double m_eta = sigma * beta;
  long long wcap = std::max<long long>(
      static_cast<long long>(std::ceil(m_eta + 14.0 * std::sqrt(m_eta * (1.0 + sigma) + 1.0) + 25.0)),
      y.max() + 10);
  double tail_w = 0.0;
  for (;;) {
    double last = std::pow(static_cast<double>(wcap), n - 1) *
                  neg_binomial_pmf(wcap, beta, sigma);
    double next = std::pow(static_cast<double>(wcap + 1), n - 1) *
                  neg_binomial_pmf(wcap + 1, beta, sigma);
    if (last <= 0.0) { tail_w = 0.0; break; }
    const double r = next / last;
    if (r < 0.9) {
      tail_w = last * r / (1.0 - r);
      if (tail_w < 1e-15) break;
    }
    wcap += 32;
    if (wcap > 100000)
      throw NumericalBudgetError("check_invariance_meixner: weight tail refuses to decay");
  }

  const int m = stat_chain_truncation(beta, sigma, t, static_cast<double>(wcap), y.max());
  BirthDeathKernel kern({ChainKind::kStationary, beta, sigma}, std::max(m, static_cast<int>(wcap) + 2));
  PairwiseMatrix mat;
  mat.m.resize(n, n);
  mat.bound.resize(n, n);
  for (int j = 0; j < n; ++j) {
    const auto col = kern.column(y[j], t);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (long long w = 0; w <= wcap; ++w)
        acc += std::pow(static_cast<double>(w), i) * neg_binomial_pmf(w, beta, sigma) *
               col.p[static_cast<size_t>(w)];
      mat.m(i, j) = acc;
      mat.bound(i, j) = tail_w + col.series_tail;
    }
  }
  const DetWithBound det = det_of(mat);
  const double pref = std::exp(p2(n) * t - pmf.log_normalization()) *
                      log_vandermonde(y.coords()).value();
  const double lhs = pref * det.value;
  const double rhs = pmf.pmf(y);
  return make_point(lbl.str(), lhs, rhs, std::fabs(pref) * det.bound + pmf.tail_bound(), tol);
}

// ---------------------------------------------------------------------------
// pushforward
// ---------------------------------------------------------------------------

ResidualPoint check_pushforward(double beta, double sigma, const ChamberPointD& y,
                                bool with_direct_route) {
  const int n = y.size();
  std::ostringstream lbl;
  lbl << "N=" << n << " beta=" << beta << " sigma=" << sigma << " y=(" << y.str() << ")";
  const double tol = 1e-6;

  const EnsembleParams ep{n, beta, sigma};
  const double rhs = meixner_pmf(ep, y);

  const double ymax = static_cast<double>(y.max());
  const double hint =
      std::max(beta + n + 10.0, ymax / sigma + 12.0 * std::sqrt(ymax + 1.0) / sigma + 5.0);
  std::vector<std::function<double(double)>> f, g;
  for (int i = 0; i < n; ++i) {
    f.push_back([i, beta](double z) {
      return std::pow(z, static_cast<double>(i)) * gamma_pdf(z, beta, 1.0);
    });
  }
  for (int j = 0; j < n; ++j) {
    const long long yj = y[j];
    g.push_back([yj, sigma](double z) { return scaled_poisson_pmf(yj, sigma, z); });
  }
  const PairwiseMatrix mat = andreif_compose(f, g, hint, kMomentEntryTol);
  const DetWithBound det = det_of(mat);
  const double log_const = std::lgamma(static_cast<double>(n) + 1.0) -
                           laguerre_log_partition(n, beta) - p2(n) * std::log(sigma);
  const double pref = std::exp(log_const) * log_vandermonde(y.coords()).value();
  const double lhs = pref * det.value;
  double bound = std::fabs(pref) * det.bound;

  ResidualPoint pt = make_point(lbl.str(), lhs, rhs, bound, tol, /*use_relative=*/true);
  if (with_direct_route && n == 2) {
    const QuadResult direct = integrate_chamber2(
        [&](double x1, double x2) {
          if (!(x2 > x1) || x1 <= 0.0) return 0.0;
          const ChamberPointC x({x1, x2});
          return laguerre_density(ep, x) * poisson_link_sigma_pmf(sigma, x, y);
        },
        beta + 3.0 + ymax / sigma + 10.0, 1e-11);
    pt.bound += direct.error;
    // residual covers both routes against the pmf and against each other
    pt.rel_residual = std::max({pt.rel_residual, rel_of(direct.value, rhs), rel_of(direct.value, lhs)});
    pt.abs_residual = std::max({pt.abs_residual, std::fabs(direct.value - rhs)});
    pt.pass = pt.residual() <= std::max(pt.tolerance, 10.0 * pt.bound);
  }
  return pt;
}

// ---------------------------------------------------------------------------
// normalizations
// ---------------------------------------------------------------------------

ResidualPoint check_lambda_normalization(const ChamberPointC& x) {
  const int n = x.size();
  std::ostringstream lbl;
  lbl << "N=" << n << " x=(" << x.str() << ")";
  const PoissonLinkEvaluator lam(x);
  double acc = 0.0;
  long long top = n - 1;
  int quiet = 0;
  while (quiet < 3) {
    double shell = 0.0;
    for_each_chamber_shell(n, top, [&](const std::vector<long long>& w) {
      shell += lam.pmf(ChamberPointD(w));
    });
    acc += shell;
    quiet = (shell < 1e-15 && top > 4 * n + static_cast<long long>(x.max())) ? quiet + 1 : 0;
    ++top;
    if (top > 20000)
      throw NumericalBudgetError("check_lambda_normalization: support refuses to decay");
  }
  return make_point(lbl.str(), acc, 1.0, 1e-13, 1e-10);
}

ResidualPoint check_lambda_star_normalization(double beta, const ChamberPointD& y) {
  const int n = y.size();
  std::ostringstream lbl;
  lbl << "N=" << n << " beta=" << beta << " y=(" << y.str() << ")";
  const double ymax = static_cast<double>(y.max());
  const double hint = ymax + beta + n + 12.0 * std::sqrt(ymax + beta + n) + 10.0;
  std::vector<std::function<double(double)>> f, g;
  for (int i = 0; i < n; ++i)
    f.push_back([i](double z) { return std::pow(z, static_cast<double>(i)); });
  for (int j = 0; j < n; ++j) {
    const double shape = static_cast<double>(y[j]) + beta;
    g.push_back([shape](double z) { return gamma_pdf(z, shape, 1.0); });
  }
  const PairwiseMatrix mat = andreif_compose(f, g, hint, kMomentEntryTol);
  const DetWithBound det = det_of(mat);
  const double vdm = log_vandermonde(y.coords()).value();
  return make_point(lbl.str(), det.value / vdm, 1.0, det.bound / vdm, 1e-7);
}

// ---------------------------------------------------------------------------
// 1D analytic certificates
// ---------------------------------------------------------------------------

namespace {

// five-point stencils
double d1(const std::function<double(double)>& f, double v, double h) {
  return (f(v - 2 * h) - 8 * f(v - h) + 8 * f(v + h) - f(v + 2 * h)) / (12 * h);
}
double d2(const std::function<double(double)>& f, double v, double h) {
  return (-f(v - 2 * h) + 16 * f(v - h) - 30 * f(v) + 16 * f(v + h) - f(v + 2 * h)) /
         (12 * h * h);
}

ResidualPoint generator_residual(const std::string& name, double beta, double t, double x,
                                 double y, bool stationary) {
  std::ostringstream lbl;
  lbl << name << " beta=" << beta << " t=" << t << " x=" << x << " y=" << y;
  auto dens = [&](double tt, double xx) {
    const DiffusionParams p{beta, tt};
    return stationary ? cir_density(p, xx, y) : besq_density(p, xx, y);
  };
  const double ht = 0.008 * std::max(t, 0.25);
  const double hx = 0.008 * std::max(x, 0.5);
  const double dt = d1([&](double tt) { return dens(tt, x); }, t, ht);
  const double dx = d1([&](double xx) { return dens(t, xx); }, x, hx);
  const double dxx = d2([&](double xx) { return dens(t, xx); }, x, hx);
  const double drift = stationary ? (beta - x) : beta;
  const double gen = x * dxx + drift * dx;
  const double denom = std::max({std::fabs(dt), std::fabs(x * dxx), std::fabs(drift * dx), 1e-8});
  ResidualPoint pt = make_point(lbl.str(), dt, gen, 0.0, 1e-5, /*use_relative=*/false);
  pt.rel_residual = std::fabs(dt - gen) / denom;
  pt.use_relative = true;
  pt.pass = pt.rel_residual <= pt.tolerance;
  return pt;
}

}  // namespace

ResidualPoint check_generator_besq(double beta, double t, double x, double y) {
  return generator_residual("besq", beta, t, x, y, false);
}

ResidualPoint check_generator_cir(double beta, double t, double x, double y) {
  return generator_residual("cir", beta, t, x, y, true);
}

ResidualPoint check_chapman_kolmogorov_besq(double beta, double s, double t, double x, double y) {
  std::ostringstream lbl;
  lbl << "besq beta=" << beta << " s=" << s << " t=" << t << " x=" << x << " y=" << y;
  const DiffusionParams ps{beta, s}, pt_{beta, t}, pst{beta, s + t};
  const double hint = x + y + beta * (s + t) + 12.0 * std::sqrt(x + y + 1.0) + 10.0;
  const QuadResult q = integrate_gamma_envelope(
      [&](double z) { return z > 0.0 ? besq_density(ps, x, z) * besq_density(pt_, z, y) : 0.0; },
      hint, kEntryTol);
  return make_point(lbl.str(), q.value, besq_density(pst, x, y), q.error, 1e-8);
}

ResidualPoint check_chapman_kolmogorov_cir(double beta, double s, double t, double x, double y) {
  std::ostringstream lbl;
  lbl << "cir beta=" << beta << " s=" << s << " t=" << t << " x=" << x << " y=" << y;
  const DiffusionParams ps{beta, s}, pt_{beta, t}, pst{beta, s + t};
  const double hint = x + y + beta + 12.0 * std::sqrt(x + y + 1.0) + 10.0;
  const QuadResult q = integrate_gamma_envelope(
      [&](double z) { return z > 0.0 ? cir_density(ps, x, z) * cir_density(pt_, z, y) : 0.0; },
      hint, kEntryTol);
  return make_point(lbl.str(), q.value, cir_density(pst, x, y), q.error, 1e-8);
}

namespace {

ResidualPoint ck_chain(const std::string& name, const BDRates& rates, double s, double t,
                       long long x, long long y) {
  std::ostringstream lbl;
  lbl << name << " beta=" << rates.beta;
  if (rates.kind == ChainKind::kStationary) lbl << " sigma=" << rates.sigma;
  lbl << " s=" << s << " t=" << t << " x=" << x << " y=" << y;
  const int m = choose_truncation(rates, std::max(x, y), s + t, 1e-14,
                                  static_cast<int>(std::max(x, y)) + 16);
  BirthDeathKernel kern(rates, m);
  const auto rs = kern.row(x, s);
  const auto ct = kern.column(y, t);
  double acc = 0.0;
  for (int w = 0; w < m; ++w) acc += rs.p[static_cast<size_t>(w)] * ct.p[static_cast<size_t>(w)];
  const auto rst = kern.row(x, s + t);
  const double bound = rs.series_tail + ct.series_tail + rst.series_tail + rs.deficit;
  return make_point(lbl.str(), acc, rst.p[static_cast<size_t>(y)], bound, 1e-8);
}

}  // namespace

ResidualPoint check_chapman_kolmogorov_bd_free(double beta, double s, double t, long long x,
                                               long long y) {
  return ck_chain("bd_free", {ChainKind::kFree, beta, 1.0}, s, t, x, y);
}

ResidualPoint check_chapman_kolmogorov_bd_stat(double beta, double sigma, double s, double t,
                                               long long x, long long y) {
  return ck_chain("bd_stat", {ChainKind::kStationary, beta, sigma}, s, t, x, y);
}

ResidualPoint check_detailed_balance_besq(double beta, double t, double x, double y) {
  std::ostringstream lbl;
  lbl << "besq beta=" << beta << " t=" << t << " x=" << x << " y=" << y;
  const DiffusionParams p{beta, t};
  const double l1 = (beta - 1.0) * std::log(x) + besq_logdensity(p, x, y);
  const double l2 = (beta - 1.0) * std::log(y) + besq_logdensity(p, y, x);
  return make_point(lbl.str(), std::exp(l1), std::exp(l2), 0.0, 1e-10, /*use_relative=*/true);
}

ResidualPoint check_detailed_balance_cir(double beta, double t, double x, double y) {
  std::ostringstream lbl;
  lbl << "cir beta=" << beta << " t=" << t << " x=" << x << " y=" << y;
  const DiffusionParams p{beta, t};
  const double l1 = gamma_logpdf(x, beta, 1.0) + cir_logdensity(p, x, y);
  const double l2 = gamma_logpdf(y, beta, 1.0) + cir_logdensity(p, y, x);
  return make_point(lbl.str(), std::exp(l1), std::exp(l2), 0.0, 1e-10, /*use_relative=*/true);
}

ResidualPoint check_detailed_balance_bd_stat(double beta, double sigma, double t, long long x,
                                             long long y) {
  std::ostringstream lbl;
  lbl << "bd_stat beta=" << beta << " sigma=" << sigma << " t=" << t << " x=" << x << " y=" << y;
  const BDRates rates{ChainKind::kStationary, beta, sigma};
  const int m = choose_truncation(rates, std::max(x, y), t, 1e-14,
                                  static_cast<int>(std::max(x, y)) + 16);
  BirthDeathKernel kern(rates, m);
  const double lhs = neg_binomial_pmf(x, beta, sigma) * kern.row(x, t).p[static_cast<size_t>(y)];
  const double rhs = neg_binomial_pmf(y, beta, sigma) * kern.row(y, t).p[static_cast<size_t>(x)];
  const double bound = kern.row(x, t).series_tail + kern.row(y, t).series_tail;
  return make_point(lbl.str(), lhs, rhs, bound, 1e-10);
}

// ---------------------------------------------------------------------------
// boundary continuity
// ---------------------------------------------------------------------------

BoundaryReport extrapolate_to_zero(const std::vector<double>& gaps,
                                   const std::vector<double>& values, double tol) {
  BoundaryReport rep;
  rep.gaps = gaps;
  rep.values = values;
  const size_t k = gaps.size();
  if (k < 2 || values.size() != k) return rep;
  // Neville polynomial extrapolation at gap = 0
  std::vector<double> tab = values;
  double prev = tab[0];
  for (size_t j = 1; j < k; ++j) {
    for (size_t i = 0; i + j < k; ++i)
      tab[i] = tab[i + 1] + (tab[i + 1] - tab[i]) * gaps[i + j] / (gaps[i] - gaps[i + j]);
    if (j + 1 == k) rep.cauchy_gap = std::fabs(tab[0] - prev);
    prev = tab[0];
  }
  rep.extrapolated = tab[0];
  rep.converged = rep.cauchy_gap <= tol;
  return rep;
}

namespace {

std::vector<double> default_gaps() {
  std::vector<double> g;
  double v = 0.25;
  for (int i = 0; i < 9; ++i) {
    g.push_back(v);
    v *= 0.5;
  }
  return g;
}

// Perturb tied coordinates upward so the point becomes interior: within a
// block of equal values, coordinate r gets offset r * gap.
ChamberPointC open_up(const ChamberPointC& x, double gap) {
  std::vector<double> v = x.coords();
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] <= v[i - 1]) v[i] = v[i - 1] + gap;
  return ChamberPointC(std::move(v));
}

}  // namespace

ResidualPoint check_boundary_lambda(const ChamberPointC& x_boundary, const ChamberPointD& y) {
  std::ostringstream lbl;
  lbl << "lambda x=(" << x_boundary.str() << ") y=(" << y.str() << ")";
  const auto gaps = default_gaps();
  std::vector<double> vals;
  vals.reserve(gaps.size());
  for (double g : gaps) {
    const double l = poisson_link_logpmf_determinant(open_up(x_boundary, g), y);
    vals.push_back(std::isinf(l) ? 0.0 : std::exp(l));
  }
  const BoundaryReport rep = extrapolate_to_zero(gaps, vals, 1e-9);
  const double schur_value = poisson_link_pmf(x_boundary, y);
  ResidualPoint pt =
      make_point(lbl.str(), rep.extrapolated, schur_value, rep.cauchy_gap, 1e-8);
  pt.pass = pt.pass && rep.converged;
  return pt;
}

ResidualPoint check_boundary_continuous(bool stationary, double beta, double t,
                                        const ChamberPointC& x_boundary, const ChamberPointC& y) {
  std::ostringstream lbl;
  lbl << (stationary ? "cir_nd" : "besq_nd") << " beta=" << beta << " t=" << t << " x=("
      << x_boundary.str() << ") y=(" << y.str() << ")";
  const auto gaps = default_gaps();
  std::vector<double> vals;
  vals.reserve(gaps.size());
  for (double g : gaps) {
    const ChamberPointC xg = open_up(x_boundary, g);
    const KernelEval e =
        stationary ? cir_nd_density(beta, t, xg, y) : besq_nd_density(beta, t, xg, y);
    vals.push_back(e.value);
  }
  const BoundaryReport rep = extrapolate_to_zero(gaps, vals, 1e-6);
  // Cauchy criterion: the last refinement step of the extrapolation table.
  ResidualPoint pt = make_point(lbl.str(), rep.extrapolated, rep.extrapolated - rep.cauchy_gap,
                                0.0, 1e-6);
  pt.abs_residual = rep.cauchy_gap;
  pt.rel_residual = rep.cauchy_gap / std::max(std::fabs(rep.extrapolated), 1e-300);
  pt.pass = rep.converged;
  return pt;
}

// ---------------------------------------------------------------------------
// suite driver
// ---------------------------------------------------------------------------

namespace {

void parallel_run(std::vector<std::function<ResidualPoint()>>& tasks, int threads,
                  std::vector<ResidualPoint>& out) {
  out.resize(tasks.size());
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        out[i] = tasks[i]();
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
}

struct GridPoints {
  std::vector<ChamberPointC> xc;  // continuous starts
  std::vector<ChamberPointD> yd;  // discrete targets
  std::vector<ChamberPointD> xd;  // discrete starts
  std::vector<ChamberPointC> yc;  // continuous targets
};

GridPoints grid_for(int n) {
  GridPoints g;
  switch (n) {
    case 1:
      g.xc = {ChamberPointC({0.5}), ChamberPointC({2.0})};
      g.yd = {ChamberPointD({0}), ChamberPointD({3})};
      g.xd = {ChamberPointD({0}), ChamberPointD({2})};
      g.yc = {ChamberPointC({0.8}), ChamberPointC({2.5})};
      break;
    case 2:
      g.xc = {ChamberPointC({0.5, 2.0}), ChamberPointC({1.0, 3.0})};
      g.yd = {ChamberPointD({0, 1}), ChamberPointD({1, 3})};
      g.xd = {ChamberPointD({0, 2}), ChamberPointD({1, 3})};
      g.yc = {ChamberPointC({0.6, 2.2}), ChamberPointC({1.2, 3.1})};
      break;
    default:
      g.xc = {ChamberPointC({0.5, 1.5, 3.0})};
      g.yd = {ChamberPointD({0, 1, 2}), ChamberPointD({0, 2, 4})};
      g.xd = {ChamberPointD({0, 2, 4})};
      g.yc = {ChamberPointC({0.5, 1.6, 3.2})};
      break;
  }
  return g;
}

using TaskList = std::vector<std::function<ResidualPoint()>>;

CheckReport run_batch(const std::string& name, TaskList& tasks, int threads) {
  CheckReport rep;
  rep.identity_name = name;
  const auto t0 = std::chrono::steady_clock::now();
  parallel_run(tasks, threads, rep.grid);
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.finalize();
  return rep;
}

bool wants(const SuiteOptions& o, const std::string& name) {
  if (o.identities.empty()) return true;
  for (const auto& s : o.identities)
    if (s == name || s == "all") return true;
  return false;
}

}  // namespace

const std::vector<std::string>& identity_names() {
  static const std::vector<std::string> names = {
      "intertwining_free",       "intertwining_star",
      "intertwining_stationary", "factorization_continuous",
      "factorization_discrete",  "invariance_laguerre",
      "invariance_meixner",      "pushforward",
      "normalization_lambda",    "normalization_lambda_star",
      "generator",               "chapman_kolmogorov",
      "detailed_balance",        "boundary_lambda",
      "boundary_qnd",            "boundary_knd",
  };
  return names;
}

SuiteResult run_suite(const SuiteOptions& opts) {
  SuiteResult result;
  const int n_max = std::max(1, std::min(opts.n_max, 3));

  if (wants(opts, "intertwining_free")) {
    TaskList tasks;
    for (int n = 1; n <= n_max; ++n) {
      const GridPoints g = grid_for(n);
      for (double beta : opts.betas)
        for (double t : opts.times)
          for (const auto& x : g.xc)
            for (const auto& y : g.yd)
              tasks.push_back([=] { return check_intertwining_free(beta, t, x, y); });
    }
    result.reports.push_back(run_batch("intertwining_free", tasks, opts.threads));
  }

  if (wants(opts, "intertwining_star")) {
    TaskList tasks;
    for (int n = 1; n <= n_max; ++n) {
      const GridPoints g = grid_for(n);
      for (double beta : opts.betas)
        for (double t : opts.times)
          for (const auto& y : g.xd)
            for (const auto& x : g.yc)
              tasks.push_back([=] { return check_intertwining_star(beta, t, y, x); });
    }
    result.reports.push_back(run_batch("intertwining_star", tasks, opts.threads));
  }

  if (wants(opts, "intertwining_stationary")) {
    TaskList tasks;
    for (int n = 1; n <= n_max; ++n) {
      const GridPoints g = grid_for(n);
      for (double beta : opts.betas)
        for (double sigma : opts.sigmas)
          for (double t : opts.times)
            for (const auto& y : g.yd)
              tasks.push_back([=, x = g.xc.front()] {
                return check_intertwining_stationary(beta, sigma, t, x, y);
              });
    }
    result.reports.push_back(run_batch("intertwining_stationary", tasks, opts.threads));
  }

  if (wants(opts, "factorization_continuous")) {
    TaskList tasks;
    for (double beta : opts.betas) {
      tasks.push_back(
          [=] { return check_factorization_continuous(beta, ChamberPointC({1.0}), ChamberPointC({0.7})); });
      if (n_max >= 2)
        tasks.push_back([=] {
          return check_factorization_continuous(beta, ChamberPointC({1.0, 2.0}),
                                                ChamberPointC({0.5, 3.0}));
        });
      if (n_max >= 3)
        tasks.push_back([=] {
          return check_factorization_continuous(beta, ChamberPointC({0.5, 1.5, 3.0}),
                                                ChamberPointC({0.4, 1.2, 2.8}));
        });
    }
    result.reports.push_back(run_batch("factorization_continuous", tasks, opts.threads));
  }

  if (wants(opts, "factorization_discrete")) {
    TaskList tasks;
    for (double beta : opts.betas) {
      tasks.push_back(
          [=] { return check_factorization_discrete(beta, ChamberPointD({0}), ChamberPointD({1})); });
      if (n_max >= 2)
        tasks.push_back([=] {
          return check_factorization_discrete(beta, ChamberPointD({0, 1}), ChamberPointD({0, 2}));
        });
      if (n_max >= 3)
        tasks.push_back([=] {
          return check_factorization_discrete(beta, ChamberPointD({0, 2, 4}),
                                              ChamberPointD({1, 3, 5}));
        });
    }
    result.reports.push_back(run_batch("factorization_discrete", tasks, opts.threads));
  }

  if (wants(opts, "invariance_laguerre")) {
    TaskList tasks;
    for (double beta : opts.betas)
      for (double t : opts.times) {
        tasks.push_back([=] { return check_invariance_laguerre(beta, t, ChamberPointC({0.7})); });
        tasks.push_back([=] { return check_invariance_laguerre(beta, t, ChamberPointC({2.0})); });
        if (n_max >= 2)
          tasks.push_back(
              [=] { return check_invariance_laguerre(beta, t, ChamberPointC({0.5, 2.0})); });
        if (n_max >= 3)
          tasks.push_back(
              [=] { return check_invariance_laguerre(beta, t, ChamberPointC({0.5, 1.5, 3.0})); });
      }
    result.reports.push_back(run_batch("invariance_laguerre", tasks, opts.threads));
  }

  if (wants(opts, "invariance_meixner")) {
    TaskList tasks;
    for (double beta : opts.betas)
      for (double sigma : opts.sigmas)
        for (double t : opts.times) {
          tasks.push_back(
              [=] { return check_invariance_meixner(beta, sigma, t, ChamberPointD({1})); });
          if (n_max >= 2)
            tasks.push_back(
                [=] { return check_invariance_meixner(beta, sigma, t, ChamberPointD({0, 2})); });
          if (n_max >= 3)
            tasks.push_back([=] {
              return check_invariance_meixner(beta, sigma, t, ChamberPointD({0, 2, 4}));
            });
        }
    result.reports.push_back(run_batch("invariance_meixner", tasks, opts.threads));
  }

  if (wants(opts, "pushforward")) {
    TaskList tasks;
    for (double beta : opts.betas)
      for (double sigma : opts.sigmas) {
        tasks.push_back([=] { return check_pushforward(beta, sigma, ChamberPointD({0})); });
        tasks.push_back([=] { return check_pushforward(beta, sigma, ChamberPointD({2})); });
        if (n_max >= 3) {
          tasks.push_back([=] { return check_pushforward(beta, sigma, ChamberPointD({0, 1, 2})); });
          tasks.push_back([=] { return check_pushforward(beta, sigma, ChamberPointD({0, 2, 4})); });
        }
      }
    if (n_max >= 2) {
      // all y with y_2 <= 10, every (beta, sigma); direct 2D route on a subset
      for (double beta : opts.betas)
        for (double sigma : opts.sigmas) {
          const bool direct = (beta == opts.betas.front() && sigma == opts.sigmas.front()) ||
                              (beta == opts.betas.back() && sigma == opts.sigmas.back());
          for (long long y2 = 1; y2 <= 10; ++y2)
            for (long long y1 = 0; y1 < y2; ++y1)
              tasks.push_back([=] {
                return check_pushforward(beta, sigma, ChamberPointD({y1, y2}), direct);
              });
        }
    }
    result.reports.push_back(run_batch("pushforward", tasks, opts.threads));
  }

  if (wants(opts, "normalization_lambda")) {
    TaskList tasks;
    std::vector<ChamberPointC> xs = {ChamberPointC({0.0}), ChamberPointC({1.7})};
    if (n_max >= 2) {
      xs.push_back(ChamberPointC({1.0, 2.0}));
      xs.push_back(ChamberPointC({2.0, 2.0}));
      xs.push_back(ChamberPointC({1.5, 1.5 + 1e-5}));
      xs.push_back(ChamberPointC({0.0, 0.0}));
    }
    if (n_max >= 3) {
      xs.push_back(ChamberPointC({0.5, 1.5, 3.0}));
      xs.push_back(ChamberPointC({1.0, 1.0, 1.0}));
      xs.push_back(ChamberPointC({0.8, 0.8 + 1e-5, 2.2}));
      xs.push_back(ChamberPointC({0.0, 0.0, 0.0}));
    }
    for (const auto& x : xs)
      tasks.push_back([=] { return check_lambda_normalization(x); });
    result.reports.push_back(run_batch("normalization_lambda", tasks, opts.threads));
  }

  if (wants(opts, "normalization_lambda_star")) {
    TaskList tasks;
    for (double beta : opts.betas) {
      tasks.push_back([=] { return check_lambda_star_normalization(beta, ChamberPointD({0})); });
      tasks.push_back([=] { return check_lambda_star_normalization(beta, ChamberPointD({3})); });
      if (n_max >= 2) {
        tasks.push_back(
            [=] { return check_lambda_star_normalization(beta, ChamberPointD({0, 2})); });
        tasks.push_back(
            [=] { return check_lambda_star_normalization(beta, ChamberPointD({1, 4})); });
      }
      if (n_max >= 3)
        tasks.push_back(
            [=] { return check_lambda_star_normalization(beta, ChamberPointD({0, 2, 5})); });
    }
    result.reports.push_back(run_batch("normalization_lambda_star", tasks, opts.threads));
  }

  if (wants(opts, "generator")) {
    TaskList tasks;
    for (double beta : opts.betas) {
      tasks.push_back([=] { return check_generator_besq(beta, 0.5, 1.0, 1.3); });
      tasks.push_back([=] { return check_generator_besq(beta, 1.0, 2.0, 0.9); });
      tasks.push_back([=] { return check_generator_cir(beta, 0.5, 1.0, 1.3); });
      tasks.push_back([=] { return check_generator_cir(beta, 1.0, 2.0, 0.9); });
    }
    result.reports.push_back(run_batch("generator", tasks, opts.threads));
  }

  if (wants(opts, "chapman_kolmogorov")) {
    TaskList tasks;
    for (double beta : opts.betas) {
      tasks.push_back([=] { return check_chapman_kolmogorov_besq(beta, 0.3, 0.7, 1.0, 1.5); });
      tasks.push_back([=] { return check_chapman_kolmogorov_cir(beta, 0.3, 0.7, 1.0, 1.5); });
      tasks.push_back([=] { return check_chapman_kolmogorov_bd_free(beta, 0.3, 0.7, 1, 3); });
      tasks.push_back([=] { return check_chapman_kolmogorov_bd_stat(beta, 1.0, 0.3, 0.7, 2, 0); });
      tasks.push_back([=] { return check_chapman_kolmogorov_bd_stat(beta, 2.0, 0.4, 0.6, 1, 4); });
    }
    result.reports.push_back(run_batch("chapman_kolmogorov", tasks, opts.threads));
  }

  if (wants(opts, "detailed_balance")) {
    TaskList tasks;
    for (double beta : opts.betas) {
      tasks.push_back([=] { return check_detailed_balance_besq(beta, 0.7, 0.8, 2.1); });
      tasks.push_back([=] { return check_detailed_balance_cir(beta, 0.7, 0.8, 2.1); });
      for (double sigma : opts.sigmas)
        tasks.push_back([=] { return check_detailed_balance_bd_stat(beta, sigma, 0.6, 1, 4); });
    }
    result.reports.push_back(run_batch("detailed_balance", tasks, opts.threads));
  }

  if (n_max >= 2 && wants(opts, "boundary_lambda")) {
    TaskList tasks;
    for (double a : {0.7, 1.5}) {
      tasks.push_back(
          [=] { return check_boundary_lambda(ChamberPointC({a, a}), ChamberPointD({0, 2})); });
      tasks.push_back(
          [=] { return check_boundary_lambda(ChamberPointC({a, a}), ChamberPointD({1, 3})); });
    }
    if (n_max >= 3)
      tasks.push_back([=] {
        return check_boundary_lambda(ChamberPointC({0.8, 0.8, 2.2}), ChamberPointD({0, 2, 4}));
      });
    result.reports.push_back(run_batch("boundary_lambda", tasks, opts.threads));
  }

  if (n_max >= 2 && wants(opts, "boundary_qnd")) {
    TaskList tasks;
    for (double beta : {1.0, 2.5})
      tasks.push_back([=] {
        return check_boundary_continuous(false, beta, 0.5, ChamberPointC({1.0, 1.0}),
                                         ChamberPointC({0.6, 1.8}));
      });
    result.reports.push_back(run_batch("boundary_qnd", tasks, opts.threads));
  }

  if (n_max >= 2 && wants(opts, "boundary_knd")) {
    TaskList tasks;
    for (double beta : {1.0, 2.5})
      tasks.push_back([=] {
        return check_boundary_continuous(true, beta, 0.5, ChamberPointC({1.0, 1.0}),
                                         ChamberPointC({0.6, 1.8}));
      });
    result.reports.push_back(run_batch("boundary_knd", tasks, opts.threads));
  }

  result.all_pass = !result.reports.empty();
  for (const auto& r : result.reports) result.all_pass = result.all_pass && r.pass;
  return result;
}

std::string to_json(const SuiteResult& result, const std::string& config_json) {
  json root;
  root["artifact"] = {{"name", kName}, {"version", kVersion}};
  root["config"] = json::parse(config_json.empty() ? "{}" : config_json);
  root["all_pass"] = result.all_pass;
  json checks = json::array();
  for (const auto& r : result.reports) {
    json jr;
    jr["identity"] = r.identity_name;
    jr["tolerance"] = r.tolerance;
    jr["max_abs_residual"] = r.max_abs_residual;
    jr["max_rel_residual"] = r.max_rel_residual;
    jr["propagated_bound"] = r.propagated_bound;
    jr["pass"] = r.pass;
    jr["wall_time_s"] = r.wall_time_s;
    jr["grid_size"] = r.grid.size();
    json grid = json::array();
    for (const auto& pt : r.grid) {
      grid.push_back({{"label", pt.label},
                      {"lhs", pt.lhs},
                      {"rhs", pt.rhs},
                      {"abs_residual", pt.abs_residual},
                      {"rel_residual", pt.rel_residual},
                      {"bound", pt.bound},
                      {"tolerance", pt.tolerance},
                      {"relative", pt.use_relative},
                      {"pass", pt.pass}});
    }
    jr["grid"] = std::move(grid);
    checks.push_back(std::move(jr));
  }
  root["checks"] = std::move(checks);
  return root.dump(2);
}

std::string to_table(const SuiteResult& result) {
  std::ostringstream os;
  os << "identity                    points   max_abs     max_rel     tol        time    status\n";
  os << "--------------------------------------------------------------------------------------\n";
  for (const auto& r : result.reports) {
    os.setf(std::ios::left);
    os.width(28);
    os << r.identity_name;
    os.unsetf(std::ios::left);
    os.width(6);
    os << r.grid.size();
    os << "  ";
    os.setf(std::ios::scientific);
    os.precision(2);
    os << r.max_abs_residual << "  " << r.max_rel_residual << "  " << r.tolerance;
    os.unsetf(std::ios::scientific);
    os.precision(1);
    os.setf(std::ios::fixed);
    os << "  " << r.wall_time_s << "s";
    os.unsetf(std::ios::fixed);
    os << "   " << (r.pass ? "PASS" : "FAIL") << "\n";
  }
  os << (result.all_pass ? "ALL CHECKS PASS" : "CHECK FAILURES PRESENT") << "\n";
  return os.str();
}

}  // namespace gateways::checks
