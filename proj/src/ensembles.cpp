#include "gateways/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gateways/links.hpp"
#include "gateways/quadrature.hpp"
#include "gateways/scalar_math.hpp"

namespace gateways {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_params(const EnsembleParams& p, bool need_sigma) {
  if (p.N < 1) throw std::domain_error("ensemble: N must be >= 1");
  if (!(p.beta > 0.0)) throw std::domain_error("ensemble: beta must be > 0");
  if (need_sigma && !(p.sigma > 0.0)) throw std::domain_error("ensemble: sigma must be > 0");
}
}  // namespace

double laguerre_log_partition(int N, double beta) {
  if (N < 1 || !(beta > 0.0)) throw std::domain_error("laguerre_log_partition: bad parameters");
  double lz = -static_cast<double>(N) * std::lgamma(beta);
  for (int j = 1; j <= N; ++j)
    lz += std::lgamma(static_cast<double>(j) + 1.0) + std::lgamma(beta + j - 1.0);
  return lz;
}

double laguerre_partition(int N, double beta) { return std::exp(laguerre_log_partition(N, beta)); }

double laguerre_logdensity(const EnsembleParams& p, const ChamberPointC& x) {
  check_params(p, false);
  if (x.size() != p.N) throw std::invalid_argument("laguerre_logdensity: dimension mismatch");
  if (!x.is_interior() || x[0] == 0.0) return kNegInf;
  double lg = std::lgamma(static_cast<double>(p.N) + 1.0) - laguerre_log_partition(p.N, p.beta);
  lg += 2.0 * log_vandermonde(x.coords()).log_value();
  for (int i = 0; i < p.N; ++i)
    lg += (p.beta - 1.0) * std::log(x[i]) - x[i] - std::lgamma(p.beta);
  return lg;
}

double laguerre_density(const EnsembleParams& p, const ChamberPointC& x) {
  const double l = laguerre_logdensity(p, x);
  return l == kNegInf ? 0.0 : std::exp(l);
}

ChamberPointC laguerre_sample(const EnsembleParams& p, Rng& rng) {
  check_params(p, false);
  const double rounded = std::round(p.beta);
  if (std::fabs(p.beta - rounded) > 1e-12 || rounded < 1.0)
    throw std::domain_error(
        "laguerre_sample: exact path needs integer beta >= 1; use LaguerreMcmcSampler");
  const int n = p.N;
  const int m = n + static_cast<int>(rounded) - 1;
  Eigen::MatrixXcd g(n, m);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      g(i, j) = std::complex<double>(rng.normal() * inv_sqrt2, rng.normal() * inv_sqrt2);
  Eigen::MatrixXcd w = g * g.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(w);
  std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  for (double& v : ev) v = std::max(v, 0.0);
  std::sort(ev.begin(), ev.end());
  return ChamberPointC(std::move(ev));
}

LaguerreMcmcSampler::LaguerreMcmcSampler(const EnsembleParams& p, Rng rng, McmcOptions opts)
    : p_(p), rng_(rng), opts_(opts) {
  check_params(p, false);
  // spread-out interior start near the bulk scale
  state_.resize(static_cast<size_t>(p.N));
  for (int i = 0; i < p.N; ++i)
    state_[static_cast<size_t>(i)] = (p.beta + 2.0 * i + 1.0);
  log_target_ = laguerre_logdensity(p_, ChamberPointC(state_));
  for (int i = 0; i < opts_.burn_in; ++i) step_once();
}

void LaguerreMcmcSampler::step_once() {
  ++proposed_;
  const int n = p_.N;
  std::vector<double> prop(state_);
  double log_fwd = 0.0, log_bwd = 0.0;
  for (int i = 0; i < n; ++i) {
    const double sd = opts_.step * std::sqrt(std::max(state_[static_cast<size_t>(i)], 1e-3));
    prop[static_cast<size_t>(i)] = state_[static_cast<size_t>(i)] + sd * rng_.normal();
  }
  // ordered-chamber constraint
  for (int i = 0; i < n; ++i) {
    if (prop[static_cast<size_t>(i)] <= 0.0) return;
    if (i > 0 && prop[static_cast<size_t>(i)] <= prop[static_cast<size_t>(i - 1)]) return;
  }
  for (int i = 0; i < n; ++i) {
    const double sd_f = opts_.step * std::sqrt(std::max(state_[static_cast<size_t>(i)], 1e-3));
    const double sd_b = opts_.step * std::sqrt(std::max(prop[static_cast<size_t>(i)], 1e-3));
    const double d = prop[static_cast<size_t>(i)] - state_[static_cast<size_t>(i)];
    log_fwd += -0.5 * d * d / (sd_f * sd_f) - std::log(sd_f);
    log_bwd += -0.5 * d * d / (sd_b * sd_b) - std::log(sd_b);
  }
  const double lt = laguerre_logdensity(p_, ChamberPointC(prop));
  if (lt == kNegInf) return;
  const double log_acc = lt - log_target_ + log_bwd - log_fwd;
  if (std::log(rng_.uniform_pos()) < log_acc) {
    state_ = std::move(prop);
    log_target_ = lt;
    ++accepted_;
  }
}

ChamberPointC LaguerreMcmcSampler::sample() {
  for (int i = 0; i < opts_.thinning; ++i) step_once();
  return ChamberPointC(state_);
}

double LaguerreMcmcSampler::acceptance_rate() const {
  return proposed_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(proposed_);
}

MeixnerPmf::MeixnerPmf(const EnsembleParams& p) : p_(p) {
  check_params(p, true);
  const int n = p.N;
  // Unnormalized mass by shells of the top coordinate; stop once the shell
  // contribution with a geometric majorant certifies a relative tail < 1e-12.
  double total = 0.0;
  double prev_shell = 0.0;
  long long top = n - 1;
  for (;;) {
    double shell = 0.0;
    for_each_chamber_shell(n, top, [&](const std::vector<long long>& y) {
      double lg = 2.0 * log_vandermonde(y).log_value();
      for (int i = 0; i < n; ++i)
        lg += neg_binomial_logpmf(y[static_cast<size_t>(i)], p.beta, p.sigma);
      shell += std::exp(lg);
    });
    total += shell;
    if (top > 4 * (n + 1) && shell > 0.0 && prev_shell > 0.0) {
      const double r = shell / prev_shell;
      if (r < 0.9) {
        const double tail = shell * r / (1.0 - r);
        if (tail < 1e-12 * total) {
          tail_bound_ = tail;
          cap_ = top;
          break;
        }
      }
    }
    if (shell == 0.0 && total > 0.0 && top > 8 * (n + 1)) {
      tail_bound_ = 0.0;
      cap_ = top;
      break;
    }
    prev_shell = shell;
    ++top;
    if (top > 100000)
      throw NumericalBudgetError("MeixnerPmf: normalization support extends past 100000");
  }
  log_z_ = std::log(total);
}

double MeixnerPmf::logpmf(const ChamberPointD& y) const {
  if (y.size() != p_.N) throw std::invalid_argument("meixner_logpmf: dimension mismatch");
  double lg = 2.0 * log_vandermonde(y.coords()).log_value() - log_z_;
  for (int i = 0; i < p_.N; ++i) lg += neg_binomial_logpmf(y[i], p_.beta, p_.sigma);
  return lg;
}

double MeixnerPmf::pmf(const ChamberPointD& y) const { return std::exp(logpmf(y)); }

const MeixnerPmf& meixner_cached(const EnsembleParams& p) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<MeixnerPmf>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(p.N, p.beta, p.sigma);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<MeixnerPmf>(p)).first;
  return *it->second;
}

double meixner_logpmf(const EnsembleParams& p, const ChamberPointD& y) {
  return meixner_cached(p).logpmf(y);
}

double meixner_pmf(const EnsembleParams& p, const ChamberPointD& y) {
  return meixner_cached(p).pmf(y);
}

ChamberPointD meixner_sample(const EnsembleParams& p, Rng& rng) {
  check_params(p, true);
  if (p.N > 4) throw std::domain_error("meixner_sample: N <= 4 only (link sampler limit)");
  const ChamberPointC x = laguerre_sample(p, rng);
  std::vector<double> scaled = x.coords();
  for (double& c : scaled) c *= p.sigma;
  return poisson_link_sample(ChamberPointC(std::move(scaled)), rng);
}

}  // namespace gateways
