#include "gateways/links.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "gateways/quadrature.hpp"
#include "gateways/scalar_math.hpp"
#include "log_det.hpp"

namespace gateways {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double sum_coords(const ChamberPointC& x) {
  double s = 0.0;
  for (double c : x.coords()) s += c;
  return s;
}

}  // namespace

struct PoissonLinkEvaluator::Impl {
  ChamberPointC x;
  bool factored = false;
  double sum_x = 0.0;
  std::unique_ptr<SchurEvaluator> schur;  // factored branch only
};

PoissonLinkEvaluator::PoissonLinkEvaluator(const ChamberPointC& x) : impl_(new Impl) {
  impl_->x = x;
  impl_->sum_x = sum_coords(x);
  impl_->factored = x.size() > 1 && needs_boundary_branch(x);
  if (impl_->factored) impl_->schur = std::make_unique<SchurEvaluator>(x);
}

PoissonLinkEvaluator::~PoissonLinkEvaluator() = default;
PoissonLinkEvaluator::PoissonLinkEvaluator(PoissonLinkEvaluator&&) noexcept = default;
PoissonLinkEvaluator& PoissonLinkEvaluator::operator=(PoissonLinkEvaluator&&) noexcept = default;

double PoissonLinkEvaluator::logpmf(const ChamberPointD& y) const {
  const ChamberPointC& x = impl_->x;
  if (y.size() != x.size()) throw std::invalid_argument("poisson link: dimension mismatch");
  if (x.size() == 1) return poisson_logpmf(y[0], x[0]);
  if (!impl_->factored) return poisson_link_logpmf_determinant(x, y);
  const LogWeight s = (*impl_->schur)(y);
  if (s.is_zero()) return kNegInf;
  double lg = log_vandermonde(y.coords()).log_value() - impl_->sum_x + s.log_value();
  for (int j = 0; j < y.size(); ++j) lg -= std::lgamma(static_cast<double>(y[j]) + 1.0);
  return lg;
}

double PoissonLinkEvaluator::pmf(const ChamberPointD& y) const {
  const double l = logpmf(y);
  return l == kNegInf ? 0.0 : std::exp(l);
}

double poisson_link_logpmf_determinant(const ChamberPointC& x, const ChamberPointD& y) {
  const int n = x.size();
  if (y.size() != n) throw std::invalid_argument("poisson link: dimension mismatch");
  if (!x.is_interior())
    throw std::domain_error("poisson link determinant branch: x must be interior");
  if (n == 1) return poisson_logpmf(y[0], x[0]);
  Eigen::MatrixXd loge(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) loge(i, j) = poisson_logpmf(y[j], x[i]);
  const LogWeight det = log_scaled_det(loge);
  if (det.sign <= 0) return kNegInf;
  const LogWeight pref = log_vandermonde(y.coords()) / log_vandermonde(x.coords());
  return (pref * det).log_value();
}

double poisson_link_logpmf(const ChamberPointC& x, const ChamberPointD& y) {
  return PoissonLinkEvaluator(x).logpmf(y);
}

double poisson_link_pmf(const ChamberPointC& x, const ChamberPointD& y) {
  const double l = poisson_link_logpmf(x, y);
  return l == kNegInf ? 0.0 : std::exp(l);
}

double poisson_link_sigma_logpmf(double sigma, const ChamberPointC& x, const ChamberPointD& y) {
  if (!(sigma > 0.0)) throw std::domain_error("poisson link: sigma must be > 0");
  std::vector<double> scaled = x.coords();
  for (double& c : scaled) c *= sigma;
  return poisson_link_logpmf(ChamberPointC(std::move(scaled)), y);
}

double poisson_link_sigma_pmf(double sigma, const ChamberPointC& x, const ChamberPointD& y) {
  const double l = poisson_link_sigma_logpmf(sigma, x, y);
  return l == kNegInf ? 0.0 : std::exp(l);
}

double gamma_link_logdensity(double beta, const ChamberPointD& y, const ChamberPointC& x) {
  if (!(beta > 0.0)) throw std::domain_error("gamma link: beta must be > 0");
  const int n = y.size();
  if (x.size() != n) throw std::invalid_argument("gamma link: dimension mismatch");
  if (n == 1) return gamma_logpdf(x[0], static_cast<double>(y[0]) + beta, 1.0);
  if (!x.is_interior()) return kNegInf;  // density vanishes on the boundary
  Eigen::MatrixXd loge(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      loge(i, j) = gamma_logpdf(x[i], static_cast<double>(y[j]) + beta, 1.0);
  const LogWeight det = log_scaled_det(loge);
  if (det.sign <= 0) return kNegInf;
  const LogWeight pref = log_vandermonde(x.coords()) / log_vandermonde(y.coords());
  return (pref * det).log_value();
}

double gamma_link_density(double beta, const ChamberPointD& y, const ChamberPointC& x) {
  const double l = gamma_link_logdensity(beta, y, x);
  return l == kNegInf ? 0.0 : std::exp(l);
}

PoissonLinkSampler::PoissonLinkSampler(const ChamberPointC& x, double tail_eps) {
  const int n = x.size();
  if (n > 4) throw std::invalid_argument("PoissonLinkSampler: N <= 4 only");
  if (!(tail_eps > 0.0)) throw std::invalid_argument("PoissonLinkSampler: tail_eps must be > 0");

  // Shells of growing max coordinate until the un-enumerated mass is small.
  const PoissonLinkEvaluator eval(x);
  const size_t budget = 4000000;
  long long top = n - 1;
  while (covered_ < 1.0 - tail_eps) {
    for_each_chamber_shell(n, top, [&](const std::vector<long long>& y) {
      const double p = eval.pmf(ChamberPointD(y));
      if (p > 0.0) {
        covered_ += p;
        support_.emplace_back(y, p);
        cumulative_.push_back(covered_);
      }
    });
    if (support_.size() > budget)
      throw NumericalBudgetError(
          "PoissonLinkSampler: enumeration budget exceeded; required max coordinate above " +
          std::to_string(top));
    ++top;
    if (top > 100000)
      throw NumericalBudgetError("PoissonLinkSampler: support extends past coordinate 100000");
  }
}

ChamberPointD PoissonLinkSampler::sample(Rng& rng) const {
  const double u = rng.uniform() * covered_;
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
  const size_t idx = std::min(static_cast<size_t>(it - cumulative_.begin()),
                              support_.size() - 1);
  return ChamberPointD(support_[idx].first);
}

ChamberPointD poisson_link_sample(const ChamberPointC& x, Rng& rng, double tail_eps) {
  PoissonLinkSampler s(x, tail_eps);
  return s.sample(rng);
}

}  // namespace gateways
