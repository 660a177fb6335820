#include "gateways/kernels1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gateways/quadrature.hpp"
#include "gateways/scalar_math.hpp"

namespace gateways {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSeriesTailTol = 1e-15;

void check_diffusion(const DiffusionParams& p, double x, double y) {
  if (!(p.beta > 0.0)) throw std::domain_error("diffusion kernel: beta must be > 0");
  if (!(x >= 0.0)) throw std::domain_error("diffusion kernel: x must be >= 0");
  if (!(y >= 0.0)) throw std::domain_error("diffusion kernel: y must be >= 0");
  if (p.t < 0.0) throw std::domain_error("diffusion kernel: t must be >= 0");
  if (p.t == 0.0)
    throw PointMassError("diffusion kernel at t == 0 is a point mass, not a density");
}

// log sum_k Poisson(k; lam) GammaPdf(y; k+beta, scale), with the Poisson
// series chopped once its tail is below kSeriesTailTol. Also reports an
// absolute bound on the discarded mass contribution.
double mixture_logdensity(double lam, double beta, double scale, double y, double* abs_bound) {
  if (y <= 0.0) {
    if (abs_bound) *abs_bound = 0.0;
    return kNegInf;  // density carried on (0, inf)
  }
  const long long kmax =
      static_cast<long long>(std::ceil(lam + 12.0 * std::sqrt(lam + 1.0) + 35.0));
  // Poisson log-weights by recurrence; Gamma log-pdf by recurrence in shape.
  // Streaming log-sum-exp: acc holds the sum scaled by exp(-max_log).
  double lp = -lam;                                // log Poisson(0; lam)
  double lg = gamma_logpdf(y, beta, scale);        // shape beta
  const double ly = std::log(y) - std::log(scale);
  const double llam = lam > 0.0 ? std::log(lam) : kNegInf;
  double max_log = kNegInf, acc = 0.0;
  double pois_cum = 0.0;
  double gmax = kNegInf;
  long long terms = 0;
  for (long long k = 0; k <= kmax; ++k) {
    const double term = lp + lg;
    if (term > max_log) {
      acc = acc * std::exp(max_log - term) + 1.0;
      max_log = term;
    } else {
      acc += std::exp(term - max_log);
    }
    ++terms;
    gmax = std::max(gmax, lg);
    pois_cum += std::exp(lp);
    if (k >= 5 && 1.0 - pois_cum < kSeriesTailTol && lp < max_log - 60.0) break;
    lp += llam - std::log(static_cast<double>(k) + 1.0);
    lg += ly - std::log(beta + static_cast<double>(k));
    if (lam == 0.0) break;  // only the k = 0 term exists
  }
  const double out = max_log + std::log(acc);
  if (abs_bound) {
    const double tail = std::max(0.0, 1.0 - pois_cum);
    const double peak = std::exp(std::min(gmax, 700.0));
    *abs_bound = tail * peak + 8.0 * std::numeric_limits<double>::epsilon() *
                                   static_cast<double>(terms) * std::exp(std::min(out, 700.0));
  }
  return out;
}

}  // namespace

double besq_logdensity(const DiffusionParams& p, double x, double y) {
  check_diffusion(p, x, y);
  return mixture_logdensity(x / p.t, p.beta, p.t, y, nullptr);
}

double besq_density(const DiffusionParams& p, double x, double y) {
  return std::exp(besq_logdensity(p, x, y));
}

Eval1D besq_density_ev(const DiffusionParams& p, double x, double y) {
  check_diffusion(p, x, y);
  double bound = 0.0;
  const double lv = mixture_logdensity(x / p.t, p.beta, p.t, y, &bound);
  return {std::exp(lv), bound};
}

double besq_sample(const DiffusionParams& p, double x, Rng& rng) {
  if (!(p.beta > 0.0) || !(x >= 0.0) || p.t < 0.0)
    throw std::domain_error("besq_sample: invalid parameters");
  if (p.t == 0.0) return x;
  const long long k = rng.poisson(x / p.t);
  return rng.gamma(static_cast<double>(k) + p.beta, p.t);
}

double cir_logdensity(const DiffusionParams& p, double x, double y) {
  check_diffusion(p, x, y);
  const double s = std::expm1(p.t);                 // e^t - 1
  const double scale = -std::expm1(-p.t);           // 1 - e^{-t}
  return mixture_logdensity(x / s, p.beta, scale, y, nullptr);
}

double cir_density(const DiffusionParams& p, double x, double y) {
  return std::exp(cir_logdensity(p, x, y));
}

Eval1D cir_density_ev(const DiffusionParams& p, double x, double y) {
  check_diffusion(p, x, y);
  double bound = 0.0;
  const double lv = mixture_logdensity(x / std::expm1(p.t), p.beta, -std::expm1(-p.t), y, &bound);
  return {std::exp(lv), bound};
}

double cir_sample(const DiffusionParams& p, double x, Rng& rng) {
  if (!(p.beta > 0.0) || !(x >= 0.0) || p.t < 0.0)
    throw std::domain_error("cir_sample: invalid parameters");
  if (p.t == 0.0) return x;
  const long long k = rng.poisson(x / std::expm1(p.t));
  return rng.gamma(static_cast<double>(k) + p.beta, -std::expm1(-p.t));
}

// ---------------------------------------------------------------------------
// uniformization
// ---------------------------------------------------------------------------

BirthDeathKernel::BirthDeathKernel(BDRates rates, int truncation)
    : rates_(rates), M_(truncation) {
  if (M_ < 1) throw std::domain_error("BirthDeathKernel: truncation must be >= 1");
  if (!(rates_.beta > 0.0)) throw std::domain_error("BirthDeathKernel: beta must be > 0");
  if (rates_.kind == ChainKind::kStationary && !(rates_.sigma > 0.0))
    throw std::domain_error("BirthDeathKernel: sigma must be > 0");
  double c = 0.0;
  for (long long n = 0; n < M_; ++n) c = std::max(c, rates_.birth(n) + rates_.death(n));
  uniform_rate_ = c;
}

BirthDeathKernel::Row BirthDeathKernel::run(std::vector<double> v, double t) const {
  Row out;
  out.p.assign(static_cast<size_t>(M_), 0.0);
  if (t < 0.0) throw std::domain_error("BirthDeathKernel: t must be >= 0");
  const double ct = uniform_rate_ * t;
  if (ct == 0.0) {
    out.p = std::move(v);
    double s = 0.0;
    for (double q : out.p) s += q;
    out.deficit = std::max(0.0, 1.0 - s);
    return out;
  }
  const long long jmax =
      static_cast<long long>(std::ceil(ct + 12.0 * std::sqrt(ct + 1.0) + 35.0));
  std::vector<double> next(static_cast<size_t>(M_), 0.0);
  double lw = -ct;  // log Poisson weight at j = 0
  double wsum = 0.0;
  const double lct = std::log(ct);
  for (long long j = 0; j <= jmax; ++j) {
    const double w = std::exp(lw);
    wsum += w;
    if (w > 0.0)
      for (int i = 0; i < M_; ++i) out.p[static_cast<size_t>(i)] += w * v[static_cast<size_t>(i)];
    if (j == jmax) break;
    // v <- v P, P = I + Q/c, transitions dropped above M-1
    for (int i = 0; i < M_; ++i) {
      const double b = rates_.birth(i);
      const double d = rates_.death(i);
      double acc = v[static_cast<size_t>(i)] * (1.0 - (b + d) / uniform_rate_);
      if (i > 0) acc += v[static_cast<size_t>(i - 1)] * rates_.birth(i - 1) / uniform_rate_;
      if (i + 1 < M_) acc += v[static_cast<size_t>(i + 1)] * rates_.death(i + 1) / uniform_rate_;
      next[static_cast<size_t>(i)] = acc;
    }
    v.swap(next);
    lw += lct - std::log(static_cast<double>(j) + 1.0);
  }
  out.series_tail = std::max(0.0, 1.0 - wsum);
  double s = 0.0;
  for (double q : out.p) s += q;
  out.deficit = std::max(0.0, 1.0 - s);
  return out;
}

const BirthDeathKernel::Row& BirthDeathKernel::row(long long x, double t) {
  if (x < 0 || x >= M_) throw std::domain_error("BirthDeathKernel::row: state outside truncation");
  const auto key = std::make_pair(x, t);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  std::vector<double> e(static_cast<size_t>(M_), 0.0);
  e[static_cast<size_t>(x)] = 1.0;
  return cache_.emplace(key, run(std::move(e), t)).first->second;
}

BirthDeathKernel::Row BirthDeathKernel::column(long long y, double t) const {
  if (y < 0 || y >= M_)
    throw std::domain_error("BirthDeathKernel::column: state outside truncation");
  // column y of exp(tQ) = row y of exp(tQ^T); same uniformization with the
  // transposed one-step matrix.
  Row out;
  out.p.assign(static_cast<size_t>(M_), 0.0);
  const double ct = uniform_rate_ * t;
  std::vector<double> v(static_cast<size_t>(M_), 0.0);
  v[static_cast<size_t>(y)] = 1.0;
  if (ct == 0.0) {
    out.p = std::move(v);
    return out;
  }
  const long long jmax =
      static_cast<long long>(std::ceil(ct + 12.0 * std::sqrt(ct + 1.0) + 35.0));
  std::vector<double> next(static_cast<size_t>(M_), 0.0);
  double lw = -ct;
  double wsum = 0.0;
  const double lct = std::log(ct);
  for (long long j = 0; j <= jmax; ++j) {
    const double w = std::exp(lw);
    wsum += w;
    if (w > 0.0)
      for (int i = 0; i < M_; ++i) out.p[static_cast<size_t>(i)] += w * v[static_cast<size_t>(i)];
    if (j == jmax) break;
    for (int i = 0; i < M_; ++i) {
      const double b = rates_.birth(i);
      const double d = rates_.death(i);
      // v <- v P^T: contributions follow P(i, .) instead of P(., i)
      double acc = v[static_cast<size_t>(i)] * (1.0 - (b + d) / uniform_rate_);
      if (i + 1 < M_) acc += v[static_cast<size_t>(i + 1)] * b / uniform_rate_;
      if (i > 0) acc += v[static_cast<size_t>(i - 1)] * d / uniform_rate_;
      next[static_cast<size_t>(i)] = acc;
    }
    v.swap(next);
    lw += lct - std::log(static_cast<double>(j) + 1.0);
  }
  out.series_tail = std::max(0.0, 1.0 - wsum);
  return out;
}

BirthDeathKernel::Row BirthDeathKernel::propagate(const std::vector<double>& init,
                                                  double t) const {
  if (static_cast<int>(init.size()) != M_)
    throw std::invalid_argument("BirthDeathKernel::propagate: init size mismatch");
  return run(init, t);
}

int choose_truncation(const BDRates& rates, long long x, double t, double deficit_tol,
                      int min_states) {
  // Start from the drift/variance envelope of the chain and certify by the
  // computed escape deficit, doubling as needed.
  double mean, var;
  if (rates.kind == ChainKind::kFree) {
    mean = static_cast<double>(x) + rates.beta * t;
    var = 2.0 * static_cast<double>(x) * t + rates.beta * t * t + rates.beta * t;
  } else {
    const double m_inf = rates.sigma * rates.beta;
    mean = m_inf + (static_cast<double>(x) - m_inf) * std::exp(-t);
    var = (2.0 * rates.sigma + 1.0) * (std::max(mean, m_inf) + rates.beta) * std::min(t, 1.0) +
          m_inf * (1.0 + rates.sigma) + 4.0;
  }
  int m = static_cast<int>(
      std::max<double>({static_cast<double>(min_states), static_cast<double>(x) + 2.0,
                        mean + 14.0 * std::sqrt(var + 1.0) + 30.0}));
  for (int iter = 0; iter < 16; ++iter) {
    BirthDeathKernel k(rates, m);
    const auto& r = k.row(x, t);
    if (r.deficit + r.series_tail < deficit_tol) return m;
    m *= 2;
    if (m > 200000)
      throw NumericalBudgetError("choose_truncation: state space exceeds 200000 states");
  }
  throw NumericalBudgetError("choose_truncation: escape deficit refuses to shrink");
}

namespace {

Eval1D bd_prob_impl(const ChainParams& p, ChainKind kind, long long x, long long y) {
  if (!(p.beta > 0.0)) throw std::domain_error("bd kernel: beta must be > 0");
  if (kind == ChainKind::kStationary && !(p.sigma > 0.0))
    throw std::domain_error("bd kernel: sigma must be > 0");
  if (x < 0 || y < 0) throw std::domain_error("bd kernel: states must be >= 0");
  if (p.t < 0.0) throw std::domain_error("bd kernel: t must be >= 0");
  const BDRates rates{kind, p.beta, p.sigma};
  int m = p.truncation;
  if (m <= 0) {
    const int floor_states = static_cast<int>(std::max<long long>(32, y + 2));
    m = choose_truncation(rates, x, p.t, 1e-13, floor_states);
  } else if (x >= m || y >= m) {
    throw std::domain_error("bd kernel: state outside truncation window");
  }

  BirthDeathKernel at_m(rates, m);
  const auto& rm = at_m.row(x, p.t);
  BirthDeathKernel at_2m(rates, 2 * m);
  const auto& r2m = at_2m.row(x, p.t);
  const double v = rm.p[static_cast<size_t>(y)];
  const double v2 = r2m.p[static_cast<size_t>(y)];
  return {v, rm.series_tail + r2m.series_tail + std::fabs(v - v2)};
}

}  // namespace

Eval1D bd_free_prob(const ChainParams& p, long long x, long long y) {
  return bd_prob_impl(p, ChainKind::kFree, x, y);
}

Eval1D bd_stat_prob(const ChainParams& p, long long x, long long y) {
  return bd_prob_impl(p, ChainKind::kStationary, x, y);
}

JumpPath bd_sample_path(const ChainParams& p, ChainKind kind, long long x0, double horizon,
                        Rng& rng) {
  if (x0 < 0) throw std::domain_error("bd_sample_path: x0 must be >= 0");
  if (horizon < 0.0) throw std::domain_error("bd_sample_path: horizon must be >= 0");
  const BDRates rates{kind, p.beta, p.sigma};
  JumpPath path;
  path.times.push_back(0.0);
  path.states.push_back(x0);
  double t = 0.0;
  long long n = x0;
  for (;;) {
    const double b = rates.birth(n);
    const double d = rates.death(n);
    const double total = b + d;
    if (total <= 0.0) break;
    t += rng.exponential(total);
    if (t >= horizon) break;
    n += (rng.uniform() * total < b) ? 1 : -1;
    path.times.push_back(t);
    path.states.push_back(n);
  }
  return path;
}

}  // namespace gateways
