#include "gateways/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Dense>

#include "log_det.hpp"

namespace gateways {

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  return out;
}

template <typename T>
std::string join_csv(const std::vector<T>& v) {
  std::ostringstream os;
  os.precision(17);
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  return os.str();
}

}  // namespace

ChamberPointC::ChamberPointC(std::vector<double> coords) : v_(std::move(coords)) {
  if (v_.empty()) throw std::invalid_argument("ChamberPointC: empty coordinate vector");
  for (size_t i = 0; i < v_.size(); ++i) {
    if (!std::isfinite(v_[i]) || v_[i] < 0.0)
      throw std::invalid_argument("ChamberPointC: coordinates must be finite and >= 0");
    if (i > 0 && v_[i] < v_[i - 1])
      throw std::invalid_argument("ChamberPointC: coordinates must be non-decreasing");
  }
}

bool ChamberPointC::is_interior() const {
  for (size_t i = 1; i < v_.size(); ++i)
    if (v_[i] == v_[i - 1]) return false;
  return true;
}

double ChamberPointC::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < v_.size(); ++i) g = std::min(g, v_[i] - v_[i - 1]);
  return g;
}

std::string ChamberPointC::str() const { return join_csv(v_); }

ChamberPointC ChamberPointC::parse(const std::string& csv) {
  std::vector<double> v;
  for (const auto& tok : split_csv(csv)) v.push_back(std::stod(tok));
  return ChamberPointC(std::move(v));
}

ChamberPointD::ChamberPointD(std::vector<long long> coords) : v_(std::move(coords)) {
  if (v_.empty()) throw std::invalid_argument("ChamberPointD: empty coordinate vector");
  for (size_t i = 0; i < v_.size(); ++i) {
    if (v_[i] < 0) throw std::invalid_argument("ChamberPointD: coordinates must be >= 0");
    if (i > 0 && v_[i] <= v_[i - 1])
      throw std::invalid_argument("ChamberPointD: coordinates must be strictly increasing");
  }
}

std::string ChamberPointD::str() const { return join_csv(v_); }

ChamberPointD ChamberPointD::parse(const std::string& csv) {
  std::vector<long long> v;
  for (const auto& tok : split_csv(csv)) v.push_back(std::stoll(tok));
  return ChamberPointD(std::move(v));
}

PartitionN::PartitionN(std::vector<long long> parts) : p_(std::move(parts)) {
  if (p_.empty()) throw std::invalid_argument("PartitionN: empty parts vector");
  for (size_t i = 0; i < p_.size(); ++i) {
    if (p_[i] < 0) throw std::invalid_argument("PartitionN: parts must be >= 0");
    if (i > 0 && p_[i] > p_[i - 1])
      throw std::invalid_argument("PartitionN: parts must be non-increasing");
  }
}

long long PartitionN::weight() const {
  long long w = 0;
  for (long long p : p_) w += p;
  return w;
}

std::string PartitionN::str() const { return join_csv(p_); }

PartitionN PartitionN::parse(const std::string& csv) {
  std::vector<long long> v;
  for (const auto& tok : split_csv(csv)) v.push_back(std::stoll(tok));
  return PartitionN(std::move(v));
}

ChamberPointD partition_to_chamber(const PartitionN& lambda) {
  const int n = lambda.size();
  std::vector<long long> y(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) y[static_cast<size_t>(i - 1)] = lambda[n - i] + i - 1;
  return ChamberPointD(std::move(y));
}

PartitionN chamber_to_partition(const ChamberPointD& y) {
  const int n = y.size();
  std::vector<long long> parts(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) parts[static_cast<size_t>(n - i)] = y[i - 1] - (i - 1);
  return PartitionN(std::move(parts));
}

void for_each_chamber_shell(int n, long long top,
                            const std::function<void(const std::vector<long long>&)>& fn) {
  if (n < 1 || top < n - 1) return;
  std::vector<long long> y(static_cast<size_t>(n));
  y[static_cast<size_t>(n - 1)] = top;
  for (int i = 0; i < n - 1; ++i) y[static_cast<size_t>(i)] = i;
  for (;;) {
    fn(y);
    if (n == 1) return;
    int i = n - 2;
    while (i >= 0) {
      const long long cap = y[static_cast<size_t>(i + 1)] - 1;
      if (y[static_cast<size_t>(i)] < cap) {
        ++y[static_cast<size_t>(i)];
        for (int j = i + 1; j < n - 1; ++j)
          y[static_cast<size_t>(j)] = y[static_cast<size_t>(j - 1)] + 1;
        break;
      }
      // reset to the lowest admissible value given the next slot restarts too
      --i;
    }
    if (i < 0) return;
  }
}

void for_each_chamber_point(int n, long long cap,
                            const std::function<void(const std::vector<long long>&)>& fn) {
  for (long long top = n - 1; top <= cap; ++top) for_each_chamber_shell(n, top, fn);
}

namespace {

template <typename T>
LogWeight log_vandermonde_impl(const std::vector<T>& x) {
  double lg = 0.0;
  int sign = +1;
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = i + 1; j < x.size(); ++j) {
      const double d = static_cast<double>(x[j]) - static_cast<double>(x[i]);
      if (d == 0.0) return LogWeight::zero();
      if (d < 0.0) sign = -sign;
      lg += std::log(std::fabs(d));
    }
  return LogWeight::from_log(lg, sign);
}

}  // namespace

LogWeight log_vandermonde(const std::vector<double>& x) { return log_vandermonde_impl(x); }
LogWeight log_vandermonde(const std::vector<long long>& x) { return log_vandermonde_impl(x); }

LogWeight alternant_log_det(const std::vector<double>& x, const std::vector<long long>& exps) {
  const auto n = static_cast<Eigen::Index>(x.size());
  if (static_cast<size_t>(n) != exps.size())
    throw std::invalid_argument("alternant_log_det: size mismatch");
  Eigen::MatrixXd le(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double xi = x[static_cast<size_t>(i)];
      const long long e = exps[static_cast<size_t>(j)];
      if (xi == 0.0)
        le(i, j) = (e == 0) ? 0.0 : -std::numeric_limits<double>::infinity();
      else
        le(i, j) = static_cast<double>(e) * std::log(xi);
    }
  return log_scaled_det(le);
}

// ---------------------------------------------------------------------------
// Tableau branch: s_lambda(x) as the sum over semistandard tableaux,
// organized as branching over Gelfand-Tsetlin rows,
//   s_lambda(x_1..x_k) = sum_{mu interlaces lambda} s_mu(x_1..x_{k-1}) x_k^{|lambda|-|mu|}.
// All terms are nonnegative for x >= 0. Coordinates are scaled by max(x)
// so every monomial lies in [0,1]; the scale re-enters in log space.
// ---------------------------------------------------------------------------

namespace {

constexpr int kMaxGtParts = 6;
constexpr long long kMaxGtCoordinate = 1000;

// Pack (level, parts) into a 64-bit key; parts < 1024, level <= 6.
std::uint64_t pack_key(int level, const long long* parts) {
  std::uint64_t k = static_cast<std::uint64_t>(level);
  for (int i = 0; i < level; ++i) k = (k << 10) | static_cast<std::uint64_t>(parts[i]);
  return k;
}

}  // namespace

struct SchurEvaluator::Impl {
  std::vector<double> u;  // x / scale, ascending
  double scale = 0.0;
  mutable std::unordered_map<std::uint64_t, double> memo;

  // s_mu(u_1..u_level) in scaled units; mu given as non-increasing parts.
  double gt(int level, const long long* mu) const {
    if (level == 1) return std::pow(u[0], static_cast<double>(mu[0]));
    const std::uint64_t key = pack_key(level, mu);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    long long tot = 0;
    for (int i = 0; i < level; ++i) tot += mu[i];

    const double uk = u[static_cast<size_t>(level - 1)];
    long long nu[kMaxGtParts];
    for (int i = 0; i < level - 1; ++i) nu[i] = mu[i + 1];  // lower interlacing bound

    double acc = 0.0;
    for (;;) {
      long long nu_tot = 0;
      for (int i = 0; i < level - 1; ++i) nu_tot += nu[i];
      acc += gt(level - 1, nu) * std::pow(uk, static_cast<double>(tot - nu_tot));
      // odometer over nu_i in [mu_{i+1}, mu_i]
      int i = level - 2;
      while (i >= 0) {
        if (nu[i] < mu[i]) {
          ++nu[i];
          break;
        }
        nu[i] = mu[i + 1];
        --i;
      }
      if (i < 0) break;
    }
    memo.emplace(key, acc);
    return acc;
  }
};

SchurEvaluator::SchurEvaluator(const ChamberPointC& x) : impl_(new Impl) {
  impl_->u = x.coords();
  impl_->scale = x.max();
  if (x.size() > kMaxGtParts)
    throw std::invalid_argument("SchurEvaluator: N too large for tableau branching");
  if (impl_->scale > 0.0)
    for (double& c : impl_->u) c /= impl_->scale;
}

SchurEvaluator::~SchurEvaluator() = default;
SchurEvaluator::SchurEvaluator(SchurEvaluator&&) noexcept = default;
SchurEvaluator& SchurEvaluator::operator=(SchurEvaluator&&) noexcept = default;

LogWeight SchurEvaluator::operator()(const ChamberPointD& y) const {
  const int n = static_cast<int>(impl_->u.size());
  if (y.size() != n) throw std::invalid_argument("SchurEvaluator: dimension mismatch");
  const PartitionN lambda = chamber_to_partition(y);
  if (lambda[0] > kMaxGtCoordinate)
    throw std::invalid_argument("SchurEvaluator: partition part exceeds supported range");
  if (impl_->scale == 0.0)
    return lambda.weight() == 0 ? LogWeight::one() : LogWeight::zero();
  long long mu[kMaxGtParts];
  for (int i = 0; i < n; ++i) mu[i] = lambda[i];
  const double v = impl_->gt(n, mu);
  if (v <= 0.0) return LogWeight::zero();
  return LogWeight::from_log(std::log(v) +
                             static_cast<double>(lambda.weight()) * std::log(impl_->scale));
}

bool needs_boundary_branch(const ChamberPointC& x) {
  if (x.size() == 1) return false;
  if (x.min_gap() < boundary_gap_threshold(x)) return true;
  const double scale = std::max(1.0, x.max());
  std::vector<double> u = x.coords();
  for (double& c : u) c /= scale;
  return log_vandermonde(u).log_abs < std::log(1e-6);
}

LogWeight schur_eval_log(const ChamberPointD& y, const ChamberPointC& x) {
  if (y.size() != x.size()) throw std::invalid_argument("schur_eval: dimension mismatch");
  if (x.size() == 1) {
    if (x[0] == 0.0) return y[0] == 0 ? LogWeight::one() : LogWeight::zero();
    return LogWeight::from_log(static_cast<double>(y[0]) * std::log(x[0]));
  }
  if (needs_boundary_branch(x)) {
    SchurEvaluator ev(x);
    return ev(y);
  }
  return alternant_log_det(x.coords(), y.coords()) / log_vandermonde(x.coords());
}

double schur_eval(const ChamberPointD& y, const ChamberPointC& x) {
  return schur_eval_log(y, x).value();
}

}  // namespace gateways
