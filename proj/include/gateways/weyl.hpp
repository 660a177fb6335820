#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gateways/log_weight.hpp"

namespace gateways {

// Ordered vector in the continuous non-negative chamber: 0 <= x_1 <= ... <= x_N.
// Interior means pairwise distinct coordinates (x_1 may still be 0).
class ChamberPointC {
 public:
  ChamberPointC() = default;
  explicit ChamberPointC(std::vector<double> coords);

  int size() const { return static_cast<int>(v_.size()); }
  double operator[](int i) const { return v_[static_cast<size_t>(i)]; }
  const std::vector<double>& coords() const { return v_; }
  double max() const { return v_.empty() ? 0.0 : v_.back(); }

  bool is_interior() const;
  double min_gap() const;  // +inf for N == 1

  std::string str() const;
  static ChamberPointC parse(const std::string& csv);

 private:
  std::vector<double> v_;
};

// Strictly increasing vector of non-negative integers: x_1 < x_2 < ... < x_N.
class ChamberPointD {
 public:
  ChamberPointD() = default;
  explicit ChamberPointD(std::vector<long long> coords);

  int size() const { return static_cast<int>(v_.size()); }
  long long operator[](int i) const { return v_[static_cast<size_t>(i)]; }
  const std::vector<long long>& coords() const { return v_; }
  long long max() const { return v_.empty() ? 0 : v_.back(); }

  std::string str() const;
  static ChamberPointD parse(const std::string& csv);

 private:
  std::vector<long long> v_;
};

// Partition with at most N rows: lambda_1 >= ... >= lambda_N >= 0
// (trailing zeros kept so the length is always N).
class PartitionN {
 public:
  PartitionN() = default;
  explicit PartitionN(std::vector<long long> parts);

  int size() const { return static_cast<int>(p_.size()); }
  long long operator[](int i) const { return p_[static_cast<size_t>(i)]; }
  const std::vector<long long>& parts() const { return p_; }
  long long weight() const;  // |lambda|

  std::string str() const;
  static PartitionN parse(const std::string& csv);

 private:
  std::vector<long long> p_;
};

// Bijection y_i = lambda_{N-i+1} + i - 1 and its inverse; both exact.
ChamberPointD partition_to_chamber(const PartitionN& lambda);
PartitionN chamber_to_partition(const ChamberPointD& y);

// Visit every strictly increasing tuple of n non-negative integers whose
// maximum coordinate equals `top` (a shell of the discrete chamber), resp.
// every tuple with maximum coordinate <= cap. The callback sees a scratch
// vector it must not retain.
void for_each_chamber_shell(int n, long long top,
                            const std::function<void(const std::vector<long long>&)>& fn);
void for_each_chamber_point(int n, long long cap,
                            const std::function<void(const std::vector<long long>&)>& fn);

// Vandermonde product prod_{i<j} (x_j - x_i) in log space. Zero sign iff
// two coordinates coincide.
LogWeight log_vandermonde(const std::vector<double>& x);
LogWeight log_vandermonde(const std::vector<long long>& x);

// det(x_i^{e_j}) with per-row scaling pulled out before the LU factorization.
LogWeight alternant_log_det(const std::vector<double>& x, const std::vector<long long>& exps);

// Chamber points switch to the stable boundary branch of the Schur
// evaluation below this gap.
inline double boundary_gap_threshold(const ChamberPointC& x) {
  return 1e-4 * std::max(1.0, x.max());
}

// True when the alternant ratio cannot be trusted at x: either some gap is
// below the threshold above, or the Vandermonde of the rescaled coordinates
// is so small (multiple near-clusters) that the determinant would lose more
// than ~6 digits.
bool needs_boundary_branch(const ChamberPointC& x);

// s_y(x) = det(x_i^{y_j}) / det(x_i^{j-1}), extended continuously to
// coincident x. Generic x uses the alternant ratio; near-coincident or
// boundary x uses the semistandard-tableau monomial expansion (evaluated
// by branching over Gelfand-Tsetlin patterns, so only nonnegative terms
// are ever added). Both branches agree on their overlap; tested.
LogWeight schur_eval_log(const ChamberPointD& y, const ChamberPointC& x);
double schur_eval(const ChamberPointD& y, const ChamberPointC& x);

// Evaluator bound to a fixed x that memoizes the tableau branching across
// calls; the cheap way to sweep many y at one (near-)boundary x.
class SchurEvaluator {
 public:
  explicit SchurEvaluator(const ChamberPointC& x);
  ~SchurEvaluator();
  SchurEvaluator(SchurEvaluator&&) noexcept;
  SchurEvaluator& operator=(SchurEvaluator&&) noexcept;

  LogWeight operator()(const ChamberPointD& y) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gateways
