#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gateways {

// Signed magnitude stored in log space: value = sign * exp(log_abs).
// sign == 0 encodes an exact zero. Keeps products like Gamma(y+beta),
// x^y and Vandermonde factors representable far beyond double range.
struct LogWeight {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;

  static LogWeight zero() { return {}; }
  static LogWeight one() { return {0.0, +1}; }

  static LogWeight from_value(double v) {
    if (v == 0.0 || std::isnan(v)) return zero();
    return {std::log(std::fabs(v)), v > 0 ? +1 : -1};
  }
  static LogWeight from_log(double log_v, int s = +1) {
    if (s == 0) return zero();
    return {log_v, s > 0 ? +1 : -1};
  }

  bool is_zero() const { return sign == 0; }
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
  double log_value() const {
    if (sign <= 0) throw std::domain_error("LogWeight: log of non-positive weight");
    return log_abs;
  }

  LogWeight operator*(const LogWeight& o) const {
    if (sign == 0 || o.sign == 0) return zero();
    return {log_abs + o.log_abs, sign * o.sign};
  }
  LogWeight operator/(const LogWeight& o) const {
    if (o.sign == 0) throw std::domain_error("LogWeight: division by zero weight");
    if (sign == 0) return zero();
    return {log_abs - o.log_abs, sign * o.sign};
  }
  LogWeight& operator*=(const LogWeight& o) { return *this = *this * o; }
  LogWeight& operator/=(const LogWeight& o) { return *this = *this / o; }
};

}  // namespace gateways
