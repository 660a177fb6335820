#include "gateways/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace gateways {

namespace {

// tanh-sinh handles the z^{beta-1} endpoint singularities of the gamma-type
// integrands at machine accuracy; a shared integrator per thread.
boost::math::quadrature::tanh_sinh<double>& integrator() {
  thread_local boost::math::quadrature::tanh_sinh<double> q(15);
  return q;
}

// Push the cutoff right until the measured decay certifies the tail.
double find_cutoff(const std::function<double(double)>& f, double upper_hint, double tail_tol,
                   double* tail_bound) {
  double hi = std::max(upper_hint, 1.0);
  const int max_grow = 60;
  for (int i = 0; i < max_grow; ++i) {
    const double step = std::max(hi / 8.0, 0.5);
    const double f0 = std::fabs(f(hi));
    const double f1 = std::fabs(f(hi + step));
    const double f2 = std::fabs(f(hi + 2.0 * step));
    const double fmax = std::max({f0, f1, f2});
    if (fmax == 0.0) {
      *tail_bound = 0.0;
      return hi;
    }
    const double r = (f0 > 0.0) ? std::max(f1 / f0, (f1 > 0.0) ? f2 / f1 : 0.0) : 1.0;
    if (r < 0.9) {
      // geometric majorant on blocks of width `step`
      const double bound = fmax * step / (1.0 - r);
      if (bound < tail_tol) {
        *tail_bound = bound;
        return hi + 2.0 * step;
      }
    }
    hi *= 1.6;
  }
  throw NumericalBudgetError("integrate_gamma_envelope: tail refuses to decay below tolerance");
}

}  // namespace

QuadResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                              double abs_tol) {
  if (!(b > a)) return {0.0, 0.0};
  double err = 0.0, l1 = 0.0;
  // tanh-sinh converges double-exponentially; terminating around 1e-12
  // already lands near machine accuracy without refining to the last level
  const double term = std::min(std::max(abs_tol * 0.1, 1e-12), 1e-9);
  const double v = integrator().integrate(f, a, b, term, &err, &l1);
  if (!std::isfinite(v))
    throw NumericalBudgetError("integrate_interval: non-finite quadrature result");
  // err is the relative difference of the last two refinements; convert to
  // an absolute estimate against the L1 mass.
  const double abs_err = std::isfinite(err) ? err * std::max(l1, std::fabs(v)) : 0.0;
  return {v, abs_err};
}

QuadResult integrate_gamma_envelope(const std::function<double(double)>& f, double upper_hint,
                                    double abs_tol) {
  double tail = 0.0;
  const double hi = find_cutoff(f, upper_hint, abs_tol / 4.0, &tail);
  QuadResult q = integrate_interval(f, 0.0, hi, abs_tol);
  q.error += tail;
  return q;
}

QuadResult integrate_chamber2(const std::function<double(double, double)>& f, double upper_hint,
                              double abs_tol) {
  double inner_err_acc = 0.0;
  const double inner_tol = abs_tol / std::max(4.0 * upper_hint, 8.0);
  auto outer = [&](double x2) {
    if (x2 <= 0.0) return 0.0;
    QuadResult in = integrate_interval([&](double x1) { return f(x1, x2); }, 0.0, x2, inner_tol);
    inner_err_acc = std::max(inner_err_acc, in.error);
    return in.value;
  };
  double tail = 0.0;
  const double hi = find_cutoff(outer, upper_hint, abs_tol / 4.0, &tail);
  QuadResult q = integrate_interval(outer, 0.0, hi, abs_tol);
  q.error += tail + inner_err_acc * hi;
  return q;
}

}  // namespace gateways
