#include <doctest.h>

#include <cmath>
#include <random>

#include "gateways/weyl.hpp"
#include "support/oracles.hpp"

using namespace gateways;

TEST_CASE("chamber/partition types validate their invariants") {
  CHECK_THROWS_AS(ChamberPointC({2.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ChamberPointC({-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ChamberPointD({1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(ChamberPointD({3, 2}), std::invalid_argument);
  CHECK_THROWS_AS(PartitionN({1, 2}), std::invalid_argument);
  CHECK(ChamberPointC({1.0, 1.0, 2.0}).is_interior() == false);
  CHECK(ChamberPointC({0.0, 1.0}).is_interior() == true);
  CHECK(ChamberPointC::parse("0.5,1,2.25").coords() == std::vector<double>{0.5, 1.0, 2.25});
  CHECK(ChamberPointD::parse("0,2,5").str() == "0,2,5");
}

TEST_CASE("partition <-> chamber bijection") {
  CHECK(partition_to_chamber(PartitionN({0, 0, 0})).coords() == std::vector<long long>{0, 1, 2});
  CHECK(partition_to_chamber(PartitionN({3, 1})).coords() == std::vector<long long>{1, 4});
  std::mt19937_64 eng(42);
  for (int it = 0; it < 1000; ++it) {
    const int n = 1 + static_cast<int>(eng() % 5);
    std::vector<long long> parts(static_cast<size_t>(n));
    for (auto& p : parts) p = static_cast<long long>(eng() % 12);
    std::sort(parts.rbegin(), parts.rend());
    const PartitionN lambda(parts);
    CHECK(chamber_to_partition(partition_to_chamber(lambda)).parts() == lambda.parts());
  }
}

TEST_CASE("log_vandermonde") {
  CHECK(log_vandermonde(std::vector<double>{3.7}).value() == doctest::Approx(1.0));
  CHECK(log_vandermonde(std::vector<double>{1.0, 2.0, 4.0}).value() == doctest::Approx(6.0));
  CHECK(log_vandermonde(std::vector<double>{1.0, 1.0, 4.0}).is_zero());
  // strictly increasing integer points always have Delta >= 1
  std::mt19937_64 eng(7);
  for (int it = 0; it < 200; ++it) {
    std::vector<long long> y{static_cast<long long>(eng() % 5)};
    for (int i = 1; i < 4; ++i) y.push_back(y.back() + 1 + static_cast<long long>(eng() % 6));
    CHECK(log_vandermonde(y).value() >= 1.0 - 1e-12);
  }
}

TEST_CASE("schur evaluation basics") {
  // N = 1: plain power
  CHECK(schur_eval(ChamberPointD({5}), ChamberPointC({1.3})) ==
        doctest::Approx(std::pow(1.3, 5)).epsilon(1e-13));
  // empty partition: identically one
  for (double a : {0.0, 0.3, 2.0})
    CHECK(schur_eval(ChamberPointD({0, 1}), ChamberPointC({a, a + 0.7})) ==
          doctest::Approx(1.0).epsilon(1e-12));
  // y=(0,2) is lambda=(1,0): s_(1)(a,a) = 2a
  for (double a : {0.4, 1.0, 3.0})
    CHECK(schur_eval(ChamberPointD({0, 2}), ChamberPointC({a, a})) ==
          doctest::Approx(2.0 * a).epsilon(1e-12));
}

TEST_CASE("tableau branch equals explicit SSYT enumeration") {
  std::mt19937_64 eng(11);
  for (int it = 0; it < 60; ++it) {
    const int n = 2 + static_cast<int>(eng() % 2);
    std::vector<long long> parts(static_cast<size_t>(n));
    for (auto& p : parts) p = static_cast<long long>(eng() % 4);
    std::sort(parts.rbegin(), parts.rend());
    std::vector<double> x;
    double cur = 0.1 * (1 + eng() % 10);
    for (int i = 0; i < n; ++i) {
      x.push_back(cur);
      cur += (it % 3 == 0) ? 0.0 : 0.5;  // exercise ties as well
    }
    const ChamberPointC xc(x);
    const ChamberPointD y = partition_to_chamber(PartitionN(parts));
    SchurEvaluator ev(xc);
    const double got = ev(y).value();
    const double want = oracles::ssyt_sum(parts, x);
    CHECK(got == doctest::Approx(want).epsilon(1e-11));
  }
}

TEST_CASE("alternant branch and tableau branch agree across gap scales") {
  // one close pair at the prescribed min-gap, remaining coordinates well
  // separated (the alternant cannot deliver 1e-9 for multi-clusters)
  std::mt19937_64 eng(23);
  for (double gap : {1e-3, 1e-2, 1.0})
    for (int it = 0; it < 40; ++it) {
      const int n = 2 + static_cast<int>(eng() % 2);
      std::vector<long long> parts(static_cast<size_t>(n));
      for (auto& p : parts) p = static_cast<long long>(eng() % 4);
      std::sort(parts.rbegin(), parts.rend());
      if (parts[0] + parts[static_cast<size_t>(n) - 1] > 6) continue;
      std::vector<double> x;
      double cur = 0.2 + 0.1 * (eng() % 8);
      for (int i = 0; i < n; ++i) {
        x.push_back(cur);
        cur += (i == 0) ? gap : 0.7 + 0.3 * std::generate_canonical<double, 40>(eng);
      }
      const ChamberPointC xc(x);
      const ChamberPointD y = partition_to_chamber(PartitionN(parts));
      const double alternant =
          (alternant_log_det(xc.coords(), y.coords()) / log_vandermonde(xc.coords())).value();
      SchurEvaluator ev(xc);
      const double tableau = ev(y).value();
      CHECK(alternant ==
            doctest::Approx(tableau).epsilon(1e-9).scale(std::fabs(tableau)));
    }
}

TEST_CASE("ordered alternants are nonnegative (total positivity)") {
  std::mt19937_64 eng(31);
  for (int it = 0; it < 200; ++it) {
    const int n = 2 + static_cast<int>(eng() % 3);
    std::vector<double> x;
    double cur = 0.05 * (1 + eng() % 5);
    for (int i = 0; i < n; ++i) {
      x.push_back(cur);
      cur += 0.05 + 0.4 * std::generate_canonical<double, 40>(eng);
    }
    std::vector<long long> y{static_cast<long long>(eng() % 3)};
    for (int i = 1; i < n; ++i) y.push_back(y.back() + 1 + static_cast<long long>(eng() % 4));
    const LogWeight det = alternant_log_det(x, y);
    CHECK(det.sign >= 0);
  }
}

TEST_CASE("schur_eval is continuous across the branch switch") {
  // just above and below the switch (single close pair), the routed value
  // must agree with the other branch forced at the same point
  const ChamberPointD y({1, 3, 4});
  for (double base : {0.5, 1.8})
    for (double frac : {0.9, 1.1}) {
      const double thr = 1e-4;
      const ChamberPointC x({base, base + frac * thr, base + 1.3});
      const double routed = schur_eval(y, x);
      const double alternant =
          (alternant_log_det(x.coords(), y.coords()) / log_vandermonde(x.coords())).value();
      SchurEvaluator ev(x);
      const double tableau = ev(y).value();
      CHECK(routed == doctest::Approx(tableau).epsilon(1e-9));
      CHECK(routed == doctest::Approx(alternant).epsilon(1e-9));
    }
}

TEST_CASE("chamber shell iteration covers exactly the binomial count") {
  long long count = 0;
  for_each_chamber_shell(3, 6, [&](const std::vector<long long>& y) {
    CHECK(y[2] == 6);
    CHECK(y[0] < y[1]);
    CHECK(y[1] < y[2]);
    ++count;
  });
  CHECK(count == 15);  // C(6, 2)
  count = 0;
  for_each_chamber_point(2, 8, [&](const std::vector<long long>&) { ++count; });
  CHECK(count == 36);  // C(9, 2)
}
