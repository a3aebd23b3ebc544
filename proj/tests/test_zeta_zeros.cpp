#include <cmath>

#include "doctest.h"
#include "eta/zeta_zeros.hpp"
#include "oracle/oracle.hpp"

using namespace eta;

TEST_CASE("critical zeros on (10, 50)") {
  // Ten ordinates lie in (10, 50); the sixth is 37.586, so (10, 40) holds six.
  CHECK(find_critical_zeros(10.0, 40.0).size() == 6);
  const auto zeros = find_critical_zeros(10.0, 50.0);
  REQUIRE(zeros.size() == 10);
  CHECK(zeros[0].gamma() == doctest::Approx(14.134725).epsilon(1e-7));
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    CHECK(zeros[i].beta() == 0.5);
    CHECK(zeros[i].kind == ZeroKind::critical);
    CHECK(zeros[i].refine_residual < 1e-10);
    if (i > 0) CHECK(zeros[i].gamma() > zeros[i - 1].gamma());
  }
}

TEST_CASE("first 100 critical zeros against the oracle") {
  const auto zeros = find_critical_zeros(10.0, 237.0);
  REQUIRE(zeros.size() == 100);
  double worst = 0;
  for (int n = 0; n < 100; ++n)
    worst = std::max(worst, std::abs(zeros[n].gamma() - static_cast<double>(oracle_real(kCriticalZeroOracle[n]))));
  CHECK(worst < 1e-8);
}

TEST_CASE("empty critical window") {
  const auto zeros = find_critical_zeros(15.0, 20.0);
  CHECK(zeros.empty());
}

TEST_CASE("parity of Im eta at critical zeros") {
  const auto zeros = find_critical_zeros(10.0, 100.0);
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    const double im = eta_pack(zeros[i].location).eta.imag();
    CHECK_MESSAGE((i % 2 == 0 ? im < 0 : im > 0), "zero " << i + 1);
  }
}

TEST_CASE("finer scan yields the same catalog") {
  CriticalZeroOptions fine;
  fine.step = 0.025;
  const auto a = find_critical_zeros(100.0, 200.0);
  const auto b = find_critical_zeros(100.0, 200.0, fine);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i].gamma() - b[i].gamma()) < 1e-9);
}

TEST_CASE("critical zero preconditions") {
  CHECK_THROWS_AS(find_critical_zeros(5.0, 20.0), Error);
  CHECK_THROWS_AS(find_critical_zeros(20.0, 10.0), Error);
  CHECK_THROWS_AS(find_critical_zeros(20.0, 6000.0), Error);
}

TEST_CASE("zeta' zero in (1/2, 8) x (10, 30)") {
  const auto report = find_derivative_zeros_report({0.5, 8.0, 10.0, 30.0}, 1);
  REQUIRE(report.zeros.size() == 1);
  CHECK(report.contour_count == 1);
  const Complex z = report.zeros[0].location;
  CHECK(std::abs(z - oracle_complex(kZetaPrimeZeroOracle[0])) < 1e-10);
  CHECK(report.zeros[0].refine_residual < 1e-10);
}

TEST_CASE("first five zeta' zeros against the oracle") {
  const auto zeros = find_derivative_zeros({kDeriv1SigmaMin, kDeriv1SigmaMax, 10.0, 50.0}, 1);
  REQUIRE(zeros.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(zeros[i].location - oracle_complex(kZetaPrimeZeroOracle[i])) < 1e-10);
    CHECK(zeros[i].beta() > 0.5);
    CHECK(zeros[i].index == i + 1);
  }
}

TEST_CASE("zeta'' zeros mostly lie to the right of their neighbours among zeta' zeros") {
  const auto d2 = find_derivative_zeros_report({0.5, 9.0, 100.0, 150.0}, 2);
  CHECK(static_cast<int>(d2.zeros.size()) == d2.contour_count);
  const auto d1 = find_derivative_zeros({0.5, 9.0, 100.0, 150.0}, 1);
  REQUIRE(!d2.zeros.empty());
  for (const auto& z : d2.zeros) CHECK(z.refine_residual < 1e-10);
  // Nearest zeta' zero in ordinate as a proxy partner; the Spira map itself is
  // tested with the level-curve code.
  int right = 0;
  for (const auto& z : d2.zeros) {
    const ZeroRecord* best = nullptr;
    for (const auto& w : d1)
      if (!best || std::abs(w.gamma() - z.gamma()) < std::abs(best->gamma() - z.gamma())) best = &w;
    if (best && z.beta() > best->beta()) ++right;
  }
  CHECK(2 * right > static_cast<int>(d2.zeros.size()));
}

TEST_CASE("argument principle count equals list length") {
  for (SearchBox b : {SearchBox{0.3, 5.0, 200.0, 230.0}, SearchBox{0.6, 3.0, 400.0, 407.0}}) {
    const auto report = find_derivative_zeros_report(b, 1);
    CHECK(static_cast<int>(report.zeros.size()) == report.contour_count);
    CHECK(argument_principle_count(b, 1) == report.contour_count);
    for (const auto& z : report.zeros) CHECK(b.contains(z.location));
  }
}

TEST_CASE("derivative zero preconditions") {
  CHECK_THROWS_AS(find_derivative_zeros({1.0, 0.5, 10.0, 20.0}, 1), Error);
  CHECK_THROWS_AS(find_derivative_zeros({0.5, 3.0, 2.0, 5.0}, 1), Error);
  CHECK_THROWS_AS(find_derivative_zeros({0.5, 3.0, 10.0, 20.0}, 3), Error);
}

TEST_CASE("real zeros of zeta'") {
  const auto a = real_negative_zeros(50);
  REQUIRE(a.size() == 50);
  for (int n = 1; n <= 50; ++n) {
    CHECK(a[n - 1] > 2.0 * n);
    CHECK(a[n - 1] < 2.0 * n + 2.0);
    if (n > 1) CHECK(a[n - 1] > a[n - 2]);
  }
  for (int n = 0; n < 5; ++n) CHECK(std::abs(a[n] - static_cast<double>(oracle_real(kRealZeroOracle[n]))) < 1e-10);
  CHECK(std::abs(a[49] - (102.0 - 1.0 / std::log(50.0))) < 0.2);
  CHECK_THROWS_AS(real_negative_zeros(0), Error);
}

TEST_CASE("window census on (10, 1000)") {
  const WindowCensus c = window_census(10.0, 1000.0);
  CHECK(std::abs(c.critical - c.critical_main_term) < 10);
  CHECK(std::abs(c.deriv1 - c.deriv1_main_term) < 10);
  const WindowCensus empty = window_census(20.0, 20.0);
  CHECK(empty.critical == 0);
  CHECK(empty.deriv1 == 0);
}
