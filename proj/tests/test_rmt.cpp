#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "eta/rmt.hpp"
#include "oracle/oracle.hpp"

using namespace eta;

namespace {

std::vector<Complex> by_argument(std::vector<Complex> z) {
  std::sort(z.begin(), z.end(), [](Complex a, Complex b) {
    auto key = [](Complex c) { return std::fmod(std::arg(c) + kTwoPi, kTwoPi); };
    return key(a) < key(b);
  });
  return z;
}

// Closest-point matching of two root sets of equal size.
double max_matching_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double worst = 0;
  for (const Complex& x : a) {
    double best = 1e300;
    for (const Complex& y : b) best = std::min(best, std::abs(x - y));
    worst = std::max(worst, best);
  }
  return worst;
}

Matrix real_orthogonal(int n, std::uint64_t seed) {
  const CounterRng rng(seed, 9);
  Matrix q{n, std::vector<Complex>(static_cast<std::size_t>(n * n))};
  for (int i = 0; i < n * n; ++i) q.a[i] = rng.complex_normal(i).real();
  for (int j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < j; ++k) {
        double r = 0;
        for (int i = 0; i < n; ++i) r += q(i, k).real() * q(i, j).real();
        for (int i = 0; i < n; ++i) q(i, j) -= r * q(i, k);
      }
    double norm = 0;
    for (int i = 0; i < n; ++i) norm += std::norm(q(i, j));
    for (int i = 0; i < n; ++i) q(i, j) /= std::sqrt(norm);
  }
  return q;
}

std::vector<int> type_multiset(const RMTClassification& c) {
  std::vector<int> t;
  for (const auto& z : c.zeros) t.push_back(static_cast<int>(z.type_class));
  std::sort(t.begin(), t.end());
  return t;
}

}  // namespace

TEST_CASE("counter-based generator is a pure function of (seed, stream, index)") {
  const CounterRng a(42), b(42), c(43), d(42, 1);
  CHECK(a.bits(0) == b.bits(0));
  CHECK(a.bits(1000) == b.bits(1000));
  CHECK(a.bits(0) != c.bits(0));
  CHECK(a.bits(0) != d.bits(0));
  double sum_re = 0, sum_abs2 = 0;
  const int N = 100000;
  for (int i = 0; i < N; ++i) {
    const Complex z = a.complex_normal(i);
    sum_re += z.real();
    sum_abs2 += std::norm(z);
  }
  CHECK(std::abs(sum_re / N) < 0.01);
  CHECK(std::abs(sum_abs2 / N - 1.0) < 0.02);
}

TEST_CASE("Haar sampler returns a unitary matrix") {
  for (int n : {3, 10, 32}) {
    const Matrix q = haar_unitary(n, 7);
    double worst = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Complex g = 0;
        for (int k = 0; k < n; ++k) g += std::conj(q(k, i)) * q(k, j);
        worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
      }
    CHECK(worst < 1e-13);
    CHECK(haar_unitary(n, 7).a == q.a);
  }
}

TEST_CASE("characteristic polynomial of a diagonal matrix") {
  const std::vector<double> th{0.1, 1.3, 2.2, 4.0, 5.5};
  const int n = 5;
  Matrix D{n, std::vector<Complex>(n * n, 0.0)};
  for (int k = 0; k < n; ++k) D(k, k) = std::polar(1.0, th[k]);
  const auto c = characteristic_polynomial(D);
  REQUIRE(c.size() == 6);
  CHECK(std::abs(c[5] - Complex(-1.0, 0.0)) < 1e-15);
  // c_0 = det A
  CHECK(std::abs(c[0] - std::polar(1.0, std::accumulate(th.begin(), th.end(), 0.0))) < 1e-14);
  const auto s = from_eigenangles(th);
  for (int k = 0; k <= n; ++k) CHECK(std::abs(c[k] - s.char_coeffs[k]) < 1e-14);
  const auto roots = polynomial_roots(c);
  for (double a : th) {
    double best = 1e9;
    for (const Complex& r : roots) best = std::min(best, std::abs(r - std::polar(1.0, a)));
    CHECK(best < 1e-13);
  }
}

TEST_CASE("derivative roots agree with the multiprecision oracle") {
  SUBCASE("well separated") {
    const auto s = from_eigenangles({std::begin(kFiveAngles), std::end(kFiveAngles)});
    const auto got = by_argument(s.deriv_roots);
    REQUIRE(got.size() == std::size(kFiveDerivRoots));
    for (std::size_t j = 0; j < got.size(); ++j) CHECK(std::abs(got[j] - oracle_complex(kFiveDerivRoots[j])) < 1e-13);
  }
  SUBCASE("near-degenerate pair") {
    const auto s = from_eigenangles({std::begin(kNearPairAngles), std::end(kNearPairAngles)});
    const auto got = by_argument(s.deriv_roots);
    REQUIRE(got.size() == std::size(kNearPairDerivRoots));
    for (std::size_t j = 0; j < got.size(); ++j)
      CHECK(std::abs(got[j] - oracle_complex(kNearPairDerivRoots[j])) < 1e-12);
  }
}

TEST_CASE("diagonal input keeps the prescribed eigenangles") {
  std::vector<double> th{5.5, 0.1, 2.2, 4.0, 1.3};
  const auto s = from_eigenangles(th);
  std::sort(th.begin(), th.end());
  CHECK(s.eigenangles == th);
  CHECK(s.deriv_roots.size() == 4);
  CHECK_THROWS_AS(from_eigenangles({1.0}), Error);
  CHECK_THROWS_AS(from_eigenangles({1.0, 1.0 + 1e-10, 3.0}), Error);
}

TEST_CASE("sampled matrices satisfy the structural invariants") {
  for (int n : {3, 4, 7, 22, 32}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto s = sample_cue(n, seed);
      CHECK(s.n == n);
      CHECK(s.eigenangles.size() == std::size_t(n));
      CHECK(std::is_sorted(s.eigenangles.begin(), s.eigenangles.end()));
      CHECK(s.eigenangles.front() >= 0.0);
      CHECK(s.eigenangles.back() < kTwoPi);
      CHECK(s.max_unit_defect < 1e-8);
      CHECK(s.det_defect < 1e-9);
      CHECK(std::abs(std::abs(s.det_phase) - 1.0) < 1e-12);
      REQUIRE(s.deriv_roots.size() == std::size_t(n - 1));
      for (const Complex& m : s.deriv_roots) CHECK(std::abs(m) <= 1.0 + 1e-10);
      const auto again = sample_cue(n, seed);
      CHECK(again.eigenangles == s.eigenangles);
      CHECK(again.deriv_roots == s.deriv_roots);
    }
  }
  CHECK_THROWS_AS(sample_cue(1, 0), Error);
}

TEST_CASE("eta_A on the unit circle") {
  for (int n : {3, 6, 11, 22}) {
    const auto s = sample_cue(n, 100 + n);
    for (double th : s.eigenangles) {
      const Complex z = std::polar(1.0, th);
      CHECK(std::abs(eta_A(z, s).real()) < 1e-8);
      CHECK(std::abs(lambda_A(z, s)) < 1e-10);
    }
    const CounterRng rng(n, 3);
    for (int i = 0; i < 20; ++i) {
      const double phi = kTwoPi * rng.uniform(i);
      if (n % 2 && std::abs(wrap_angle(phi - s.cut_angle)) < 1e-3) continue;
      const Complex z = std::polar(1.0, phi);
      const Complex L = lambda_A(z, s);
      CHECK(std::abs(L.imag()) < 1e-10 * std::max(1.0, std::abs(L)));
      // z Lambda' from a central difference of the product form, independent of p_A'
      const double h = 1e-5;
      const Complex dL = (lambda_A(z * (1.0 + h), s) - lambda_A(z * (1.0 - h), s)) / (2.0 * h);
      CHECK(std::abs(dL.real()) < 1e-6 * std::max(1.0, std::abs(dL)));
      const Complex e = eta_A(z, s);
      CHECK(std::abs(e - 0.5 * n * L - dL) < 1e-6 * std::max(1.0, std::abs(e)));
    }
  }
}

TEST_CASE("real orthogonal matrices give conjugation-symmetric data") {
  const auto s = from_matrix(real_orthogonal(8, 5));
  for (const Complex& c : s.char_coeffs) CHECK(std::abs(c.imag()) < 1e-12);
  std::vector<Complex> conj_roots;
  for (const Complex& m : s.deriv_roots) conj_roots.push_back(std::conj(m));
  CHECK(max_matching_distance(s.deriv_roots, conj_roots) < 1e-12);
  for (Complex z : {Complex(0.3, 0.4), Complex(-0.5, 0.2), Complex(0.1, -0.7)})
    CHECK(std::abs(std::abs(eta_A(z, s)) - std::abs(eta_A(std::conj(z), s))) < 1e-10 * std::abs(eta_A(z, s)));
}

TEST_CASE("odd n branch cut") {
  const auto s = sample_cue(5, 11);
  CHECK_THROWS_AS(eta_A(std::polar(0.5, s.cut_angle), s), Error);
  CHECK_NOTHROW(eta_A(std::polar(0.5, s.cut_angle + 1e-3), s));
  CHECK_THROWS_AS(eta_A(Complex(0.0, 0.0), s), Error);
  // across the cut eta_A only changes sign
  const Complex a = eta_A(std::polar(0.5, s.cut_angle + 1e-7), s);
  const Complex b = eta_A(std::polar(0.5, s.cut_angle - 1e-7), s);
  CHECK(std::abs(a + b) < 1e-5 * std::abs(a));
}

TEST_CASE("F on the unit circle") {
  for (int n : {3, 8, 22}) {
    const auto s = sample_cue(n, 500 + n);
    double minF = 1e9;
    for (int j = 0; j < 1024; ++j) minF = std::min(minF, F_theta(kTwoPi * j / 1024, s));
    CHECK(minF >= 0.5);
    double total = 0;
    for (int k = 0; k < n; ++k) {
      CHECK(F_theta(s.eigenangles[k], s) == doctest::Approx(0.5 * n).epsilon(1e-10));
      const double a = s.eigenangles[k];
      const double g = ccw_gap(a, s.eigenangles[(k + 1) % n]);
      const double I = adaptive_simpson([&](double th) { return F_theta(th, s); }, a, a + g, 1e-11, 60);
      CHECK(std::abs(I - kPi) < 1e-8);
      total += I;
    }
    CHECK(std::abs(total - n * kPi) < 1e-7);
  }
  UnitarySample degenerate = from_eigenangles({0.0, 2.0, 4.0});
  degenerate.deriv_roots[0] = std::polar(1.0, 1.0);
  CHECK_THROWS_AS(F_theta(1.0, degenerate), Error);
}

TEST_CASE("classification identities for every n from 3 to 32") {
  for (int n = 3; n <= 32; ++n) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const auto s = sample_cue(n, 1000 * n + seed);
      RMTClassification c;
      REQUIRE_NOTHROW(c = classify_sample(s));
      CHECK(c.N2 - c.N0 == 1);
      CHECK(c.N1 + 2 * c.N0 == n - 2);
      CHECK(c.N1 + 2 * c.N2 == n);
      CHECK(c.N0 + c.N1 + c.N2 == n - 1);
      CHECK(c.type2_pairs.size() == std::size_t(c.N2));
      for (int hits : c.eigen_hits) CHECK(hits == 1);
      for (const auto& z : c.zeros) {
        for (const ContourTrace* tr : {&z.green, &z.purple}) {
          CHECK(tr->max_residual < 1e-8);
          if (tr->termination == Termination::crossed_unit_circle) {
            CHECK(std::abs(std::abs(tr->end) - 1.0) < 1e-12);
          } else {
            CHECK(tr->termination == Termination::reached_pole_region);
            CHECK(std::abs(tr->end) < 0.05);
          }
        }
      }
    }
  }
}

TEST_CASE("type-2 pairs are consecutive eigenvalues around their zero") {
  const auto s = sample_cue(22, 77);
  const auto c = classify_sample(s);
  for (const auto& z : c.zeros) {
    if (z.type_class != ZeroType::T2) continue;
    const int a = z.crossings[0], b = z.crossings[1];
    CHECK((b == (a + 1) % 22 || a == (b + 1) % 22));
  }
  for (const auto& p : c.type2_pairs) CHECK(ccw_gap(s.eigenangles[p[0]], s.eigenangles[p[1]]) < kPi);
}

TEST_CASE("moving the branch cut does not change the classification") {
  for (int n : {5, 9, 21}) {
    UnitarySample s = sample_cue(n, 3 * n);
    const auto base = classify_sample(s);
    // bisector of another gap
    s.cut_angle = std::fmod(s.eigenangles[0] + 0.5 * ccw_gap(s.eigenangles[0], s.eigenangles[1]), kTwoPi);
    const auto moved = classify_sample(s);
    CHECK(type_multiset(moved) == type_multiset(base));
    for (std::size_t i = 0; i < base.zeros.size(); ++i) CHECK(moved.zeros[i].type_class == base.zeros[i].type_class);
  }
}

TEST_CASE("rotation covariance") {
  const auto s = sample_cue(12, 9);
  const auto c = classify_sample(s);
  for (double phi : {0.37, 2.0, 4.9}) {
    std::vector<double> rotated;
    for (double a : s.eigenangles) rotated.push_back(a + phi);
    const auto r = from_eigenangles(rotated);
    std::vector<Complex> expected;
    for (const Complex& m : s.deriv_roots) expected.push_back(m * std::polar(1.0, phi));
    CHECK(max_matching_distance(r.deriv_roots, expected) < 1e-12);
    const auto rc = classify_sample(r);
    CHECK(type_multiset(rc) == type_multiset(c));
    for (const auto& z : rc.zeros) {
      // same zero before rotation keeps its type
      const Complex back = z.mu_prime * std::polar(1.0, -phi);
      auto it = std::min_element(c.zeros.begin(), c.zeros.end(), [&](const RMTZero& a, const RMTZero& b) {
        return std::abs(a.mu_prime - back) < std::abs(b.mu_prime - back);
      });
      CHECK(it->type_class == z.type_class);
    }
  }
}

TEST_CASE("sector theorem") {
  SUBCASE("near-degenerate pair") {
    const auto s = from_eigenangles({std::begin(kNearPairAngles), std::end(kNearPairAngles)});
    const auto checks = sector_check(s);
    REQUIRE(checks.size() == 1);
    CHECK(checks[0].lo == 0);
    CHECK(checks[0].hi == 1);
    CHECK(checks[0].gap == doctest::Approx(1e-4).epsilon(1e-9));
    CHECK(checks[0].contains_zero);
  }
  SUBCASE("gaps above the threshold are not checked") {
    const auto s = from_eigenangles({0.0, 1.0, 2.0, 3.0, 4.0, 5.0});
    CHECK(sector_check(s).empty());
  }
  SUBCASE("a missing zero is reported") {
    UnitarySample s = from_eigenangles({std::begin(kNearPairAngles), std::end(kNearPairAngles)});
    s.deriv_roots[0] *= 0.5;
    CHECK_THROWS_AS(sector_check(s), Error);
  }
}

TEST_CASE("a 22 x 22 sample with six, eight and seven zeros of types 0, 1, 2") {
  bool found = false;
  for (std::uint64_t seed = 0; seed < 400 && !found; ++seed) {
    const auto c = classify_sample(sample_cue(22, seed));
    found = c.N0 == 6 && c.N1 == 8 && c.N2 == 7;
  }
  CHECK(found);
}

TEST_CASE("ensemble statistics are deterministic and thread independent") {
  const auto a = batch_stats(10, 40, 5, 1);
  const auto b = batch_stats(10, 40, 5, 3);
  CHECK(a.N0 == b.N0);
  CHECK(a.N1 == b.N1);
  CHECK(a.N2 == b.N2);
  CHECK(a.scaled_radius[2] == b.scaled_radius[2]);
  CHECK(a.type2_gaps == b.type2_gaps);
  CHECK(a.N0 + a.N1 + a.N2 == 40 * 9);
  CHECK(a.N2 - a.N0 == 40);
  CHECK(a.identity_failures == 0);
  CHECK(a.sector_counterexamples == 0);
  CHECK(a.min_F >= 0.5);
  CHECK(a.max_F_at_eigen < 1e-8);
  CHECK(a.max_gap_integral_error < 1e-8);
  CHECK(std::is_sorted(a.type2_gaps.begin(), a.type2_gaps.end()));
  const auto c = batch_stats(10, 40, 6, 1);
  CHECK(c.scaled_radius[2] != a.scaled_radius[2]);
  CHECK_THROWS_AS(batch_stats(10, 0, 5), Error);
}
