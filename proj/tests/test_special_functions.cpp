#include <cmath>
#include <random>

#include "doctest.h"
#include "eta/special_functions.hpp"
#include "oracle/oracle.hpp"

using namespace eta;

namespace {

double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double gamma1() { return static_cast<double>(oracle_real(kCriticalZeroOracle[0])); }

}  // namespace

TEST_CASE("log_gamma closed forms and oracle") {
  CHECK(std::abs(log_gamma(1.0)) < 1e-15);
  CHECK(std::abs(log_gamma(0.5) - 0.5 * std::log(kPi)) < 1e-13);
  for (const auto& p : kLogGammaOracle) {
    const Complex v = log_gamma({p.sigma, p.t});
    CHECK_MESSAGE(oracle_abs_error(v, p.v) / oracle_abs(p.v) < 1e-12, "s=" << p.sigma << "+" << p.t << "i");
  }
}

TEST_CASE("gamma family poles") {
  CHECK_THROWS_AS(log_gamma(0.0), Error);
  CHECK_THROWS_AS(log_gamma(-3.0), Error);
  CHECK_THROWS_AS(digamma(-1.0), Error);
  CHECK_THROWS_AS(trigamma(0.0), Error);
  try {
    digamma(-2.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::pole);
  }
}

TEST_CASE("digamma and trigamma") {
  CHECK(std::abs(digamma(1.0) + kEulerGamma) < 1e-14);
  const Complex s(2.5, 13.0);
  CHECK(rel_err(digamma(std::conj(s)), std::conj(digamma(s))) < 1e-14);
  for (const auto& p : kDigammaOracle) {
    const Complex v = digamma({p.sigma, p.t});
    CHECK_MESSAGE(oracle_abs_error(v, p.v) / oracle_abs(p.v) < 1e-12, "s=" << p.sigma << "+" << p.t << "i");
  }
  for (const auto& p : kTrigammaOracle) {
    const Complex v = trigamma({p.sigma, p.t});
    CHECK_MESSAGE(oracle_abs_error(v, p.v) / oracle_abs(p.v) < 1e-12, "s=" << p.sigma << "+" << p.t << "i");
  }
}

TEST_CASE("zeta_pack closed forms") {
  CHECK(std::abs(zeta(2.0) - kPi * kPi / 6.0) < 1e-14);
  const ZetaPack at0 = zeta_pack(0.0);
  CHECK(std::abs(at0[0] + 0.5) < 1e-13);
  CHECK(std::abs(at0[1] + 0.5 * std::log(kTwoPi)) < 1e-13);
  const Complex rho(0.5, gamma1());
  CHECK(std::abs(zeta(rho)) < 1e-8);
}

TEST_CASE("zeta_pack errors") {
  CHECK_THROWS_AS(zeta_pack(1.0), Error);
  try {
    zeta_pack({0.5, 6000.0});
    FAIL("expected height cap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::height_cap);
  }
  EvalParams p;
  p.euler_maclaurin_terms = 10;
  try {
    zeta_pack({0.5, 100.0}, p);
    FAIL("expected accuracy precondition");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::accuracy_precondition);
  }
  p = {};
  p.bernoulli_order = 13;
  CHECK_THROWS_AS(zeta_pack({2.0, 10.0}, p), Error);
}

TEST_CASE("zeta derivatives match the mpmath oracle where binary64 can hold them") {
  // Absolute 1e-9 is only representable when |value| < ~1e7; beyond that the
  // result has to be the correctly rounded double, within one ulp. The strict
  // absolute version lives in the acceptance suite.
  for (const auto& p : kZetaOracle) {
    const ZetaPack z = zeta_pack({p.sigma, p.t});
    for (int k = 0; k < 4; ++k) {
      const double err = oracle_abs_error(z[k], p.v[k]);
      const double ulp = oracle_abs(p.v[k]) * 0x1p-52;
      CHECK_MESSAGE(err < std::max(1e-9, ulp), "k=" << k << " s=" << p.sigma << "+" << p.t << "i err=" << err);
    }
  }
}

TEST_CASE("default direct-sum length grows left of the critical strip") {
  const EvalParams p;
  CHECK(p.terms_for({0.5, 1000.0}) == p.terms_for({3.0, 1000.0}));
  CHECK(p.terms_for({-5.0, 1600.0}) > p.terms_for({0.5, 1600.0}));
  EvalParams fixed;
  fixed.euler_maclaurin_terms = 700;
  CHECK(fixed.terms_for({-5.0, 1600.0}) == 700);
  fixed.euler_maclaurin_terms = 100;
  CHECK_THROWS_AS(fixed.terms_for({0.5, 1600.0}), Error);
}

TEST_CASE("binary64 and binary128 kernels agree near the critical strip") {
  EvalParams quad;
  quad.precision = Precision::binary128;
  EvalParams dbl;
  dbl.precision = Precision::binary64;
  for (Complex s : {Complex(0.5, 1999.0), Complex(0.25, 1000.0), Complex(2.0, 700.0), Complex(-1.0, 50.0)}) {
    const ZetaPack a = zeta_pack(s, dbl), b = zeta_pack(s, quad);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-10);
  }
}

TEST_CASE("eta_pack at a zero of zeta'") {
  const Complex rho_p = oracle_complex(kZetaPrimeZeroOracle[0]);
  const EtaPack e = eta_pack(rho_p);
  CHECK(std::abs(e.eta) < 1e-8);
  const Complex expected = e.h * e.zeta[2];
  CHECK(std::abs(e.eta_prime - expected) / std::abs(expected) < 1e-10);
  CHECK(std::abs(std::abs(e.h) - 1.0) < 1e-14);

  const EtaPack on_line = eta_pack({0.5, gamma1()});
  CHECK(std::abs(on_line.eta.real()) < 1e-8);

  const Complex s(3.0, 20.0);
  const EtaPack a = eta_pack(s), b = eta_pack(std::conj(s));
  CHECK(rel_err(b.eta, std::conj(a.eta)) < 1e-12);
  CHECK(rel_err(b.eta_prime, std::conj(a.eta_prime)) < 1e-12);
  CHECK(rel_err(b.eta_second, std::conj(a.eta_second)) < 1e-12);
  CHECK(a.log_scale == doctest::Approx(b.log_scale));
}

TEST_CASE("eta_pack internal consistency") {
  const Complex s(0.7, 321.5);
  const EtaPack e = eta_pack(s);
  CHECK(std::abs(e.eta - e.h * e.zeta[1]) == 0.0);
  CHECK(std::abs(e.eta_prime - e.h * (e.h_log_deriv * e.zeta[1] + e.zeta[2])) < 1e-14 * std::abs(e.eta_prime));
  // eta'' against a central difference of eta' (same scale at both points
  // requires undoing the per-point normalization).
  const double d = 1e-4;
  const EtaPack ep = eta_pack(s + d), em = eta_pack(s - d);
  const Complex fd = (ep.eta_prime * std::exp(ep.log_scale - e.log_scale) -
                      em.eta_prime * std::exp(em.log_scale - e.log_scale)) / (2.0 * d);
  CHECK(std::abs(fd - e.eta_second) / std::abs(e.eta_second) < 1e-6);
  CHECK_THROWS_AS(eta_pack(0.0), Error);
  CHECK_THROWS_AS(eta_pack(1.0), Error);
}

TEST_CASE("F_crit") {
  CHECK(F_crit(10.0) > 0.0);
  for (int n = 0; n < 50; ++n) {
    const double g = static_cast<double>(oracle_real(kCriticalZeroOracle[n]));
    CHECK_MESSAGE(std::abs(F_crit(g) - 0.5 * std::log(g / kTwoPi)) < 5.0 / g, "n=" << n + 1);
  }
  // Finite-difference oracle: F = -d/dsigma log|eta| at sigma = 1/2.
  const double t = 100.0, hd = 1e-5;
  auto log_abs_eta = [&](double sigma) {
    const EtaPack e = eta_pack({sigma, t});
    return e.log_scale + std::log(std::abs(e.eta));
  };
  const double fd = -(log_abs_eta(0.5 + hd) - log_abs_eta(0.5 - hd)) / (2.0 * hd);
  CHECK(std::abs(fd - F_crit(t)) < 1e-6);
}

TEST_CASE("f_sigma on sigma = 4") {
  CHECK(f_sigma(4.0, 50.0) > 0.0);
  CHECK(h_log_deriv({4.0, 3000.0}).real() >= 3.084);
  const ZetaPack z = zeta_pack({4.0, 500.0});
  CHECK(std::abs(z[2] / z[1]) <= 3.07718);
}

TEST_CASE("Akatsuka G") {
  CHECK(g_line_spacing() == doctest::Approx(7.748).epsilon(1e-4));
  const Complex g = g_akatsuka(3.5);
  CHECK(std::abs(g.imag()) < 1e-15);
  CHECK(g.real() > 0.0);
  const double t = 41.0 * g_line_spacing();
  const Complex gv = g_akatsuka({10.0, t});
  CHECK(std::abs(gv.imag()) < 0.05 * std::abs(gv));
  // G' against a central difference.
  const Complex s(2.0, 77.0);
  const double d = 1e-5;
  const Complex fd = (g_akatsuka(s + d) - g_akatsuka(s - d)) / (2.0 * d);
  CHECK(std::abs(fd - g_akatsuka_pack(s).g_prime) < 1e-8);
}

TEST_CASE("conjugate symmetry on random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> sig(-5.0, 10.0), ht(10.0, 2000.0);
  for (int i = 0; i < 200; ++i) {
    const Complex s(sig(rng), ht(rng));
    const Complex sc = std::conj(s);
    CHECK(rel_err(log_gamma(sc), std::conj(log_gamma(s))) < 1e-12);
    CHECK(rel_err(digamma(sc), std::conj(digamma(s))) < 1e-12);
    const ZetaPack a = zeta_pack(s), b = zeta_pack(sc);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(b[k] - std::conj(a[k])) <= 1e-12 * std::max(1.0, std::abs(a[k])));
    if (i % 10 == 0) {
      const EtaPack ea = eta_pack(s), eb = eta_pack(sc);
      CHECK(rel_err(eb.eta, std::conj(ea.eta)) < 1e-12);
      CHECK(rel_err(eb.eta_second, std::conj(ea.eta_second)) < 1e-12);
      CHECK(rel_err(g_akatsuka(sc), std::conj(g_akatsuka(s))) < 1e-12);
    }
  }
}

TEST_CASE("doubling the direct sum leaves zeta derivatives unchanged") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> sig(-5.0, 10.0), ht(10.0, 2000.0);
  for (int i = 0; i < 100; ++i) {
    const Complex s(sig(rng), ht(rng));
    EvalParams p;
    const int N = p.terms_for(s);
    p.euler_maclaurin_terms = 2 * N;
    const ZetaPack a = zeta_pack(s), b = zeta_pack(s, p);
    for (int k = 0; k < 4; ++k)
      CHECK_MESSAGE(std::abs(a[k] - b[k]) < 1e-10 * std::max(1.0, std::abs(a[k])), "s=" << s << " k=" << k);
  }
}

TEST_CASE("Cauchy-Riemann: d log|eta|/dsigma equals d arg eta/dt on the critical line") {
  const double hd = 1e-5;
  for (double t : {30.0, 123.4, 777.7}) {
    auto L = [&](double sigma, double tt) { return eta_pack({sigma, tt}).log_eta(); };
    const double dlog_abs = (L(0.5 + hd, t).real() - L(0.5 - hd, t).real()) / (2.0 * hd);
    const double darg = wrap_angle(L(0.5, t + hd).imag() - L(0.5, t - hd).imag()) / (2.0 * hd);
    CHECK(std::abs(dlog_abs - darg) < 1e-5);
  }
}

TEST_CASE("F > 0 on [5, 2000] and f(4, t) > 0 on [41, 2000]") {
  int bad_F = 0, bad_f = 0;
  for (int i = 0; i <= 19950; ++i) {
    const double t = 5.0 + 0.1 * i;
    if (!(F_crit(t) > 0.0)) ++bad_F;
  }
  for (int i = 0; i <= 19590; ++i) {
    const double t = 41.0 + 0.1 * i;
    if (!(f_sigma(4.0, t) > 0.0)) ++bad_f;
  }
  CHECK(bad_F == 0);
  CHECK(bad_f == 0);
}
