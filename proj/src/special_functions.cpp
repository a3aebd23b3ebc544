#include "eta/special_functions.hpp"

#include <quadmath.h>

#include <cmath>
#include <sstream>
#include <vector>

namespace eta {
namespace {

constexpr double kLogPi = 1.14472988584940017414342735135305871;
constexpr double kLogTwo = 0.69314718055994530941723212145817657;
constexpr double kHalfLogTwoPi = 0.91893853320467274178032973640561764;
constexpr double kTwoPiHi = 6.283185307179586;
constexpr double kTwoPiLo = 2.4492935982947064e-16;

// Bernoulli numbers B_2 .. B_30 as exact rationals.
struct Rational {
  long long num;
  long long den;
};
constexpr std::array<Rational, 15> kBernoulli = {{
    {1, 6},
    {-1, 30},
    {1, 42},
    {-1, 30},
    {5, 66},
    {-691, 2730},
    {7, 6},
    {-3617, 510},
    {43867, 798},
    {-174611, 330},
    {854513, 138},
    {-236364091, 2730},
    {8553103, 6},
    {-23749461029LL, 870},
    {8615841276005LL, 14322},
}};

double bernoulli(int k) {  // B_{2k}
  const auto& r = kBernoulli[static_cast<std::size_t>(k - 1)];
  return static_cast<double>(r.num) / static_cast<double>(r.den);
}

bool is_nonpositive_integer(Complex s) {
  return s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real());
}

// ---------------------------------------------------------------------------
// Gamma family. Shift the argument until |z| is large enough for the
// asymptotic series, then undo the shift with the recurrence.

constexpr double kAsymptoticRadius = 15.0;

int shift_count(Complex z) {
  if (std::abs(z.imag()) >= kAsymptoticRadius && z.real() > -std::abs(z.imag())) return 0;
  if (z.real() >= kAsymptoticRadius) return 0;
  return static_cast<int>(std::ceil(kAsymptoticRadius - z.real()));
}

Complex log_gamma_asymptotic(Complex z) {
  Complex result = (z - 0.5) * std::log(z) - z + kHalfLogTwoPi;
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex power = inv;
  for (int k = 1; k <= 12; ++k) {
    result += bernoulli(k) / (2.0 * k * (2.0 * k - 1.0)) * power;
    power *= inv2;
  }
  return result;
}

Complex digamma_asymptotic(Complex z) {
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex result = std::log(z) - 0.5 * inv;
  Complex power = inv2;
  for (int k = 1; k <= 12; ++k) {
    result -= bernoulli(k) / (2.0 * k) * power;
    power *= inv2;
  }
  return result;
}

Complex trigamma_asymptotic(Complex z) {
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex result = inv + 0.5 * inv2;
  Complex power = inv2 * inv;
  for (int k = 1; k <= 12; ++k) {
    result += bernoulli(k) * power;
    power *= inv2;
  }
  return result;
}

void require_not_pole(Complex s, const char* what) {
  if (is_nonpositive_integer(s)) {
    std::ostringstream msg;
    msg << what << " has a pole at s = " << s.real();
    fail(ErrorKind::pole, msg.str());
  }
}

// ---------------------------------------------------------------------------
// Euler-Maclaurin kernel, templated on the real type so the same code runs
// in binary64 and binary128.

template <class T>
struct Math;

template <>
struct Math<double> {
  static double exp(double x) { return std::exp(x); }
  static double log(double x) { return std::log(x); }
  static double cos(double x) { return std::cos(x); }
  static double sin(double x) { return std::sin(x); }
};

template <>
struct Math<__float128> {
  static __float128 exp(__float128 x) { return expq(x); }
  static __float128 log(__float128 x) { return logq(x); }
  static __float128 cos(__float128 x) { return cosq(x); }
  static __float128 sin(__float128 x) { return sinq(x); }
};

// Truncated Taylor series in eps: c[0] + c[1] eps + ... + c[K-1] eps^{K-1}.
template <class T>
struct Jet {
  using C = std::complex<T>;
  std::array<C, 4> c{};
  int order = 4;

  Jet& operator+=(const Jet& o) {
    for (int j = 0; j < order; ++j) c[j] += o.c[j];
    return *this;
  }
  Jet operator*(const Jet& o) const {
    Jet r;
    r.order = order;
    for (int i = 0; i < order; ++i)
      for (int j = 0; i + j < order; ++j) r.c[i + j] += c[i] * o.c[j];
    return r;
  }
  Jet scaled(C f) const {
    Jet r = *this;
    for (int j = 0; j < order; ++j) r.c[j] *= f;
    return r;
  }
  // (a + eps)
  static Jet linear(C a, int order) {
    Jet r;
    r.order = order;
    r.c[0] = a;
    if (order > 1) r.c[1] = C(T(1), T(0));
    return r;
  }
  // 1 / (a + eps)
  static Jet reciprocal_linear(C a, int order) {
    Jet r;
    r.order = order;
    const C inv = C(T(1), T(0)) / a;
    C p = inv;
    for (int j = 0; j < order; ++j) {
      r.c[j] = p;
      p *= -inv;
    }
    return r;
  }
  // base * exp(-eps * L)
  static Jet exp_shift(C base, T L, int order) {
    Jet r;
    r.order = order;
    C p = base;
    for (int j = 0; j < order; ++j) {
      r.c[j] = p;
      p *= C(-L / T(j + 1), T(0));
    }
    return r;
  }
};

struct LogTable {
  std::vector<double> hi;
  std::vector<double> lo;
};

constexpr int kLogTableSize = 1 << 14;

const LogTable& log_table() {
  static const LogTable table = [] {
    LogTable t;
    t.hi.resize(kLogTableSize);
    t.lo.resize(kLogTableSize);
    for (int n = 1; n < kLogTableSize; ++n) {
      __float128 exact = logq(static_cast<__float128>(n));
      t.hi[n] = static_cast<double>(exact);
      t.lo[n] = static_cast<double>(exact - static_cast<__float128>(t.hi[n]));
    }
    return t;
  }();
  return table;
}

// t * log(n) reduced into (-pi, pi] in double-double, so the phase of n^{-it}
// is accurate to a few ulp even when t log n is in the tens of thousands.
double reduced_phase(double t, double log_hi, double log_lo) {
  const double p = t * log_hi;
  double e = std::fma(t, log_hi, -p);
  e += t * log_lo;
  const double k = std::nearbyint(p / kTwoPiHi);
  double r = std::fma(-k, kTwoPiHi, p);
  r -= k * kTwoPiLo;
  return r + e;
}

// n^{-s} for the double kernel.
Complex power_minus_s(int n, double sigma, double t) {
  const auto& table = log_table();
  double lhi, llo;
  if (n < kLogTableSize) {
    lhi = table.hi[static_cast<std::size_t>(n)];
    llo = table.lo[static_cast<std::size_t>(n)];
  } else {
    __float128 exact = logq(static_cast<__float128>(n));
    lhi = static_cast<double>(exact);
    llo = static_cast<double>(exact - static_cast<__float128>(lhi));
  }
  const double mag = std::exp(-sigma * lhi);
  const double phase = -reduced_phase(t, lhi, llo);
  return {mag * std::cos(phase), mag * std::sin(phase)};
}

template <class T>
std::complex<T> power_minus_s_generic(int n, std::complex<T> s, T L) {
  if constexpr (std::is_same_v<T, double>) {
    return power_minus_s(n, s.real(), s.imag());
  } else {
    const T mag = Math<T>::exp(-s.real() * L);
    const T phase = -s.imag() * L;
    return {mag * Math<T>::cos(phase), mag * Math<T>::sin(phase)};
  }
}

template <class T>
T log_of(int n) {
  if constexpr (std::is_same_v<T, double>) {
    if (n < kLogTableSize) return log_table().hi[static_cast<std::size_t>(n)];
    return std::log(static_cast<double>(n));
  } else {
    return Math<T>::log(static_cast<T>(n));
  }
}

template <class T>
std::array<std::complex<T>, 4> euler_maclaurin(std::complex<T> s, int N, int bern_order, int order) {
  using C = std::complex<T>;
  using J = Jet<T>;
  J sum;
  sum.order = order;

  for (int n = 1; n < N; ++n) {
    const T L = log_of<T>(n);
    const C base = n == 1 ? C(T(1), T(0)) : power_minus_s_generic<T>(n, s, L);
    C p = base;
    sum.c[0] += p;
    for (int j = 1; j < order; ++j) {
      p *= C(-L / T(j), T(0));
      sum.c[j] += p;
    }
  }

  const T LN = log_of<T>(N);
  const C baseN = power_minus_s_generic<T>(N, s, LN);
  const J E = J::exp_shift(baseN, LN, order);  // N^{-s-eps}
  const C one(T(1), T(0));

  // N^{1-s} / (s - 1)
  sum += (E * J::reciprocal_linear(s - one, order)).scaled(C(static_cast<T>(N), T(0)));
  // N^{-s} / 2
  sum += E.scaled(C(T(0.5), T(0)));

  // Bernoulli tail: N^{-s} sum_k B_2k/(2k)! (s)_{2k-1} N^{1-2k}
  J tail;
  tail.order = order;
  J poch = J::linear(s, order);  // (s)(s+1)...(s+2k-2), starts at k = 1
  T factorial = T(2);            // (2k)!
  const T invN = T(1) / static_cast<T>(N);
  T Npow = invN;  // N^{1-2k}
  const int kmax = bern_order / 2;
  for (int k = 1; k <= kmax; ++k) {
    const auto& r = kBernoulli[static_cast<std::size_t>(k - 1)];
    const T coeff = static_cast<T>(r.num) / static_cast<T>(r.den) / factorial * Npow;
    tail += poch.scaled(C(coeff, T(0)));
    // advance to k + 1
    poch = poch * J::linear(s + C(static_cast<T>(2 * k - 1), T(0)), order) *
           J::linear(s + C(static_cast<T>(2 * k), T(0)), order);
    factorial *= static_cast<T>((2 * k + 1) * (2 * k + 2));
    Npow *= invN * invN;
  }
  sum += E * tail;

  std::array<C, 4> out{};
  T fact = T(1);
  for (int j = 0; j < order; ++j) {
    if (j > 0) fact *= static_cast<T>(j);
    out[static_cast<std::size_t>(j)] = sum.c[j] * C(fact, T(0));
  }
  return out;
}

// Estimated absolute rounding error of the binary64 kernel: per-term errors
// of order eps |n^{-s}| (log n)^k accumulate like a random walk.
double binary64_error_estimate(double sigma, int N, int order) {
  const double logN = std::log(static_cast<double>(N));
  const double e = 1.0 - 2.0 * sigma;
  double sum_sq;
  if (std::abs(e) < 1e-6) {
    sum_sq = logN + 1.0;
  } else if (e < 0) {
    sum_sq = 1.0 + 1.0 / (-e);
  } else {
    sum_sq = (std::pow(static_cast<double>(N), e) - 1.0) / e + 1.0;
  }
  return 1.1e-16 * std::pow(1.0 + logN, order - 1) * std::sqrt(sum_sq) * 4.0;
}

}  // namespace

int EvalParams::terms_for(Complex s) const {
  const double at = std::abs(s.imag());
  const int minimum = static_cast<int>(std::ceil(at / kPi));
  if (euler_maclaurin_terms != 0) {
    if (euler_maclaurin_terms < minimum) {
      std::ostringstream msg;
      msg << "euler_maclaurin_terms=" << euler_maclaurin_terms << " below ceil(|t|/pi)=" << minimum
          << " at t=" << s.imag();
      fail(ErrorKind::accuracy_precondition, msg.str());
    }
    return euler_maclaurin_terms;
  }
  // First omitted tail term, |B_2m|/(2m)! ~ 2/(2pi)^2m with m = K + 1, times
  // |(s)_{2K+1}| N^{-sigma-2K-1} and a (1 + log N) per derivative.
  const int K = bernoulli_order / 2;
  double log_poch = 0;
  for (int j = 0; j <= 2 * K; ++j) log_poch += std::log(std::abs(s + static_cast<double>(j)));
  auto log_remainder = [&](double N) {
    return std::log(2.0) - (2 * K + 2) * std::log(kTwoPi) + log_poch - (s.real() + 2 * K + 1) * std::log(N) +
           derivative_order_max * std::log1p(std::log(N));
  };
  const double target = std::log(1e-12);
  int N = std::max({20, static_cast<int>(std::ceil(1.3 * at / kPi)), minimum});
  while (log_remainder(N) > target && N < (1 << 16)) N = static_cast<int>(std::ceil(1.1 * N));
  return N;
}

Complex log_gamma(Complex s) {
  require_not_pole(s, "log_gamma");
  const int m = shift_count(s);
  Complex z = s;
  Complex correction = 0.0;
  for (int k = 0; k < m; ++k) {
    correction += std::log(z);
    z += 1.0;
  }
  return log_gamma_asymptotic(z) - correction;
}

Complex digamma(Complex s) {
  require_not_pole(s, "digamma");
  const int m = shift_count(s);
  Complex z = s;
  Complex correction = 0.0;
  for (int k = 0; k < m; ++k) {
    correction += 1.0 / z;
    z += 1.0;
  }
  return digamma_asymptotic(z) - correction;
}

Complex trigamma(Complex s) {
  require_not_pole(s, "trigamma");
  const int m = shift_count(s);
  Complex z = s;
  Complex correction = 0.0;
  for (int k = 0; k < m; ++k) {
    correction += 1.0 / (z * z);
    z += 1.0;
  }
  return trigamma_asymptotic(z) + correction;
}

ZetaPack zeta_pack(Complex s, const EvalParams& params) {
  if (s == Complex(1.0, 0.0)) fail(ErrorKind::pole, "zeta has a pole at s = 1");
  if (std::abs(s.imag()) > kHeightCap) {
    std::ostringstream msg;
    msg << "|Im s| = " << std::abs(s.imag()) << " exceeds the height cap " << kHeightCap;
    fail(ErrorKind::height_cap, msg.str());
  }
  if (params.bernoulli_order < 2 || params.bernoulli_order > 30 || params.bernoulli_order % 2 != 0)
    fail(ErrorKind::invalid_argument, "bernoulli_order must be even and in [2, 30]");
  if (params.derivative_order_max < 0 || params.derivative_order_max > 3)
    fail(ErrorKind::invalid_argument, "derivative_order_max must be in [0, 3]");

  const int N = params.terms_for(s);
  const int order = params.derivative_order_max + 1;
  bool extended = params.precision == Precision::binary128;
  if (params.precision == Precision::automatic)
    extended = binary64_error_estimate(s.real(), N, order) > 1e-11;

  ZetaPack pack;
  if (extended) {
    const std::complex<__float128> sq(static_cast<__float128>(s.real()),
                                      static_cast<__float128>(s.imag()));
    auto v = euler_maclaurin<__float128>(sq, N, params.bernoulli_order, order);
    for (std::size_t k = 0; k < 4; ++k)
      pack.values[k] = Complex(static_cast<double>(v[k].real()), static_cast<double>(v[k].imag()));
  } else {
    pack.values = euler_maclaurin<double>(s, N, params.bernoulli_order, order);
  }
  return pack;
}

Complex zeta(Complex s, const EvalParams& params) {
  EvalParams p = params;
  p.derivative_order_max = 0;
  return zeta_pack(s, p)[0];
}

Complex log_h(Complex s) { return -0.5 * s * kLogPi + log_gamma(0.5 * s); }

Complex h_log_deriv(Complex s) { return 0.5 * (digamma(0.5 * s) - kLogPi); }

Complex EtaPack::log_eta() const { return log_h + std::log(zeta[1]); }

EtaPack eta_pack(Complex s, const EvalParams& params) {
  if (s == Complex(0.0, 0.0)) fail(ErrorKind::pole, "h has a pole at s = 0");
  require_not_pole(0.5 * s, "h");
  EvalParams p = params;
  p.derivative_order_max = 3;
  EtaPack e;
  e.zeta = zeta_pack(s, p);
  e.log_h = log_h(s);
  e.log_scale = e.log_h.real();
  e.h = std::polar(1.0, e.log_h.imag());
  e.h_log_deriv = h_log_deriv(s);
  const Complex dlog2 = 0.25 * trigamma(0.5 * s);  // (h'/h)'
  const Complex h2_over_h = e.h_log_deriv * e.h_log_deriv + dlog2;
  e.eta = e.h * e.zeta[1];
  e.eta_prime = e.h * (e.h_log_deriv * e.zeta[1] + e.zeta[2]);
  e.eta_second = e.h * (h2_over_h * e.zeta[1] + 2.0 * e.h_log_deriv * e.zeta[2] + e.zeta[3]);
  return e;
}

double F_crit(double t, const EvalParams& params) {
  EvalParams p = params;
  p.derivative_order_max = 2;
  const Complex s(0.5, t);
  const ZetaPack z = zeta_pack(s, p);
  if (z[1] == Complex(0.0, 0.0)) fail(ErrorKind::derivative_zero, "eta vanishes at 1/2+it");
  return -(h_log_deriv(s) + z[2] / z[1]).real();
}

double f_sigma(double sigma, double t, const EvalParams& params) {
  EvalParams p = params;
  p.derivative_order_max = 2;
  const Complex s(sigma, t);
  const ZetaPack z = zeta_pack(s, p);
  if (z[1] == Complex(0.0, 0.0)) fail(ErrorKind::derivative_zero, "eta vanishes at sigma+it");
  return (h_log_deriv(s) + z[2] / z[1]).real();
}

GPack g_akatsuka_pack(Complex s, const EvalParams& params) {
  EvalParams p = params;
  p.derivative_order_max = 2;
  const ZetaPack z = zeta_pack(s, p);
  const Complex two_s = std::exp(s * kLogTwo);
  GPack g;
  g.g = -two_s * z[1] / kLogTwo;
  g.g_prime = -two_s * (kLogTwo * z[1] + z[2]) / kLogTwo;
  return g;
}

Complex g_akatsuka(Complex s, const EvalParams& params) { return g_akatsuka_pack(s, params).g; }

}  // namespace eta
