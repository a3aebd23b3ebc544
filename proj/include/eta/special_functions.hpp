// Gamma-family functions, zeta and its first three derivatives, and the
// completed derivative eta(s) = pi^{-s/2} Gamma(s/2) zeta'(s).
//
// Zeta derivatives come from an Euler-Maclaurin expansion carried as a
// truncated Taylor jet in s, so all four orders share one pass over the
// direct sum. Heights are capped at |t| <= 5000.
#pragma once

#include <array>

#include "eta/common.hpp"

namespace eta {

inline constexpr double kHeightCap = 5000.0;

enum class Precision {
  binary64,   ///< double throughout
  binary128,  ///< __float128 kernel: slow, used where double cannot hold 1e-10 absolute
  automatic,  ///< binary64 unless the rounding estimate exceeds 1e-11 absolute
};

struct EvalParams {
  /// Direct-sum length N. Zero selects at least max(20, ceil(1.3 |t| / pi)),
  /// raised until the first omitted tail term is below 1e-12 (matters for
  /// sigma < 0).
  int euler_maclaurin_terms = 0;
  /// Highest Bernoulli index in the tail correction (even, <= 30).
  int bernoulli_order = 30;
  /// Highest derivative computed (0..3); higher slots are left at zero.
  int derivative_order_max = 3;
  Precision precision = Precision::automatic;

  /// Direct-sum length actually used at s; validates the accuracy
  /// precondition N >= ceil(|t|/pi).
  int terms_for(Complex s) const;
};

/// zeta^{(k)}(s) for k = 0..3.
struct ZetaPack {
  std::array<Complex, 4> values{};
  const Complex& operator[](int k) const { return values[static_cast<std::size_t>(k)]; }
};

/// eta and its first two derivatives together with h and h'/h.
///
/// |h| underflows double for t beyond roughly 900, so every multiplicative
/// quantity is stored divided by exp(log_scale), with log_scale = Re log h(s).
/// Consequently |h| == 1 as stored; ratios (eta'/eta, curvature, arguments)
/// are unaffected. True eta = eta * exp(log_scale).
struct EtaPack {
  Complex eta;
  Complex eta_prime;
  Complex eta_second;
  Complex h;
  Complex h_log_deriv;   ///< h'/h (unscaled)
  Complex log_h;         ///< principal log h(s) (unscaled)
  double log_scale = 0;  ///< Re log h(s)
  ZetaPack zeta;

  /// eta'/eta = h'/h + zeta''/zeta'.
  Complex log_deriv() const { return h_log_deriv + zeta[2] / zeta[1]; }
  /// log eta with the principal branch of log zeta'.
  Complex log_eta() const;
};

/// Principal-branch log Gamma(s).
Complex log_gamma(Complex s);
/// psi(s) = Gamma'/Gamma(s).
Complex digamma(Complex s);
/// psi'(s).
Complex trigamma(Complex s);

ZetaPack zeta_pack(Complex s, const EvalParams& params = {});
Complex zeta(Complex s, const EvalParams& params = {});

/// log h(s) = -(s/2) log pi + log Gamma(s/2).
Complex log_h(Complex s);
/// h'/h(s) = (psi(s/2) - log pi) / 2.
Complex h_log_deriv(Complex s);

EtaPack eta_pack(Complex s, const EvalParams& params = {});

/// F(t) = -Re eta'/eta (1/2 + it).
double F_crit(double t, const EvalParams& params = {});
/// Re eta'/eta (sigma + it).
double f_sigma(double sigma, double t, const EvalParams& params = {});

/// Akatsuka's G(s) = -2^s zeta'(s) / log 2 and its derivative.
struct GPack {
  Complex g;
  Complex g_prime;
};
Complex g_akatsuka(Complex s, const EvalParams& params = {});
GPack g_akatsuka_pack(Complex s, const EvalParams& params = {});

/// Spacing of the asymptotic Im G = 0 lines: pi / log(3/2).
inline double g_line_spacing() { return kPi / 0.40546510810816438197801311546434913; }

}  // namespace eta
