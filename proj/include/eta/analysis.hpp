// Geometry of the Re eta = 0 curves near a zero of zeta' and the sum
// identities that tie one zero of zeta' (or zeta'') to all the others.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "eta/catalog.hpp"
#include "eta/level_curves.hpp"

namespace eta {

/// Signed curvature |f'| Re(f''/f'^2) of the level curve of Re f through s,
/// positive when the curve turns right as Im f increases.
double curvature_field(Complex f_prime, Complex f_second);
/// Same, for f = eta at s (any point where eta' != 0).
double curvature_field(Complex s, const EvalParams& eval = {});

/// Re(exp(-i theta)(2h'/h + zeta'''/zeta'')) at a zero of zeta', with
/// theta = arg(h zeta''(rho')).
double curvature_at_zero(Complex rho_prime, const EvalParams& eval = {});

/// Circle through three points; positive when c turns left of a -> b.
double menger_curvature(Complex a, Complex b, Complex c);

/// Short piece of the Re eta = 0 curve through a zero of zeta', ordered from
/// the purple ray through rho' into the green ray, sampled with step <= spacing.
std::vector<Complex> local_level_polyline(Complex rho_prime, double half_length, double spacing,
                                          const EvalParams& eval = {});

/// Three-point curvature of the traced curve at rho', Richardson-combined
/// over spacings r and r/2.
double polyline_curvature_at_zero(Complex rho_prime, double r = 4e-3, const EvalParams& eval = {});

struct Chord {
  double length = 0;
  double bound = 0;  ///< 2^{3/2} ((beta' - 1/2) / |kappa|)^{1/2}
};

/// Chord cut from the critical line by the osculating circle at rho', taking
/// rho' as the rightmost point of the circle.
Chord chord_length(double beta_prime, double kappa);

struct ThetaLimit {
  double theta = 0;      ///< arg(h zeta''(rho'))
  double limit_arg = 0;  ///< lim arg eta(sigma + i gamma'), sigma -> beta' from the left
  double defect = 0;     ///< wrap(limit_arg - theta - pi)
  std::array<double, 4> samples{};
};

/// Extrapolates arg eta(beta' - k h + i gamma'), k = 1..4, cubically to k = 0.
ThetaLimit theta_limit(Complex rho_prime, double h = 1e-3, const EvalParams& eval = {});

enum class SumIdentity { fund, fan_ge_F, prop13 };
std::string_view to_string(SumIdentity id) noexcept;

struct IdentityResidualReport {
  SumIdentity identity = SumIdentity::fund;
  double lhs = 0, rhs = 0;
  double residual = 0;
  double window_halfwidth = 0;
  double tail_estimate = 0;  ///< part of the zero sum supplied by the density model
  double correction = 0;     ///< explicit lower-order terms included on the rhs (fan_ge_F only)
  int terms = 0;             ///< zeros of zeta' summed explicitly
};

/// Residual of one sum identity at the anchor. fund needs a zeta' zero with
/// its Spira partner, prop13 a zeta' zero, fan_ge_F uses t = Im anchor.
/// Zeros of zeta' with |gamma - t| <= H are summed from the catalog; the rest,
/// including all conjugate zeros, come from the density (1/2pi) log(t/4pi).
IdentityResidualReport sum_identity_residual(SumIdentity which, const ZeroRecord& anchor, const Catalog& catalog,
                                             double H, const EvalParams& eval = {});

/// Tail of sum Re(1/(z - lambda')) (or its negative) over zeros outside
/// |gamma - g| <= H, modelled as c / (distance)^2 with c the mean real-part
/// offset. Works on both half planes.
double tail_model(double g, double H, double c);

/// Integral of F over (a, b); pass consecutive critical ordinates.
double integral_F_gap(double gamma_lo, double gamma_hi, double tol = 1e-8, const EvalParams& eval = {});
/// Same for the gap after zero n (1-based) of a sorted list of critical zeros.
double integral_F_gap(const std::vector<ZeroRecord>& critical, int n, double tol = 1e-8,
                      const EvalParams& eval = {});

struct Type2Triple {
  double gamma_minus = 0, gamma_plus = 0;
  Complex rho_prime;
  double t0 = 0, Delta = 0, Y = 0, lambda = 0;
  double x = 0, y = 0, delta = 0;
  double x_predicted = 0;  ///< (pi^2/4)(1 - log(pi)/lambda) delta^2
  bool straddles = false;  ///< gamma^- < gamma' < gamma^+
};

/// Rescaled coordinates of a classified type-2 zero. The x prediction drops
/// the sum over the other critical zeros.
Type2Triple rescaled_coords(const ZeroRecord& rho_prime);
Type2Triple rescaled_coords(double gamma_minus, double gamma_plus, Complex rho_prime);

/// log(gamma') (rho'' - rho' - 1/log gamma').
Complex rho2_displacement(Complex rho_prime, Complex rho_second);

struct DisplacementQuartile {
  double lo = 0, hi = 0;  ///< range of (beta' - 1/2) log gamma'
  std::vector<Complex> w;
  double mean_abs = 0;
  double var_abs = 0;
};

/// Splits zeros with a Spira partner into quartiles of (beta' - 1/2) log gamma'
/// (type-7 quantile cuts), closest to the critical line first.
std::array<DisplacementQuartile, 4> displacement_quartiles(const std::vector<ZeroRecord>& zeros);

struct LineOffsetSum {
  double sum = 0;   ///< explicit terms plus tail
  double tail = 0;
  double ratio = 0; ///< sum / log gamma'
  double min_term = 0;
  int terms = 0;
};

/// sum over lambda' != rho' of Re(1/(lambda' - (1/2 + i gamma'))).
LineOffsetSum line_offset_sum(const ZeroRecord& rho_prime, const Catalog& catalog, double H);

/// (1/2) log(t/2pi), the main term of F at a critical zero.
inline double F_main_term(double t) { return 0.5 * std::log(t / kTwoPi); }

}  // namespace eta
