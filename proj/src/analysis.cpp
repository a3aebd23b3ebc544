#include "eta/analysis.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

namespace eta {

namespace {

// No non-real zero of zeta' lies below this height, so a catalog starting
// under it is complete from 0.
constexpr double kFirstDeriv1Height = 23.0;

void require_positive_finite(double x, const char* what) {
  if (!std::isfinite(x) || !(x > 0)) fail(ErrorKind::invalid_argument, std::string(what) + " must be positive");
}

// First corrected point of the Re eta = 0 ray leaving rho' at distance r.
Complex ray_point(Complex rho, int sign, double r, const EvalParams& eval) {
  const EtaPack e = eta_pack(rho, eval);
  const Complex start = rho + r * double(sign) * Complex(0.0, 1.0) * std::polar(1.0, -std::arg(e.eta_prime));
  TracerOptions opt;
  opt.eval = eval;
  opt.h_max = r;
  opt.h_min = std::min(opt.h_min, 0.25 * r);
  auto field = [&](Complex s) { return sample_eta(s, eval); };
  auto never = [](Complex, Complex, const FieldSample&, ContourTrace&) -> std::optional<Termination> {
    return std::nullopt;
  };
  const ContourTrace tr = trace_phase_curve(start, sign * kPi / 2, 1, field, never, 0.0, opt);
  if (tr.points.empty()) fail(ErrorKind::vanishing_derivative, "Re eta = 0 ray could not be started");
  return tr.points.front();
}

const std::vector<double>& cached_real_zeros() {
  static std::once_flag once;
  static std::vector<double> a;
  std::call_once(once, [] { a = real_negative_zeros(50); });
  return a;
}

// Re(1/s - 2/(s-1)) - Re sum_n (1/(s + a_n) - 1/(s + 2n)) at s = 1/2 + it.
double fan_ge_correction(double t) {
  const Complex s(0.5, t);
  double v = (1.0 / s - 2.0 / (s - 1.0)).real();
  const auto& a = cached_real_zeros();
  for (int n = 1; n <= 100000; ++n) {
    const double an = n <= static_cast<int>(a.size()) ? a[static_cast<std::size_t>(n - 1)]
                                                       : 2.0 * n + 2.0 - 1.0 / std::log(double(n));
    v -= ((2.0 * n - an) / ((s + an) * (s + 2.0 * n))).real();
  }
  return v;
}

struct WindowZeros {
  std::vector<Complex> zeros;  // excluding the anchor
  double mean_beta = 0;
};

WindowZeros window_zeros(const Catalog& catalog, double g, double H, Complex anchor, bool exclude_anchor) {
  if (!(H >= 50.0)) fail(ErrorKind::invalid_argument, "sum window half-width must be at least 50");
  const double lo = g - H, hi = g + H;
  if (catalog.t1 < hi || (catalog.t0 > lo && catalog.t0 > kFirstDeriv1Height)) {
    std::ostringstream msg;
    msg << "catalog covers (" << catalog.t0 << ", " << catalog.t1 << "), needs (" << std::max(0.0, lo) << ", " << hi
        << ")";
    fail(ErrorKind::incomplete_catalog, msg.str());
  }
  WindowZeros w;
  double beta_sum = 0;
  bool anchor_seen = !exclude_anchor;
  for (const auto& r : catalog.records) {
    if (r.kind != ZeroKind::deriv1 || r.gamma() < lo || r.gamma() > hi) continue;
    if (exclude_anchor && std::abs(r.location - anchor) < 1e-6) {
      anchor_seen = true;
      continue;
    }
    w.zeros.push_back(r.location);
    beta_sum += r.beta();
  }
  if (!anchor_seen) fail(ErrorKind::incomplete_catalog, "anchor zero is not in the catalog");
  w.mean_beta = w.zeros.empty() ? 1.0 : beta_sum / double(w.zeros.size());
  return w;
}

}  // namespace

double curvature_field(Complex f_prime, Complex f_second) {
  const double a = std::abs(f_prime);
  if (!(a > 0) || !std::isfinite(a)) fail(ErrorKind::vanishing_derivative, "f' vanishes");
  return a * (f_second / (f_prime * f_prime)).real();
}

double curvature_field(Complex s, const EvalParams& eval) {
  const EtaPack e = eta_pack(s, eval);
  return curvature_field(e.eta_prime, e.eta_second);
}

double curvature_at_zero(Complex rho_prime, const EvalParams& eval) {
  const EtaPack e = eta_pack(rho_prime, eval);
  const Complex z2 = e.zeta[2];
  if (!(std::abs(z2) > 0)) fail(ErrorKind::derivative_zero, "zeta'' vanishes at the zero of zeta'");
  const double theta = e.log_h.imag() + std::arg(z2);
  return (std::polar(1.0, -theta) * (2.0 * e.h_log_deriv + e.zeta[3] / z2)).real();
}

double menger_curvature(Complex a, Complex b, Complex c) {
  const Complex u = b - a, v = c - b;
  const double cross = (std::conj(u) * v).imag();
  const double denom = std::abs(u) * std::abs(v) * std::abs(c - a);
  if (!(denom > 0)) fail(ErrorKind::invalid_argument, "coincident points");
  return 2.0 * cross / denom;
}

std::vector<Complex> local_level_polyline(Complex rho_prime, double half_length, double spacing,
                                          const EvalParams& eval) {
  require_positive_finite(half_length, "half_length");
  require_positive_finite(spacing, "spacing");
  auto ray = [&](int sign) {
    const EtaPack e = eta_pack(rho_prime, eval);
    const Complex start =
        rho_prime + spacing * double(sign) * Complex(0.0, 1.0) * std::polar(1.0, -std::arg(e.eta_prime));
    TracerOptions opt;
    opt.eval = eval;
    opt.h_max = spacing;
    opt.h_min = std::min(opt.h_min, 0.25 * spacing);
    auto field = [&](Complex s) { return sample_eta(s, eval); };
    auto stop = [&](Complex, Complex, const FieldSample&, ContourTrace&) -> std::optional<Termination> {
      return std::nullopt;
    };
    return trace_phase_curve(start, sign * kPi / 2, 1, field, stop, half_length, opt).points;
  };
  const auto purple = ray(-1), green = ray(+1);
  std::vector<Complex> out(purple.rbegin(), purple.rend());
  out.push_back(rho_prime);
  out.insert(out.end(), green.begin(), green.end());
  return out;
}

double polyline_curvature_at_zero(Complex rho_prime, double r, const EvalParams& eval) {
  require_positive_finite(r, "r");
  // green to purple, so that the sign agrees with curvature_field
  auto at = [&](double d) { return menger_curvature(ray_point(rho_prime, +1, d, eval), rho_prime,
                                                    ray_point(rho_prime, -1, d, eval)); };
  return 2.0 * at(0.5 * r) - at(r);
}

Chord chord_length(double beta_prime, double kappa) {
  const double x = beta_prime - 0.5;
  if (!(x >= 0)) fail(ErrorKind::invalid_argument, "beta' must be at least 1/2");
  const double k = std::abs(kappa);
  if (!(k > 0)) fail(ErrorKind::geometry_infeasible, "zero curvature has no osculating circle");
  const double radicand = x * (2.0 / k - x);
  if (radicand < 0) fail(ErrorKind::geometry_infeasible, "osculating circle does not reach the critical line");
  return {2.0 * std::sqrt(radicand), std::pow(2.0, 1.5) * std::sqrt(x / k)};
}

ThetaLimit theta_limit(Complex rho_prime, double h, const EvalParams& eval) {
  require_positive_finite(h, "h");
  ThetaLimit out;
  const EtaPack e0 = eta_pack(rho_prime, eval);
  if (!(std::abs(e0.zeta[2]) > 0)) fail(ErrorKind::derivative_zero, "zeta'' vanishes at the zero of zeta'");
  out.theta = wrap_angle(e0.log_h.imag() + std::arg(e0.zeta[2]));
  double prev = 0;
  for (int k = 0; k < 4; ++k) {
    const Complex s(rho_prime.real() - (k + 1) * h, rho_prime.imag());
    const double a = std::arg(eta_pack(s, eval).eta);
    out.samples[static_cast<std::size_t>(k)] = k == 0 ? a : prev + wrap_angle(a - prev);
    prev = out.samples[static_cast<std::size_t>(k)];
  }
  const auto& a = out.samples;
  const double limit = 4.0 * a[0] - 6.0 * a[1] + 4.0 * a[2] - a[3];
  // residual wobble below 1e-6 rad is a flat arg, not a failed extrapolation
  for (int k = 1; k < 4; ++k) {
    const double r0 = std::abs(a[static_cast<std::size_t>(k - 1)] - limit);
    const double r1 = std::abs(a[static_cast<std::size_t>(k)] - limit);
    if (r1 + 1e-6 < r0) fail(ErrorKind::extrapolation_unstable, "arg eta does not approach its limit monotonically");
  }
  out.limit_arg = wrap_angle(limit);
  out.defect = wrap_angle(out.limit_arg - out.theta - kPi);
  return out;
}

std::string_view to_string(SumIdentity id) noexcept {
  switch (id) {
    case SumIdentity::fund: return "fund";
    case SumIdentity::fan_ge_F: return "fan_ge_F";
    case SumIdentity::prop13: return "prop13";
  }
  return "unknown";
}

double tail_model(double g, double H, double c) {
  const double four_pi = 4.0 * kPi;
  auto A = [&](double tau) { return -std::log(tau / four_pi) / (tau - g) + std::log(std::abs(tau - g) / tau) / g; };
  double v = -A(g + H);
  if (g - H > four_pi) v += A(g - H) - A(four_pi);
  v += std::log1p(g / four_pi) / g;  // conjugate zeros
  return c * v / kTwoPi;
}

IdentityResidualReport sum_identity_residual(SumIdentity which, const ZeroRecord& anchor, const Catalog& catalog,
                                             double H, const EvalParams& eval) {
  IdentityResidualReport rep;
  rep.identity = which;
  rep.window_halfwidth = H;
  switch (which) {
    case SumIdentity::fund: {
      if (anchor.kind != ZeroKind::deriv1 || !anchor.spira_partner)
        fail(ErrorKind::invalid_argument, "fund needs a zero of zeta' with its Spira partner");
      const Complex rho2 = *anchor.spira_partner;
      const WindowZeros w = window_zeros(catalog, rho2.imag(), H, anchor.location, true);
      double sum = (1.0 / (rho2 - anchor.location)).real();
      for (Complex l : w.zeros) sum += (1.0 / (rho2 - l)).real();
      rep.tail_estimate = tail_model(rho2.imag(), H, rho2.real() - w.mean_beta);
      rep.terms = static_cast<int>(w.zeros.size()) + 1;
      rep.lhs = sum + rep.tail_estimate;
      rep.rhs = 0.5 * std::log(rho2.imag() / kPi);
      break;
    }
    case SumIdentity::fan_ge_F: {
      const double t = anchor.gamma();
      const WindowZeros w = window_zeros(catalog, t, H, anchor.location, false);
      const Complex s(0.5, t);
      double sum = 0;
      for (Complex l : w.zeros) sum += (1.0 / (l - s)).real();
      rep.tail_estimate = tail_model(t, H, w.mean_beta - 0.5);
      rep.terms = static_cast<int>(w.zeros.size());
      rep.correction = fan_ge_correction(t);
      rep.lhs = F_crit(t, eval);
      rep.rhs = sum + rep.tail_estimate + 0.5 * std::log(2.0) + rep.correction;
      break;
    }
    case SumIdentity::prop13: {
      if (anchor.kind != ZeroKind::deriv1) fail(ErrorKind::invalid_argument, "prop13 needs a zero of zeta'");
      const LineOffsetSum sc = line_offset_sum(anchor, catalog, H);
      const EtaPack e = eta_pack(anchor.location, eval);
      if (!(std::abs(e.zeta[2]) > 0)) fail(ErrorKind::derivative_zero, "zeta'' vanishes at the zero of zeta'");
      rep.lhs = (2.0 * e.h_log_deriv + e.zeta[3] / e.zeta[2]).real();
      rep.tail_estimate = sc.tail;
      rep.terms = sc.terms;
      rep.rhs = -std::log(2.0) - 2.0 * sc.sum;
      break;
    }
  }
  rep.residual = std::abs(rep.lhs - rep.rhs);
  return rep;
}

LineOffsetSum line_offset_sum(const ZeroRecord& rho_prime, const Catalog& catalog, double H) {
  if (rho_prime.kind != ZeroKind::deriv1) fail(ErrorKind::invalid_argument, "line_offset_sum needs a zero of zeta'");
  const double g = rho_prime.gamma();
  const WindowZeros w = window_zeros(catalog, g, H, rho_prime.location, true);
  const Complex s(0.5, g);
  LineOffsetSum out;
  out.min_term = w.zeros.empty() ? 0.0 : INFINITY;
  double sum = 0;
  for (Complex l : w.zeros) {
    const double term = (1.0 / (l - s)).real();
    out.min_term = std::min(out.min_term, term);
    sum += term;
  }
  out.terms = static_cast<int>(w.zeros.size());
  out.tail = tail_model(g, H, w.mean_beta - 0.5);
  out.sum = sum + out.tail;
  out.ratio = out.sum / std::log(g);
  return out;
}

double integral_F_gap(double gamma_lo, double gamma_hi, double tol, const EvalParams& eval) {
  if (!(gamma_hi > gamma_lo) || !(gamma_lo > 4.0)) fail(ErrorKind::invalid_argument, "need 4 < gamma_lo < gamma_hi");
  require_positive_finite(tol, "tol");
  return adaptive_simpson([&](double t) { return F_crit(t, eval); }, gamma_lo, gamma_hi, tol);
}

double integral_F_gap(const std::vector<ZeroRecord>& critical, int n, double tol, const EvalParams& eval) {
  if (n < 1 || static_cast<std::size_t>(n) >= critical.size())
    fail(ErrorKind::invalid_argument, "gap index outside the catalog");
  const auto& a = critical[static_cast<std::size_t>(n - 1)];
  const auto& b = critical[static_cast<std::size_t>(n)];
  if (a.kind != ZeroKind::critical || b.kind != ZeroKind::critical)
    fail(ErrorKind::invalid_argument, "gap endpoints must be critical zeros");
  return integral_F_gap(a.gamma(), b.gamma(), tol, eval);
}

Type2Triple rescaled_coords(double gamma_minus, double gamma_plus, Complex rho_prime) {
  if (!(gamma_plus > gamma_minus) || !(gamma_minus > 0))
    fail(ErrorKind::invalid_argument, "need 0 < gamma^- < gamma^+");
  Type2Triple tr;
  tr.gamma_minus = gamma_minus;
  tr.gamma_plus = gamma_plus;
  tr.rho_prime = rho_prime;
  tr.t0 = 0.5 * (gamma_plus + gamma_minus);
  tr.Delta = gamma_plus - gamma_minus;
  tr.Y = rho_prime.imag() - tr.t0;
  tr.lambda = std::log(tr.t0 / kTwoPi);
  tr.x = (rho_prime.real() - 0.5) * tr.lambda;
  tr.y = tr.Y * tr.lambda;
  tr.delta = tr.Delta * tr.lambda / kTwoPi;
  tr.x_predicted = 0.25 * kPi * kPi * (1.0 - std::log(kPi) / tr.lambda) * tr.delta * tr.delta;
  tr.straddles = gamma_minus < rho_prime.imag() && rho_prime.imag() < gamma_plus;
  return tr;
}

Type2Triple rescaled_coords(const ZeroRecord& rho_prime) {
  if (rho_prime.kind != ZeroKind::deriv1 || rho_prime.type_class != ZeroType::T2 || !rho_prime.paired_crossings)
    fail(ErrorKind::invalid_argument, "rescaled_coords needs a classified type-2 zero");
  return rescaled_coords(rho_prime.paired_crossings->first, rho_prime.paired_crossings->second, rho_prime.location);
}

Complex rho2_displacement(Complex rho_prime, Complex rho_second) {
  const double L = std::log(rho_prime.imag());
  if (!(L > 0)) fail(ErrorKind::invalid_argument, "rho' must lie above t = 1");
  return L * (rho_second - rho_prime - 1.0 / L);
}

std::array<DisplacementQuartile, 4> displacement_quartiles(const std::vector<ZeroRecord>& zeros) {
  std::vector<std::pair<double, Complex>> pts;
  for (const auto& z : zeros) {
    if (z.kind != ZeroKind::deriv1 || !z.spira_partner) continue;
    pts.emplace_back((z.beta() - 0.5) * std::log(z.gamma()), rho2_displacement(z.location, *z.spira_partner));
  }
  if (pts.empty()) fail(ErrorKind::empty_input, "no zeros with a Spira partner");
  std::vector<double> keys;
  for (const auto& p : pts) keys.push_back(p.first);
  std::sort(keys.begin(), keys.end());
  const double cuts[5] = {keys.front(), quantile_type7(keys, 0.25), quantile_type7(keys, 0.5),
                          quantile_type7(keys, 0.75), keys.back()};
  std::array<DisplacementQuartile, 4> q;
  for (int i = 0; i < 4; ++i) {
    q[static_cast<std::size_t>(i)].lo = cuts[i];
    q[static_cast<std::size_t>(i)].hi = cuts[i + 1];
  }
  for (const auto& [key, w] : pts) {
    int i = 0;
    while (i < 3 && key > cuts[i + 1]) ++i;
    q[static_cast<std::size_t>(i)].w.push_back(w);
  }
  for (auto& d : q) {
    if (d.w.empty()) continue;
    double m = 0, m2 = 0;
    for (Complex w : d.w) {
      m += std::abs(w);
      m2 += std::norm(w);
    }
    const double n = double(d.w.size());
    d.mean_abs = m / n;
    d.var_abs = std::max(0.0, m2 / n - d.mean_abs * d.mean_abs);
  }
  return q;
}

}  // namespace eta
