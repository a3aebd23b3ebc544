#include "eta/zeta_zeros.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <bit>
#include <sstream>

namespace eta {

std::string_view to_string(ZeroKind kind) noexcept {
  switch (kind) {
    case ZeroKind::critical: return "critical";
    case ZeroKind::deriv1: return "deriv1";
    case ZeroKind::deriv2: return "deriv2";
    case ZeroKind::real_axis: return "real_axis";
  }
  return "unknown";
}

std::string_view to_string(ZeroType type) noexcept {
  switch (type) {
    case ZeroType::T0: return "T0";
    case ZeroType::T1: return "T1";
    case ZeroType::T2: return "T2";
  }
  return "unknown";
}

void SearchBox::validate() const {
  if (!(sigma_min < sigma_max) || !(t_min < t_max))
    fail(ErrorKind::invalid_argument, "search box is empty");
}

bool SearchBox::contains(Complex s, double slack) const {
  return s.real() >= sigma_min - slack && s.real() <= sigma_max + slack && s.imag() >= t_min - slack &&
         s.imag() <= t_max + slack;
}

namespace {

using boost::math::tools::eps_tolerance;
using boost::math::tools::toms748_solve;

template <class G>
double bracketed_root(G&& g, double a, double b, double ga, double gb) {
  std::uintmax_t iters = 200;
  auto r = toms748_solve(g, a, b, ga, gb, eps_tolerance<double>(52), iters);
  if (iters >= 200) fail(ErrorKind::root_solver_nonconvergence, "bracketed root iteration did not converge");
  return 0.5 * (r.first + r.second);
}

// --- critical line ---------------------------------------------------------

struct LinePoint {
  double t;
  double phase;  // unwrapped arg eta(1/2 + it)
  double F;
  Complex eta;   // eta / |h|
};

LinePoint line_point(double t, const EvalParams& eval) {
  const EtaPack e = eta_pack({0.5, t}, eval);
  if (e.zeta[1] == Complex(0.0, 0.0)) fail(ErrorKind::derivative_zero, "zeta' vanishes on the critical line");
  return {t, std::arg(e.eta), -e.log_deriv().real(), e.eta};
}

double integral_of_F(double t0, double t1, const EvalParams& eval) {
  // Unit panels keep Simpson from being fooled by a coarse first sample.
  const int panels = std::max(1, static_cast<int>(std::ceil(t1 - t0)));
  const double w = (t1 - t0) / panels;
  double total = 0;
  for (int k = 0; k < panels; ++k) {
    const double a = t0 + k * w, b = (k + 1 == panels) ? t1 : a + w;
    total += adaptive_simpson([&](double t) { return F_crit(t, eval); }, a, b, 1e-6 * w / (t1 - t0));
  }
  return total;
}

// Number of lattice points pi/2 + k pi in the half-open interval (lo, hi].
long lattice_points(double lo, double hi) {
  return static_cast<long>(std::floor((hi - kPi / 2) / kPi) - std::floor((lo - kPi / 2) / kPi));
}

bool scan_line(double t0, double t1, double step, const EvalParams& eval, std::vector<ZeroRecord>& out,
               double& phase_change) {
  out.clear();
  LinePoint p = line_point(t0, eval);
  const double phase0 = p.phase;
  while (p.t < t1) {
    double dt = std::min(step, t1 - p.t);
    LinePoint q;
    for (;;) {
      q = line_point(p.t + dt, eval);
      const double delta = wrap_angle(q.phase - p.phase);
      const double predicted = -0.5 * dt * (p.F + q.F);
      if (std::abs(delta - predicted) < 0.3 && std::abs(delta) < kPi / 2) {
        q.phase = p.phase + delta;
        break;
      }
      dt *= 0.5;
      if (dt < 1e-10) fail(ErrorKind::edge_proximity, "phase of eta on the critical line is not resolvable");
    }
    const double target = kPi / 2 + kPi * std::floor((p.phase - kPi / 2) / kPi);
    if (target > q.phase && q.t <= t1) {
      auto g = [&](double t) { return eta_pack({0.5, t}, eval).eta.real(); };
      const double ga = p.eta.real(), gb = q.eta.real();
      double root;
      if (ga == 0.0) {
        root = p.t;
      } else if (gb == 0.0) {
        root = q.t;
      } else {
        if ((ga > 0) == (gb > 0)) return false;
        root = bracketed_root(g, p.t, q.t, ga, gb);
      }
      if (root > t0 && root < t1) {
        ZeroRecord z;
        z.location = Complex(0.5, root);
        z.kind = ZeroKind::critical;
        z.index = static_cast<int>(out.size()) + 1;
        z.refine_residual = std::abs(g(root));
        out.push_back(z);
      }
    }
    p = q;
  }
  phase_change = p.phase - phase0;
  return true;
}

// --- argument principle ----------------------------------------------------

struct LogDeriv {
  Complex f;
  Complex dlog;
};

LogDeriv log_deriv_at(Complex s, int order, const EvalParams& eval) {
  EvalParams p = eval;
  p.derivative_order_max = order + 1;
  const ZetaPack z = zeta_pack(s, p);
  if (z[order] == Complex(0.0, 0.0)) fail(ErrorKind::edge_proximity, "contour passes through a zero");
  return {z[order], z[order + 1] / z[order]};
}

double edge_phase(Complex a, Complex b, int order, const EvalParams& eval) {
  const Complex dir = b - a;
  const double length = std::abs(dir);
  const double base = std::min(0.25, length);
  double u = 0;
  LogDeriv p = log_deriv_at(a, order, eval);
  double total = 0;
  while (u < 1.0) {
    double du = std::min(base / length, 1.0 - u);
    for (;;) {
      const double un = (u + du >= 1.0) ? 1.0 : u + du;
      const LogDeriv q = log_deriv_at(un == 1.0 ? b : a + un * dir, order, eval);
      const double delta = wrap_angle(std::arg(q.f) - std::arg(p.f));
      const double predicted = 0.5 * (un - u) * ((p.dlog + q.dlog) * dir).imag();
      if (std::abs(delta - predicted) < 0.3 && std::abs(delta) < kPi / 2) {
        total += delta;
        u = un;
        p = q;
        break;
      }
      du *= 0.5;
      if (du * length < 1e-10) fail(ErrorKind::edge_proximity, "zero within 1e-10 of a contour edge");
    }
  }
  return total;
}

int winding(const SearchBox& box, int order, const EvalParams& eval) {
  const Complex c00(box.sigma_min, box.t_min), c10(box.sigma_max, box.t_min), c11(box.sigma_max, box.t_max),
      c01(box.sigma_min, box.t_max);
  const double total = edge_phase(c00, c10, order, eval) + edge_phase(c10, c11, order, eval) +
                       edge_phase(c11, c01, order, eval) + edge_phase(c01, c00, order, eval);
  const double turns = total / kTwoPi;
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.05) {
    std::ostringstream msg;
    msg << "non-integer winding " << turns << " on box [" << box.sigma_min << "," << box.sigma_max << "]x["
        << box.t_min << "," << box.t_max << "]";
    fail(ErrorKind::count_mismatch, msg.str());
  }
  return static_cast<int>(rounded);
}

// Deterministic jitter in [-1, 1] from box coordinates and an attempt number.
double jitter(const SearchBox& box, int attempt) {
  std::uint64_t x = std::bit_cast<std::uint64_t>(box.sigma_min) ^ (std::bit_cast<std::uint64_t>(box.t_min) << 1) ^
                    (static_cast<std::uint64_t>(attempt) * 0x9e3779b97f4a7c15ULL);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return static_cast<double>(x >> 11) * 0x1.0p-52 - 1.0;
}

std::optional<Complex> newton_in_box(const SearchBox& box, int order, const DerivativeZeroOptions& opt,
                                     double& residual) {
  Complex z(0.5 * (box.sigma_min + box.sigma_max), 0.5 * (box.t_min + box.t_max));
  const double slack = 1e-9 * std::max(1.0, std::abs(z));
  for (int it = 0; it < 60; ++it) {
    const LogDeriv d = log_deriv_at(z, order, opt.eval);
    const Complex step = 1.0 / d.dlog;
    z -= step;
    if (!box.contains(z, slack)) return std::nullopt;
    if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(z))) break;
  }
  EvalParams p = opt.eval;
  p.derivative_order_max = order;
  residual = std::abs(zeta_pack(z, p)[order]);
  if (residual >= opt.newton_residual) return std::nullopt;
  return z;
}

struct Subdivider {
  int order;
  const DerivativeZeroOptions& opt;
  std::vector<ZeroRecord> zeros;
  int boxes = 0;

  int count(const SearchBox& b) {
    ++boxes;
    return winding(b, order, opt.eval);
  }

  void solve(const SearchBox& box, int n) {
    if (n == 0) return;
    if (n < 0) fail(ErrorKind::count_mismatch, "negative winding for an entire function");
    if (n == 1) {
      double residual = 0;
      if (auto z = newton_in_box(box, order, opt, residual)) {
        ZeroRecord r;
        r.location = *z;
        r.kind = order == 1 ? ZeroKind::deriv1 : ZeroKind::deriv2;
        r.refine_residual = residual;
        zeros.push_back(r);
        return;
      }
    }
    const double w = box.sigma_max - box.sigma_min, h = box.t_max - box.t_min;
    if (n >= 2 && std::max(w, h) < opt.min_box) {
      std::ostringstream msg;
      msg << "suspected multiple zero of order-" << order << " derivative near " << box.sigma_min << "+"
          << box.t_min << "i";
      fail(ErrorKind::multiple_zero, msg.str());
    }
    if (std::max(w, h) < 1e-12) fail(ErrorKind::root_solver_nonconvergence, "Newton failed on a tiny box");
    for (int attempt = 0; attempt < 8; ++attempt) {
      const double frac = 0.5 + 0.1 * jitter(box, attempt);
      SearchBox a = box, b = box;
      if (w >= h) {
        a.sigma_max = b.sigma_min = box.sigma_min + frac * w;
      } else {
        a.t_max = b.t_min = box.t_min + frac * h;
      }
      int na, nb;
      try {
        na = count(a);
        nb = count(b);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::edge_proximity || e.kind() == ErrorKind::count_mismatch) continue;
        throw;
      }
      if (na + nb != n) continue;
      solve(a, na);
      solve(b, nb);
      return;
    }
    fail(ErrorKind::count_mismatch, "sub-box counts never summed to the parent count");
  }
};

}  // namespace

std::vector<ZeroRecord> find_critical_zeros(double t0, double t1, const CriticalZeroOptions& options) {
  if (!(t0 > 7.0) || !(t1 > t0) || t1 > kHeightCap)
    fail(ErrorKind::invalid_argument, "find_critical_zeros requires 7 < t0 < t1 <= 5000");
  if (!(options.step > 0)) fail(ErrorKind::invalid_argument, "scan step must be positive");
  const double integral = integral_of_F(t0, t1, options.eval);
  const double phase0 = std::arg(eta_pack({0.5, t0}, options.eval).eta);
  const long expected = lattice_points(phase0 - integral, phase0);

  double step = options.step;
  std::vector<ZeroRecord> zeros;
  for (int attempt = 0; attempt <= options.max_refinements; ++attempt, step *= 0.5) {
    double change = 0;
    if (!scan_line(t0, t1, step, options.eval, zeros, change)) continue;
    if (std::abs(change + integral) < 0.01 && static_cast<long>(zeros.size()) == expected) return zeros;
  }
  std::ostringstream msg;
  msg << "critical zero count " << zeros.size() << " disagrees with the argument change ("
      << expected << " expected) on (" << t0 << ", " << t1 << ")";
  fail(ErrorKind::count_mismatch, msg.str());
}

int argument_principle_count(const SearchBox& box, int order, const EvalParams& eval) {
  box.validate();
  if (order < 0 || order > 2) fail(ErrorKind::invalid_argument, "order must be 0, 1 or 2");
  return winding(box, order, eval);
}

DerivativeZeroSearch find_derivative_zeros_report(const SearchBox& box, int order,
                                                  const DerivativeZeroOptions& options) {
  box.validate();
  if (order != 1 && order != 2) fail(ErrorKind::invalid_argument, "order must be 1 or 2");
  if (order == 1 && box.t_min <= 6.0) fail(ErrorKind::invalid_argument, "zeta' searches need t_min > 6");

  DerivativeZeroSearch result;
  result.contour_count = winding(box, order, options.eval);

  const double height = box.t_max - box.t_min;
  const int m = std::max(1, static_cast<int>(std::ceil(height / options.strip_height)));
  std::vector<double> cuts(m + 1);
  for (int k = 0; k <= m; ++k) cuts[k] = box.t_min + height * k / m;

  std::vector<std::vector<ZeroRecord>> per_strip(m);
  std::vector<int> strip_counts(m), strip_boxes(m);
  // Inner cuts that land too close to a zero are nudged; the nudge depends
  // only on the cut index so reruns are identical.
  for (int k = 1; k < m; ++k) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      try {
        edge_phase({box.sigma_min, cuts[k]}, {box.sigma_max, cuts[k]}, order, options.eval);
        break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::edge_proximity) throw;
        cuts[k] += 0.013 * (attempt + 1) * (attempt % 2 ? 1.0 : -1.0);
      }
    }
  }
  parallel_for(
      static_cast<std::size_t>(m),
      [&](std::size_t k) {
        const SearchBox strip{box.sigma_min, box.sigma_max, cuts[k], cuts[k + 1]};
        Subdivider sub{order, options, {}, 0};
        const int n = sub.count(strip);
        sub.solve(strip, n);
        strip_counts[k] = n;
        strip_boxes[k] = sub.boxes;
        per_strip[k] = std::move(sub.zeros);
      },
      options.threads);

  int strip_total = 0;
  for (int k = 0; k < m; ++k) {
    strip_total += strip_counts[k];
    result.boxes_examined += strip_boxes[k];
    for (auto& z : per_strip[k]) result.zeros.push_back(z);
  }
  std::sort(result.zeros.begin(), result.zeros.end(),
            [](const ZeroRecord& a, const ZeroRecord& b) { return a.gamma() < b.gamma(); });
  for (std::size_t i = 0; i < result.zeros.size(); ++i) result.zeros[i].index = static_cast<int>(i) + 1;

  if (strip_total != result.contour_count || static_cast<int>(result.zeros.size()) != result.contour_count) {
    std::ostringstream msg;
    msg << "outer contour counts " << result.contour_count << " zeros, strips " << strip_total << ", refined "
        << result.zeros.size();
    fail(ErrorKind::count_mismatch, msg.str());
  }
  return result;
}

std::vector<ZeroRecord> find_derivative_zeros(const SearchBox& box, int order,
                                              const DerivativeZeroOptions& options) {
  return find_derivative_zeros_report(box, order, options).zeros;
}

std::vector<double> real_negative_zeros(int n_max) {
  if (n_max < 1) fail(ErrorKind::invalid_argument, "n_max must be at least 1");
  const double log_two_pi = std::log(kTwoPi);
  // zeta'/zeta(x) via the functional equation; zeta has no zero inside
  // (-2n-2, -2n), so its zeros there are those of zeta'.
  auto g = [&](double x) {
    const double y = 1.0 - x;
    EvalParams p;
    p.derivative_order_max = 1;
    const ZetaPack z = zeta_pack(y, p);
    return log_two_pi + 0.5 * kPi / std::tan(0.5 * kPi * x) - digamma(y).real() - (z[1] / z[0]).real();
  };
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    const double lo = -2.0 * n - 2.0 + 1e-9, hi = -2.0 * n - 1e-9;
    const double glo = g(lo), ghi = g(hi);
    if (!(glo > 0 && ghi < 0)) {
      std::ostringstream msg;
      msg << "no sign change of zeta'/zeta on (" << -2 * n - 2 << ", " << -2 * n << ")";
      fail(ErrorKind::bracket_failure, msg.str());
    }
    const double x = bracketed_root(g, lo, hi, glo, ghi);
    if (std::abs(g(x)) >= 1e-10) fail(ErrorKind::root_solver_nonconvergence, "real zero residual too large");
    out.push_back(-x);
  }
  return out;
}

double critical_main_term(double T) {
  const double u = T / kTwoPi;
  return u * std::log(u) - u;
}

double deriv1_main_term(double T) {
  const double u = T / kTwoPi;
  return u * std::log(T / (4.0 * kPi)) - u;
}

WindowCensus window_census(double t0, double t1) {
  if (!(t0 > 7.0) || !(t1 >= t0)) fail(ErrorKind::invalid_argument, "window_census requires 7 < t0 <= t1");
  WindowCensus c;
  c.critical_main_term = critical_main_term(t1) - critical_main_term(t0);
  c.deriv1_main_term = deriv1_main_term(t1) - deriv1_main_term(t0);
  if (t1 == t0) return c;
  c.critical = static_cast<int>(find_critical_zeros(t0, t1).size());
  c.deriv1 = static_cast<int>(
      find_derivative_zeros({kDeriv1SigmaMin, kDeriv1SigmaMax, t0, t1}, 1).size());
  return c;
}

}  // namespace eta
