#include "eta/level_curves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eta {

std::string_view to_string(TraceColor c) noexcept {
  switch (c) {
    case TraceColor::green: return "green";
    case TraceColor::purple: return "purple";
    case TraceColor::none: return "none";
  }
  return "unknown";
}

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::crossed_critical_line: return "crossed_critical_line";
    case Termination::crossed_unit_circle: return "crossed_unit_circle";
    case Termination::left_domain: return "left_domain";
    case Termination::reached_pole_region: return "reached_pole_region";
    case Termination::arc_cap_exceeded: return "arc_cap_exceeded";
    case Termination::hit_singular_point: return "hit_singular_point";
    case Termination::reached_zero: return "reached_zero";
  }
  return "unknown";
}

namespace {

constexpr double kLogTwo = 0.69314718055994530941723212145817657;
constexpr double kDomainSigmaMin = -8.0;
constexpr double kDomainSigmaMax = 12.0;
constexpr double kCriticalMinHeight = 7.0;
constexpr double kZeroLevel = -7.0;  // log|f| below which a decreasing trace switches to Newton

Complex residual(const FieldSample& f, double level, double phase) {
  return {f.log_value.real() - level, wrap_angle(f.log_value.imag() - phase)};
}

// Complex Newton on L(z) = level + i phase. Returns false if it does not settle.
bool correct(const FieldFn& field, Complex& z, FieldSample& fz, double level, double phase, double tol) {
  for (int it = 0; it < 12; ++it) {
    const Complex r = residual(fz, level, phase);
    if (std::abs(r.imag()) < tol && std::abs(r.real()) < 1e-6 && it > 0) return true;
    if (!std::isfinite(std::abs(fz.log_deriv)) || fz.log_deriv == Complex(0.0, 0.0)) return false;
    z -= r / fz.log_deriv;
    fz = field(z);
  }
  return std::abs(residual(fz, level, phase).imag()) < tol;
}

double abs_curvature(const FieldSample& f) {
  if (!f.has_second) return 0.0;
  const Complex d = f.log_deriv;
  return std::abs(d) * std::abs((f.second_ratio / (d * d)).imag());
}

Complex newton_on_zeta_derivative(Complex z, int order, const EvalParams& eval, double& residual_out) {
  EvalParams p = eval;
  p.derivative_order_max = order + 1;
  for (int it = 0; it < 40; ++it) {
    const ZetaPack zp = zeta_pack(z, p);
    const Complex step = zp[order] / zp[order + 1];
    z -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  p.derivative_order_max = order;
  residual_out = std::abs(zeta_pack(z, p)[order]);
  return z;
}

// Ordinate where arg eta(1/2 + it) = phase, starting near t.
double refine_crossing(double t, double phase, const EvalParams& eval) {
  for (int it = 0; it < 30; ++it) {
    const EtaPack e = eta_pack({0.5, t}, eval);
    const double g = wrap_angle(e.log_eta().imag() - phase);
    const double dg = e.log_deriv().real();  // d/dt arg eta = Re eta'/eta = -F
    if (dg == 0.0) break;
    double step = g / dg;
    step = std::clamp(step, -0.25, 0.25);
    t -= step;
    if (std::abs(step) < 1e-13 * std::max(1.0, t)) break;
  }
  return t;
}

}  // namespace

FieldSample sample_eta(Complex s, const EvalParams& eval) {
  const EtaPack e = eta_pack(s, eval);
  if (e.zeta[1] == Complex(0.0, 0.0)) fail(ErrorKind::derivative_zero, "eta sampled at a zero");
  FieldSample f;
  f.log_value = e.log_eta();
  f.log_deriv = e.log_deriv();
  f.second_ratio = e.eta_second / e.eta;
  f.has_second = true;
  return f;
}

FieldSample sample_zpp_over_zp(Complex s, const EvalParams& eval) {
  EvalParams p = eval;
  p.derivative_order_max = 3;
  const ZetaPack z = zeta_pack(s, p);
  if (z[1] == Complex(0.0, 0.0) || z[2] == Complex(0.0, 0.0))
    fail(ErrorKind::derivative_zero, "zeta''/zeta' sampled at a zero or pole");
  FieldSample f;
  f.log_value = std::log(z[2]) - std::log(z[1]);
  f.log_deriv = z[3] / z[2] - z[2] / z[1];
  return f;
}

FieldSample sample_G(Complex s, const EvalParams& eval) {
  EvalParams p = eval;
  p.derivative_order_max = 3;
  const ZetaPack z = zeta_pack(s, p);
  if (z[1] == Complex(0.0, 0.0)) fail(ErrorKind::derivative_zero, "G sampled at a zero");
  FieldSample f;
  f.log_value = s * kLogTwo + std::log(-z[1] / kLogTwo);
  f.log_deriv = kLogTwo + z[2] / z[1];
  f.second_ratio = (kLogTwo * kLogTwo * z[1] + 2.0 * kLogTwo * z[2] + z[3]) / z[1];
  f.has_second = true;
  return f;
}

ContourTrace trace_phase_curve(Complex start, double phase, int direction, const FieldFn& field,
                               const TraceEvent& event, double arc_cap, const TracerOptions& opt) {
  if (direction != 1 && direction != -1) fail(ErrorKind::invalid_argument, "direction must be +1 or -1");
  ContourTrace tr;
  Complex s = start;
  FieldSample fs = field(s);
  const double level0 = fs.log_value.real();
  if (!correct(field, s, fs, level0, phase, opt.residual_tol)) {
    tr.termination = Termination::hit_singular_point;
    tr.end = s;
    return tr;
  }
  tr.points.push_back(s);
  tr.max_residual = std::abs(residual(fs, level0, phase).imag());
  tr.min_step = opt.h_max;
  double unwrapped = fs.log_value.imag();
  const double arg0 = unwrapped;

  for (;;) {
    const double dnorm = std::abs(fs.log_deriv);
    // near a simple zero 1/|L'| is the distance to it; hand over to Newton
    if (direction < 0 && dnorm * 2.0 * opt.h_min > 1.0) {
      tr.termination = Termination::reached_zero;
      tr.end = s;
      break;
    }
    const double kappa = abs_curvature(fs);
    double h = opt.h_max;
    if (kappa > 0) h = std::min(h, 0.1 / kappa);
    h = std::min(h, 0.5 / dnorm);
    h = std::clamp(h, opt.h_min, opt.h_max);

    Complex z;
    FieldSample fz;
    bool ok = false;
    for (;;) {
      const Complex u = double(direction) * std::conj(fs.log_deriv) / dnorm;
      const Complex pred = s + h * u;
      const double level = fs.log_value.real() + direction * dnorm * h;
      z = pred;
      fz = field(z);
      if (correct(field, z, fz, level, phase, opt.residual_tol) && std::abs(z - pred) < 0.5 * h) {
        ok = true;
        break;
      }
      if (h <= opt.h_min * 1.000001) break;
      h = std::max(opt.h_min, 0.5 * h);
    }
    if (!ok || std::abs(fz.log_deriv) < opt.singular_tol) {
      tr.termination = Termination::hit_singular_point;
      tr.end = ok ? z : s;
      break;
    }
    unwrapped += wrap_angle(fz.log_value.imag() - fs.log_value.imag());
    tr.max_residual = std::max(tr.max_residual, std::abs(wrap_angle(fz.log_value.imag() - phase)));
    tr.min_step = std::min(tr.min_step, h);
    tr.arc_length += std::abs(z - s);
    if (opt.keep_points) tr.points.push_back(z);
    const Complex prev = s;
    s = z;
    fs = fz;
    if (auto stop = event(prev, s, fs, tr)) {
      tr.termination = *stop;
      if (tr.end == Complex(0.0, 0.0)) tr.end = s;
      break;
    }
    if (tr.arc_length > arc_cap) {
      tr.termination = Termination::arc_cap_exceeded;
      tr.end = s;
      break;
    }
  }
  if (!opt.keep_points && tr.points.back() != tr.end) tr.points.push_back(tr.end);
  tr.phase_log = unwrapped - arg0;
  return tr;
}

namespace {

// Re eta = 0 trace from a zero of zeta' inside a classification domain.
ContourTrace trace_eta_ray(Complex rho, int sign, const SearchBox& domain, const TracerOptions& opt) {
  const EtaPack e = eta_pack(rho, opt.eval);
  const double theta = std::arg(e.eta_prime);
  const double phase = sign * kPi / 2;
  double r = opt.start_radius;
  const double ratio = std::abs(e.eta_second / e.eta_prime);
  if (ratio > 1.0) r /= ratio;
  const Complex start = rho + r * double(sign) * Complex(0.0, 1.0) * std::polar(1.0, -theta);
  auto field = [&](Complex s) { return sample_eta(s, opt.eval); };
  auto event = [&](Complex prev, Complex cur, const FieldSample&, ContourTrace& tr) -> std::optional<Termination> {
    if (cur.real() <= 0.5) {
      const double w = (prev.real() - 0.5) / (prev.real() - cur.real());
      const double t_lin = prev.imag() + w * (cur.imag() - prev.imag());
      const double t = refine_crossing(t_lin, phase, opt.eval);
      tr.crossing = t;
      tr.end = Complex(0.5, t);
      return Termination::crossed_critical_line;
    }
    if (std::abs(cur - 1.0) < 0.25) return Termination::reached_pole_region;
    if (cur.real() >= domain.sigma_max) {
      tr.side = "right";
      return Termination::left_domain;
    }
    if (cur.real() <= domain.sigma_min) {
      tr.side = "left";
      return Termination::left_domain;
    }
    if (cur.imag() < domain.t_min) {
      tr.side = "bottom";
      return Termination::left_domain;
    }
    if (cur.imag() > domain.t_max) {
      tr.side = "top";
      return Termination::left_domain;
    }
    return std::nullopt;
  };
  ContourTrace tr = trace_phase_curve(start, phase, 1, field, event, opt.arc_cap_factor * domain.perimeter(), opt);
  tr.color = sign > 0 ? TraceColor::green : TraceColor::purple;
  if (opt.keep_points) tr.points.insert(tr.points.begin(), rho);
  return tr;
}

bool is_verdict(const ContourTrace& tr) {
  return tr.termination == Termination::crossed_critical_line || tr.termination == Termination::reached_pole_region ||
         (tr.termination == Termination::left_domain && tr.side == "right");
}

}  // namespace

SearchBox classification_domain(const ZeroRecord& rho_prime) {
  return {kDomainSigmaMin, kDomainSigmaMax, std::max(1.0, rho_prime.gamma() - 25.0), rho_prime.gamma() + 25.0};
}

ContourTrace trace_level_curve(Complex start, int tangent_sign, TraceField field, const SearchBox& domain,
                               const TracerOptions& options) {
  domain.validate();
  if (tangent_sign != 1 && tangent_sign != -1) fail(ErrorKind::invalid_argument, "tangent_sign must be +1 or -1");
  switch (field) {
    case TraceField::re_eta: return trace_eta_ray(start, tangent_sign, domain, options);
    case TraceField::im_zpp_over_zp: {
      ZeroRecord z;
      z.location = start;
      z.kind = ZeroKind::deriv1;
      return spira_map(z, options).trace;
    }
    case TraceField::im_G: {
      auto f = [&](Complex s) { return sample_G(s, options.eval); };
      auto event = [&](Complex, Complex cur, const FieldSample& fs, ContourTrace& tr) -> std::optional<Termination> {
        if (fs.log_value.real() < kZeroLevel) return Termination::reached_zero;
        if (!domain.contains(cur)) {
          tr.side = cur.real() < domain.sigma_min ? "left" : cur.real() > domain.sigma_max ? "right"
                    : cur.imag() < domain.t_min  ? "bottom" : "top";
          return Termination::left_domain;
        }
        return std::nullopt;
      };
      return trace_phase_curve(start, 0.0, -1, f, event, options.arc_cap_factor * domain.perimeter(), options);
    }
  }
  fail(ErrorKind::invalid_argument, "unknown trace field");
}

TypeClassification classify_zero(const ZeroRecord& rho_prime, const SearchBox& domain,
                                 const std::vector<double>& critical_ordinates, const TracerOptions& options) {
  if (rho_prime.kind != ZeroKind::deriv1) fail(ErrorKind::invalid_argument, "classify_zero needs a zero of zeta'");
  domain.validate();
  TypeClassification c;
  c.zero_index = rho_prime.index;
  c.location = rho_prime.location;

  auto run = [&](int sign) {
    SearchBox box = domain;
    ContourTrace tr;
    for (int widen = 0; widen < 4; ++widen) {
      tr = trace_eta_ray(rho_prime.location, sign, box, options);
      if (is_verdict(tr)) break;
      if (tr.termination != Termination::left_domain) break;
      const double margin = 2.0 * (box.t_max - box.t_min);
      box.t_min = std::max(1.0, rho_prime.gamma() - margin);
      box.t_max = rho_prime.gamma() + margin;
    }
    tr.origin = rho_prime.index;
    return tr;
  };
  c.green = run(+1);
  c.purple = run(-1);

  for (const ContourTrace* tr : {&c.green, &c.purple}) {
    if (!is_verdict(*tr)) {
      c.resolved = false;
      std::ostringstream msg;
      msg << to_string(tr->color) << " trace ended " << to_string(tr->termination) << (tr->side.empty() ? "" : " ")
          << tr->side << " at " << tr->end;
      c.note = msg.str();
      continue;
    }
    if (tr->termination != Termination::crossed_critical_line) continue;
    const double g = *tr->crossing;
    // Re eta(1/2 + it) = 0 characterizes zeros of zeta only for t > 7.
    if (g <= kCriticalMinHeight) continue;
    if (!critical_ordinates.empty() && g >= critical_ordinates.front() - 1e-6 && g <= critical_ordinates.back() + 1e-6) {
      auto it = std::lower_bound(critical_ordinates.begin(), critical_ordinates.end(), g);
      double best = 1e300;
      if (it != critical_ordinates.end()) best = std::abs(*it - g);
      if (it != critical_ordinates.begin()) best = std::min(best, std::abs(*(it - 1) - g));
      if (best > 1e-6) {
        std::ostringstream msg;
        msg << "crossing at t = " << g << " from the zero of zeta' at " << rho_prime.location
            << " matches no critical zero (nearest " << best << " away)";
        fail(ErrorKind::bijectivity_failure, msg.str());
      }
    }
    c.crossings.push_back(g);
  }
  std::sort(c.crossings.begin(), c.crossings.end());
  c.type_class = static_cast<ZeroType>(c.crossings.size());
  return c;
}

WindowClassification classify_window(double t0, double t1, const ClassifyWindowOptions& options) {
  if (!(t0 > 7.0) || !(t1 > t0) || t1 > kHeightCap - 100)
    fail(ErrorKind::invalid_argument, "classify_window requires 7 < t0 < t1 <= 4900");
  const double widen = 50.0 / std::log(t0);
  const double lo = std::max(7.5, t0 - widen), hi = t1 + widen;

  WindowClassification out;
  out.critical_widened = find_critical_zeros(lo, hi);
  DerivativeZeroOptions dopt;
  dopt.threads = options.threads;
  dopt.eval = options.tracer.eval;
  out.deriv1_widened = find_derivative_zeros({kDeriv1SigmaMin, kDeriv1SigmaMax, lo, hi}, 1, dopt);

  std::vector<double> ordinates;
  ordinates.reserve(out.critical_widened.size());
  for (const auto& z : out.critical_widened) ordinates.push_back(z.gamma());

  TracerOptions topt = options.tracer;
  topt.keep_points = options.keep_traces;
  out.classifications.resize(out.deriv1_widened.size());
  parallel_for(
      out.deriv1_widened.size(),
      [&](std::size_t i) {
        const ZeroRecord& z = out.deriv1_widened[i];
        out.classifications[i] = classify_zero(z, classification_domain(z), ordinates, topt);
      },
      options.threads);

  // Snap the window ends to cuts that no zero-with-its-crossings straddles.
  struct Span {
    double lo, hi;
  };
  std::vector<Span> spans;
  for (const auto& c : out.classifications) {
    if (!c.resolved || c.crossings.empty()) continue;
    Span s{c.location.imag(), c.location.imag()};
    for (double g : c.crossings) {
      s.lo = std::min(s.lo, g);
      s.hi = std::max(s.hi, g);
    }
    spans.push_back(s);
  }
  double c0 = t0, c1 = t1;
  for (bool moved = true; moved;) {
    moved = false;
    for (const Span& s : spans) {
      if (s.lo < c1 && c1 < s.hi) c1 = s.hi, moved = true;
      if (s.lo < c0 && c0 < s.hi) c0 = s.lo, moved = true;
    }
  }
  // Keep the cuts off zero ordinates themselves.
  auto nudge = [&](double c, double dir) {
    for (bool hit = true; hit;) {
      hit = false;
      for (double g : ordinates)
        if (std::abs(g - c) < 1e-9) c += dir * 1e-7, hit = true;
      for (const auto& z : out.deriv1_widened)
        if (std::abs(z.gamma() - c) < 1e-9) c += dir * 1e-7, hit = true;
    }
    return c;
  };
  c0 = nudge(c0, -1.0);
  c1 = nudge(c1, +1.0);

  ClassificationReport& rep = out.report;
  rep.t0_requested = t0;
  rep.t1_requested = t1;
  rep.t0 = c0;
  rep.t1 = c1;
  if (c0 < lo || c1 > hi) rep.notes.push_back("effective window exceeds the widened catalog");

  std::vector<int> hits(ordinates.size(), 0);
  for (const auto& c : out.classifications) {
    for (double g : c.crossings) {
      auto it = std::lower_bound(ordinates.begin(), ordinates.end(), g - 1e-6);
      if (it != ordinates.end() && std::abs(*it - g) <= 1e-6) ++hits[static_cast<std::size_t>(it - ordinates.begin())];
    }
  }

  Catalog& cat = out.catalog;
  cat.t0 = c0;
  cat.t1 = c1;
  cat.params = options.tracer.eval;
  cat.parameters["tracer.h_min"] = std::to_string(options.tracer.h_min);
  cat.parameters["tracer.h_max"] = std::to_string(options.tracer.h_max);
  cat.parameters["tracer.residual_tol"] = std::to_string(options.tracer.residual_tol);
  cat.parameters["window.requested"] = std::to_string(t0) + "," + std::to_string(t1);

  int idx = 0;
  for (std::size_t i = 0; i < out.critical_widened.size(); ++i) {
    const ZeroRecord& z = out.critical_widened[i];
    if (!(z.gamma() > c0 && z.gamma() < c1)) continue;
    ++rep.critical;
    if (hits[i] != 1) {
      ++rep.bijectivity_failures;
      std::ostringstream msg;
      msg << "critical zero at t = " << z.gamma() << " hit by " << hits[i] << " traces";
      rep.notes.push_back(msg.str());
    }
    ZeroRecord r = z;
    r.index = ++idx;
    cat.records.push_back(r);
  }
  idx = 0;
  for (std::size_t i = 0; i < out.deriv1_widened.size(); ++i) {
    ZeroRecord r = out.deriv1_widened[i];
    if (!(r.gamma() > c0 && r.gamma() < c1)) continue;
    const TypeClassification& c = out.classifications[i];
    ++rep.deriv1;
    r.index = ++idx;
    if (!c.resolved) {
      ++rep.unresolved;
      rep.notes.push_back("unresolved zero at " + std::to_string(r.beta()) + "+" + std::to_string(r.gamma()) +
                          "i: " + c.note);
    } else {
      r.type_class = c.type_class;
      if (c.type_class == ZeroType::T0) ++rep.N0;
      if (c.type_class == ZeroType::T1) ++rep.N1;
      if (c.type_class == ZeroType::T2) {
        ++rep.N2;
        r.paired_crossings = std::make_pair(c.crossings[0], c.crossings[1]);
      }
    }
    cat.records.push_back(r);
  }
  cat.sort();
  rep.identity_critical = rep.N1 + 2 * rep.N2 == rep.critical;
  rep.identity_deriv = rep.N0 + rep.N1 + rep.N2 == rep.deriv1;
  if (!options.keep_traces)
    for (auto& c : out.classifications) c.green.points.clear(), c.purple.points.clear();
  if (options.throw_on_failure && rep.bijectivity_failures > 0)
    fail(ErrorKind::bijectivity_failure, rep.notes.empty() ? "bijectivity failure" : rep.notes.front());
  return out;
}

SpiraResult spira_map(const ZeroRecord& rho_prime, const TracerOptions& options) {
  if (rho_prime.kind != ZeroKind::deriv1) fail(ErrorKind::invalid_argument, "spira_map needs a zero of zeta'");
  if (!(rho_prime.beta() > 0.5)) fail(ErrorKind::invalid_argument, "spira_map needs beta' > 1/2");
  const Complex rho = rho_prime.location;
  auto field = [&](Complex s) { return sample_zpp_over_zp(s, options.eval); };
  const SearchBox domain{0.5, kDomainSigmaMax, rho.imag() - 25.0, rho.imag() + 25.0};
  auto event = [&](Complex, Complex cur, const FieldSample& fs, ContourTrace& tr) -> std::optional<Termination> {
    if (fs.log_value.real() < kZeroLevel) return Termination::reached_zero;
    if (!domain.contains(cur)) {
      tr.side = cur.real() <= 0.5 ? "left" : cur.real() >= domain.sigma_max ? "right"
                : cur.imag() < domain.t_min ? "bottom" : "top";
      return Termination::left_domain;
    }
    return std::nullopt;
  };
  SpiraResult res;
  res.trace = trace_phase_curve(rho + options.start_radius, 0.0, -1, field, event,
                                options.arc_cap_factor * domain.perimeter(), options);
  res.trace.origin = rho_prime.index;
  if (options.keep_points) res.trace.points.insert(res.trace.points.begin(), rho);
  if (res.trace.termination != Termination::reached_zero) {
    std::ostringstream msg;
    msg << "Spira trace from " << rho << " ended " << to_string(res.trace.termination) << " " << res.trace.side
        << " at " << res.trace.end;
    fail(ErrorKind::termination_failure, msg.str());
  }
  res.rho_second = newton_on_zeta_derivative(res.trace.end, 2, options.eval, res.residual);
  if (!(res.residual < 1e-8) || !(res.rho_second.real() > 0.5)) {
    std::ostringstream msg;
    msg << "Spira trace from " << rho << " did not end at a verified zero of zeta'' (|zeta''| = " << res.residual << ")";
    fail(ErrorKind::termination_failure, msg.str());
  }
  res.trace.end = res.rho_second;
  return res;
}

SpiraWindowReport spira_window(double t0, double t1, const TracerOptions& options) {
  if (!(t0 > 7.0) || !(t1 > t0)) fail(ErrorKind::invalid_argument, "spira_window requires 7 < t0 < t1");
  const double lo = std::max(7.0, t0 - 5.0), hi = t1 + 5.0;
  auto d1 = find_derivative_zeros({kDeriv1SigmaMin, kDeriv1SigmaMax, lo, hi}, 1);
  auto d2 = find_derivative_zeros({kDeriv1SigmaMin, kDeriv2SigmaMax, lo, hi}, 2);

  TracerOptions topt = options;
  topt.keep_points = false;
  std::vector<Complex> image(d1.size());
  parallel_for(d1.size(), [&](std::size_t i) { image[i] = spira_map(d1[i], topt).rho_second; });

  double c0 = t0, c1 = t1;
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t i = 0; i < d1.size(); ++i) {
      const double a = std::min(d1[i].gamma(), image[i].imag()), b = std::max(d1[i].gamma(), image[i].imag());
      if (a < c1 && c1 < b) c1 = b + 1e-7, moved = true;
      if (a < c0 && c0 < b) c0 = a - 1e-7, moved = true;
    }
  }

  SpiraWindowReport rep;
  rep.t0 = c0;
  rep.t1 = c1;
  std::vector<int> hit(d2.size(), 0);
  int matched = 0;
  for (std::size_t i = 0; i < d1.size(); ++i) {
    if (!(d1[i].gamma() > c0 && d1[i].gamma() < c1)) continue;
    ++rep.deriv1;
    ZeroRecord r = d1[i];
    r.spira_partner = image[i];
    std::size_t best = d2.size();
    double dist = 1e300;
    for (std::size_t j = 0; j < d2.size(); ++j)
      if (std::abs(d2[j].location - image[i]) < dist) dist = std::abs(d2[j].location - image[i]), best = j;
    if (best < d2.size() && dist < 1e-6) {
      ++hit[best];
      ++matched;
    }
    if (image[i].real() > r.beta()) ++rep.right_of_partner;
    rep.max_ordinate_shift = std::max(rep.max_ordinate_shift, std::abs(image[i].imag() - r.gamma()));
    rep.deriv1_zeros.push_back(r);
  }
  bool injective = true, onto = true;
  for (std::size_t j = 0; j < d2.size(); ++j) {
    if (hit[j] > 1) injective = false;
    if (d2[j].gamma() > c0 && d2[j].gamma() < c1) {
      ++rep.deriv2;
      rep.deriv2_zeros.push_back(d2[j]);
      if (hit[j] == 0) onto = false;
    }
  }
  rep.images = matched;
  rep.injective = injective && matched == rep.deriv1;
  rep.onto = onto && rep.deriv2 == rep.deriv1;
  return rep;
}

ZCurveResult z_curve_trace(int n_odd, const SearchBox& window, const TracerOptions& options) {
  if (n_odd % 2 == 0) fail(ErrorKind::invalid_argument, "Z-curve seeds use odd n");
  window.validate();
  ZCurveResult res;
  res.n = n_odd;
  res.seed_t = n_odd * g_line_spacing();
  const Complex seed(10.0, res.seed_t);
  if (!window.contains(seed)) fail(ErrorKind::invalid_argument, "Z-curve seed lies outside the window");
  const Complex g = g_akatsuka(seed, options.eval);
  if (!(g.real() > 0) || std::abs(g.imag()) > 0.05 * std::abs(g)) {
    std::ostringstream msg;
    msg << "G(" << seed << ") = " << g << " is not dominated by its first term";
    fail(ErrorKind::seed_invalid, msg.str());
  }
  res.trace = trace_level_curve(seed, 1, TraceField::im_G, window, options);
  if (res.trace.termination == Termination::reached_zero) {
    double residual = 0;
    const Complex z = newton_on_zeta_derivative(res.trace.end, 1, options.eval, residual);
    if (residual < 1e-10) res.zero = z;
  }
  return res;
}

}  // namespace eta
