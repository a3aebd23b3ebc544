// Continuation of curves arg f = const for analytic f, and the three uses made
// of it: the Re eta = 0 curves that classify zeros of zeta', the Spira curves
// Im(zeta''/zeta') = 0, and the Z-curves Im G = 0.
//
// The tracer works on L = log f. Along arg f = phi the level log|f| is
// monotone, so each step predicts along conj(L') and corrects with a complex
// Newton iteration on L(s) = level + i phi.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eta/catalog.hpp"
#include "eta/zeta_zeros.hpp"

namespace eta {

enum class TraceField { re_eta, im_zpp_over_zp, im_G };
enum class TraceColor { green, purple, none };
enum class Termination {
  crossed_critical_line,
  crossed_unit_circle,
  left_domain,
  reached_pole_region,
  arc_cap_exceeded,
  hit_singular_point,
  reached_zero,
};

std::string_view to_string(TraceColor c) noexcept;
std::string_view to_string(Termination t) noexcept;

struct ContourTrace {
  std::vector<Complex> points;
  TraceColor color = TraceColor::none;
  int origin = -1;  ///< index of the zero the trace starts from
  Termination termination = Termination::arc_cap_exceeded;
  std::optional<double> crossing;  ///< ordinate (critical line) or angle (unit circle)
  std::string side;                ///< for left_domain: "left", "right", "bottom", "top"
  Complex end;
  double arc_length = 0;
  double max_residual = 0;  ///< max |arg f - phi| over accepted points
  double phase_log = 0;     ///< unwrapped change of arg f along the trace
  double min_step = 0;
};

struct TracerOptions {
  double h_min = 1e-4;
  double h_max = 0.2;
  double residual_tol = 1e-9;
  double singular_tol = 1e-8;  ///< |f'/f| below this off the start point is a singular point
  double arc_cap_factor = 10;  ///< arc cap = factor * domain perimeter
  double start_radius = 1e-3;
  bool keep_points = true;
  EvalParams eval{};
};

/// log f, (log f)' and optionally f''/f at a point.
struct FieldSample {
  Complex log_value;
  Complex log_deriv;
  Complex second_ratio;
  bool has_second = false;
};

using FieldFn = std::function<FieldSample(Complex)>;
/// Inspected after every accepted point; returning a value stops the trace.
using TraceEvent =
    std::function<std::optional<Termination>(Complex prev, Complex cur, const FieldSample& at_cur, ContourTrace& trace)>;

/// Follows arg f = phase from start (which must lie near the curve) in the
/// direction where log|f| increases (direction = +1) or decreases (-1).
ContourTrace trace_phase_curve(Complex start, double phase, int direction, const FieldFn& field,
                               const TraceEvent& event, double arc_cap, const TracerOptions& options);

/// Field samplers for the three traced functions.
FieldSample sample_eta(Complex s, const EvalParams& eval = {});
FieldSample sample_zpp_over_zp(Complex s, const EvalParams& eval = {});
FieldSample sample_G(Complex s, const EvalParams& eval = {});

/// re_eta: start is a zero of zeta'; tangent_sign +1 follows the green ray
/// (Im eta > 0), -1 the purple one. im_zpp_over_zp: start is a zero of zeta',
/// the trace leaves it to the right. im_G: start is a seed point, traced
/// towards decreasing |G|.
ContourTrace trace_level_curve(Complex start, int tangent_sign, TraceField field, const SearchBox& domain,
                               const TracerOptions& options = {});

struct TypeClassification {
  int zero_index = 0;
  Complex location;
  ZeroType type_class = ZeroType::T0;
  std::vector<double> crossings;  ///< sorted, size == type
  ContourTrace green, purple;
  bool resolved = true;
  std::string note;
};

/// Type of a zero of zeta'. critical_ordinates (sorted) is the catalog used to
/// match crossings; a crossing inside its range with no zero within 1e-6 is a
/// hard error. Pass an empty list to skip matching.
TypeClassification classify_zero(const ZeroRecord& rho_prime, const SearchBox& domain,
                                 const std::vector<double>& critical_ordinates = {},
                                 const TracerOptions& options = {});

/// Default classification domain around a zero.
SearchBox classification_domain(const ZeroRecord& rho_prime);

struct ClassificationReport {
  double t0_requested = 0, t1_requested = 0;
  double t0 = 0, t1 = 0;  ///< effective window (snapped to cuts no type-1/2 group straddles)
  int critical = 0;
  int deriv1 = 0;
  int N0 = 0, N1 = 0, N2 = 0;
  int unresolved = 0;
  int bijectivity_failures = 0;
  bool identity_critical = false;  ///< N1 + 2 N2 == critical
  bool identity_deriv = false;     ///< N0 + N1 + N2 == deriv1
  std::vector<std::string> notes;
};

struct WindowClassification {
  Catalog catalog;  ///< critical and deriv1 records of the effective window, classified
  ClassificationReport report;
  std::vector<TypeClassification> classifications;  ///< every zeta' zero of the widened window
  std::vector<ZeroRecord> critical_widened;
  std::vector<ZeroRecord> deriv1_widened;
};

struct ClassifyWindowOptions {
  TracerOptions tracer{};
  unsigned threads = 0;
  bool keep_traces = false;        ///< keep trace polylines in the result
  bool throw_on_failure = true;    ///< bijectivity failures throw instead of only being reported
};

/// Classifies every zeta' zero of the window. Throws bijectivity_failure if a
/// critical zero of the effective window is hit by zero or several traces.
WindowClassification classify_window(double t0, double t1, const ClassifyWindowOptions& options = {});

struct SpiraResult {
  Complex rho_second;
  ContourTrace trace;
  double residual = 0;  ///< |zeta''(rho'')|
};

/// Follows Im(zeta''/zeta') = 0, Re > 0 from a zero of zeta' to a zero of zeta''.
SpiraResult spira_map(const ZeroRecord& rho_prime, const TracerOptions& options = {});

struct SpiraWindowReport {
  double t0 = 0, t1 = 0;  ///< effective window
  int deriv1 = 0, deriv2 = 0;
  int images = 0;
  bool injective = false;
  bool onto = false;
  int right_of_partner = 0;
  double max_ordinate_shift = 0;
  std::vector<ZeroRecord> deriv1_zeros;  ///< with spira_partner set
  std::vector<ZeroRecord> deriv2_zeros;
};

SpiraWindowReport spira_window(double t0, double t1, const TracerOptions& options = {});

struct ZCurveResult {
  int n = 0;
  double seed_t = 0;
  std::optional<Complex> zero;  ///< zero of zeta' reached, if any
  ContourTrace trace;
};

/// Traces the Z-curve seeded at 10 + i n pi / log(3/2) (n odd) leftward.
/// Returns the zero of zeta' it reaches, or none if it leaves the window.
ZCurveResult z_curve_trace(int n_odd, const SearchBox& window, const TracerOptions& options = {});

}  // namespace eta
