// Zeros of zeta on the critical line, complex zeros of zeta' and zeta'' in
// rectangles, and the real zeros -a_n of zeta'.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "eta/special_functions.hpp"

namespace eta {

enum class ZeroKind { critical, deriv1, deriv2, real_axis };
enum class ZeroType { T0 = 0, T1 = 1, T2 = 2 };

std::string_view to_string(ZeroKind kind) noexcept;
std::string_view to_string(ZeroType type) noexcept;

struct ZeroRecord {
  Complex location;
  ZeroKind kind = ZeroKind::critical;
  int index = 0;
  std::optional<ZeroType> type_class;
  std::optional<std::pair<double, double>> paired_crossings;  ///< (gamma-, gamma+) for T2
  std::optional<Complex> spira_partner;
  std::optional<bool> on_z_curve;
  double refine_residual = 0;

  double beta() const { return location.real(); }
  double gamma() const { return location.imag(); }
};

struct SearchBox {
  double sigma_min = 0, sigma_max = 0, t_min = 0, t_max = 0;

  void validate() const;
  bool contains(Complex s, double slack = 0) const;
  double perimeter() const { return 2.0 * ((sigma_max - sigma_min) + (t_max - t_min)); }
};

struct CriticalZeroOptions {
  double step = 0.05;           ///< base scan step in t
  int max_refinements = 4;      ///< step halvings allowed when the count check fails
  EvalParams eval{};
};

/// Zeros 1/2 + i gamma with t0 < gamma < t1, ordered. The unwrapped change of
/// arg eta along the segment is checked against a quadrature of F.
std::vector<ZeroRecord> find_critical_zeros(double t0, double t1, const CriticalZeroOptions& options = {});

struct DerivativeZeroOptions {
  double strip_height = 2.0;    ///< top-level box is cut into strips of about this height
  double min_box = 1e-6;        ///< below this a box with count >= 2 is a suspected multiple zero
  double newton_residual = 1e-10;
  unsigned threads = 0;
  EvalParams eval{};
};

struct DerivativeZeroSearch {
  std::vector<ZeroRecord> zeros;  ///< sorted by ordinate
  int contour_count = 0;          ///< argument-principle count on the outer boundary
  int boxes_examined = 0;
};

/// All zeros of zeta^{(order)} (order 1 or 2) inside box. Throws count_mismatch
/// if the refined list disagrees with the outer contour count.
DerivativeZeroSearch find_derivative_zeros_report(const SearchBox& box, int order,
                                                  const DerivativeZeroOptions& options = {});
std::vector<ZeroRecord> find_derivative_zeros(const SearchBox& box, int order,
                                              const DerivativeZeroOptions& options = {});

/// Winding number of zeta^{(order)} around the boundary of box.
int argument_principle_count(const SearchBox& box, int order, const EvalParams& eval = {});

/// a_1..a_{n_max}, where -a_n in (-2n-2, -2n) is the real zero of zeta'.
std::vector<double> real_negative_zeros(int n_max);

struct WindowCensus {
  int critical = 0;
  int deriv1 = 0;
  double critical_main_term = 0;  ///< (T/2pi) log(T/2pi) - T/2pi, differenced over the window
  double deriv1_main_term = 0;    ///< (T/2pi) log(T/4pi) - T/2pi, differenced over the window
};

/// Sigma range searched for zeros of zeta'. Left edge: no zeros of zeta' with
/// 0 < sigma < 1/2 exist under RH, so 0.25 keeps the contour off the line.
inline constexpr double kDeriv1SigmaMin = 0.25;
inline constexpr double kDeriv1SigmaMax = 6.0;
inline constexpr double kDeriv2SigmaMax = 10.0;

WindowCensus window_census(double t0, double t1);

double critical_main_term(double T);
double deriv1_main_term(double T);

}  // namespace eta
