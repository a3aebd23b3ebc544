// Catalog and ensemble persistence (versioned CSV, JSON mirror), histograms
// with type-7 quantiles, and dependency-free SVG figures.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "eta/catalog.hpp"
#include "eta/level_curves.hpp"
#include "eta/rmt.hpp"

namespace eta {

inline constexpr int kEnsembleSchemaVersion = 1;

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);
/// Strict parse of a whole field; throws parse_error naming `where`.
double parse_double(std::string_view text, const std::string& where);

/// Catalog CSV:
///   # eta-atlas catalog v<schema>
///   # window,<t0>,<t1>
///   # seed,<seed>
///   # eval,<euler_maclaurin_terms>,<bernoulli_order>,<derivative_order_max>,<precision>
///   # param,<key>,<value>        (zero or more)
///   kind,index,beta,gamma,type,gamma_minus,gamma_plus,spira_beta,spira_gamma,on_z_curve,refine_residual
/// Optional fields are written empty when absent.
std::string catalog_csv(const Catalog& catalog);
Catalog parse_catalog_csv(const std::string& text);
void write_catalog(const std::string& path, const Catalog& catalog);
Catalog read_catalog(const std::string& path);

/// JSON mirror of the CSV; traces (if given) are nested per zeta' zero by index.
std::string catalog_json(const Catalog& catalog, const std::vector<TypeClassification>* traces = nullptr);

/// Ensemble CSV, one row per zero of p_A':
///   # eta-atlas ensemble v<schema>
///   # ensemble,<n>,<count>,<seed>
///   sample,sample_seed,j,mu_re,mu_im,type
/// The eigenangles go to a second table after a line "# eigenangles":
///   sample,k,theta
std::string ensemble_csv(const EnsembleStats& stats);
EnsembleStats parse_ensemble_csv(const std::string& text);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

struct HistogramSpec {
  std::string variable;
  double bin_width = 0.1;
  double lo = 0, hi = 6;
  bool per_type = false;
  bool log_scale = false;

  int bins() const;
  void validate() const;
};

/// (beta' - 1/2) log gamma' and n(1 - |mu'|): width 0.1 on [0, 6].
HistogramSpec default_scaled_distance_spec(std::string variable, bool per_type = true);
/// Normalized gaps: width 0.05 on [0, 2].
HistogramSpec default_gap_spec(std::string variable);

struct Summary {
  std::size_t count = 0;
  double q1 = 0, median = 0, q3 = 0;
  double fraction_below_half = 0, fraction_below_one = 0;
};

/// Type-7 quartiles; throws empty_input.
Summary summarize(std::vector<double> values);

struct Histogram {
  HistogramSpec spec;
  std::vector<double> edges;                 ///< bins() + 1 edges, lo .. hi
  std::vector<std::vector<long>> counts;     ///< one row, or rows T0, T1, T2 and combined
  std::vector<long> underflow, overflow;     ///< per row
  std::vector<Summary> summaries;            ///< per row
  std::vector<std::string> row_names;
};

Histogram make_histogram(const std::vector<double>& values, const HistogramSpec& spec);
/// Per-type rows plus their union. Empty types get empty summaries.
Histogram make_histogram(const std::array<std::vector<double>, 3>& by_type, const HistogramSpec& spec);

/// bin_lo,bin_hi,<row names...>; underflow/overflow as the first and last rows.
std::string histogram_csv(const Histogram& h);
std::string histogram_svg(const Histogram& h, const std::string& title);

struct Density2D {
  double x0 = -3, x1 = 3, y0 = -3, y1 = 3;
  int nx = 60, ny = 60;
  std::vector<long> counts;  ///< row-major, y outer
  long outside = 0;
};

Density2D make_density(const std::vector<Complex>& points, double x0, double x1, double y0, double y1, int nx,
                       int ny);
/// Linear density scale with the unit circle drawn on top.
std::string density_svg(const Density2D& d, const std::string& title);

/// Level-curve picture on a rectangle: green / purple traces, critical zeros
/// and zeros of zeta' marked.
std::string contour_svg(const std::vector<TypeClassification>& traces, const Catalog& catalog, const SearchBox& box,
                        const std::string& title);

}  // namespace eta
