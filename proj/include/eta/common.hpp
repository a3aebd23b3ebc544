// Shared vocabulary: complex alias, the library's error type, and a small
// bounded worker pool used for data-parallel fan-out.
#pragma once

#include <algorithm>
#include <cmath>
#include <atomic>
#include <complex>
#include <cstddef>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace eta {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

enum class ErrorKind {
  invalid_argument,
  pole,
  accuracy_precondition,
  height_cap,
  count_mismatch,
  multiple_zero,
  edge_proximity,
  bracket_failure,
  unresolved_classification,
  bijectivity_failure,
  termination_failure,
  seed_invalid,
  vanishing_derivative,
  geometry_infeasible,
  extrapolation_unstable,
  incomplete_catalog,
  quadrature_nonconvergence,
  root_solver_nonconvergence,
  unit_modulus_violation,
  identity_violation,
  counterexample,
  branch_cut_proximity,
  derivative_zero,
  version_mismatch,
  parse_error,
  empty_input,
  config_error,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

/// Wraps x into (-pi, pi].
double wrap_angle(double x) noexcept;

/// Adaptive Simpson quadrature with Richardson correction. Throws
/// quadrature_nonconvergence if the recursion bottoms out above tolerance.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 40) {
  struct Rec {
    F& f;
    double run(double a, double fa, double m, double fm, double b, double fb, double whole, double tol,
               int depth) {
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
      if (depth <= 0) fail(ErrorKind::quadrature_nonconvergence, "adaptive Simpson exceeded its depth limit");
      return run(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
             run(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
    }
  };
  Rec rec{f};
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec.run(a, fa, m, fm, b, fb, whole, tol, max_depth);
}

/// Type-7 quantile (linear interpolation between order statistics) of sorted data.
inline double quantile_type7(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) fail(ErrorKind::empty_input, "quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::invalid_argument, "quantile probability outside [0, 1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Worker count: ETA_ATLAS_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
unsigned default_thread_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers. Results must be
/// written to per-index slots so the outcome is independent of scheduling.
/// The first exception thrown by any body is rethrown after all workers join.
template <class Body>
void parallel_for(std::size_t n, Body&& body, unsigned threads = 0) {
  if (threads == 0) threads = default_thread_count();
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  pool.reserve(count);
  for (unsigned k = 0; k < count; ++k) pool.emplace_back(worker);
  pool.clear();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace eta
