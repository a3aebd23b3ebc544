// Unitary matrix analog: eta_A(z) = z h_A(z) p_A'(z) with
// h_A(z) = (-z)^{-n/2} det(A)^{-1/2}, the Re eta_A = 0 curves inside the unit
// disk, and the classification of zeros of p_A' by unit-circle crossings.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "eta/level_curves.hpp"

namespace eta {

/// Counter-based generator: value i of stream (seed, stream) is a fixed
/// function of (seed, stream, i), SplitMix64's finalizer applied to a Weyl
/// sequence. Reproducible across platforms and independent of call order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ull))) {}
  std::uint64_t bits(std::uint64_t i) const { return mix(key_ + (i + 1) * 0x9e3779b97f4a7c15ull); }
  /// Uniform on (0, 1), 53 bits.
  double uniform(std::uint64_t i) const { return (double(bits(i) >> 11) + 0.5) * 0x1.0p-53; }
  /// Standard complex Gaussian (E|z|^2 = 1) from Box-Muller on draws 2i, 2i+1.
  Complex complex_normal(std::uint64_t i) const;
  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t key_;
};

/// Row-major n x n complex matrix.
struct Matrix {
  int n = 0;
  std::vector<Complex> a;
  Complex& operator()(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
  const Complex& operator()(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
};

/// Haar unitary: complex Gaussian matrix, Gram-Schmidt (twice) by columns,
/// diagonal of R made real positive.
Matrix haar_unitary(int n, std::uint64_t seed);

/// Coefficients c_0..c_n of det(A - z I) = sum c_k z^k (Faddeev-LeVerrier).
std::vector<Complex> characteristic_polynomial(const Matrix& A);

/// All roots of sum c_k z^k (Aberth-Ehrlich, long double). Throws
/// root_solver_nonconvergence.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs, int max_iter = 200, double tol = 1e-12);

/// The n-1 roots of p' for p(z) = prod (z - e^{i theta_k}), computed from the
/// product form.
std::vector<Complex> derivative_roots(const std::vector<double>& eigenangles, int max_iter = 200, double tol = 1e-12);

struct UnitarySample {
  int n = 0;
  Complex det_phase{1.0, 0.0};
  std::vector<double> eigenangles;    ///< sorted, in [0, 2pi)
  std::vector<Complex> char_coeffs;   ///< det(A - zI) = sum c_k z^k, size n + 1
  std::vector<Complex> deriv_roots;   ///< n - 1 zeros of p_A'
  std::uint64_t seed = 0;
  int resamples = 0;                  ///< seeds rejected (solver failure, near-degenerate eigenvalues)
  double cut_angle = 0;               ///< branch cut ray of (-z)^{-n/2} (odd n), bisects the widest gap
  double min_gap = 0;
  double max_unit_defect = 0;         ///< max | |root| - 1 | of the eigenvalue solve
  double det_defect = 0;              ///< |prod e^{i theta_k} - det A|
};

/// Samples a CUE matrix and derives everything from it. Resamples (seed
/// perturbed deterministically) on solver failure or eigenvalue gaps < 1e-8.
UnitarySample sample_cue(int n, std::uint64_t seed);
/// Diagonal unitary with the given eigenangles.
UnitarySample from_eigenangles(std::vector<double> eigenangles);
/// Any unitary matrix.
UnitarySample from_matrix(const Matrix& A);

/// eta_A(z) with the cut of (-z)^{-n/2} on the sample's cut ray (odd n).
/// Throws branch_cut_proximity within 1e-9 rad of the cut.
Complex eta_A(Complex z, const UnitarySample& s);
/// Lambda_A(z) = h_A(z) p_A(z), same branch as eta_A. Real on |z| = 1, and
/// z Lambda_A' = eta_A - (n/2) Lambda_A.
Complex lambda_A(Complex z, const UnitarySample& s);
/// log eta_A, (log eta_A)', eta_A''/eta_A. arg_minus_z selects the branch of
/// arg(-z) (only its value mod 2pi matters for even n).
FieldSample sample_eta_A(Complex z, const UnitarySample& s, double arg_minus_z);

/// F(theta) = d/dtheta arg eta_A(e^{i theta}) = 1 - n/2 + sum 1/(1 - e^{-i theta} mu'_j).
/// Throws derivative_zero if e^{i theta} is (numerically) a zero of p_A'.
double F_theta(double theta, const UnitarySample& s);

struct DiskTraceOptions {
  double pole_radius = 0.05;
  double arc_cap = 40;
  double match_tol = 1e-6;
  TracerOptions tracer{};  ///< h_max is capped at 0.5/n
};

struct RMTZero {
  Complex mu_prime;
  ZeroType type_class = ZeroType::T0;
  std::vector<int> crossings;  ///< indices into eigenangles of the circle crossings
  ContourTrace green, purple;
};

struct RMTClassification {
  std::vector<RMTZero> zeros;
  int N0 = 0, N1 = 0, N2 = 0;  ///< counts of zeros of p_A' per type
  std::vector<std::array<int, 2>> type2_pairs;  ///< (theta^-, theta^+) eigen-indices, counterclockwise
  std::vector<int> eigen_hits;                   ///< traces ending at each eigenvalue
};

/// Throws identity_violation if N2 - N0 != 1, N1 + 2 N0 != n - 2 or some
/// eigenvalue is not hit exactly once, termination_failure on an unresolved trace.
RMTClassification classify_sample(const UnitarySample& s, const DiskTraceOptions& opt = {});

struct SectorCheck {
  int lo = 0, hi = 0;  ///< consecutive eigen-indices, gap counterclockwise from lo to hi
  double gap = 0;
  bool contains_zero = false;
};

/// Checks every consecutive gap below 2pi/(1 + 6n); throws counterexample if
/// a sector holds no zero of p_A'.
std::vector<SectorCheck> sector_check(const UnitarySample& s);

/// Counterclockwise angle from a to b, in [0, 2pi).
double ccw_gap(double a, double b);

/// One classified sample, as persisted.
struct SampleRecord {
  int index = 0;
  std::uint64_t seed = 0;  ///< seed actually used (after resampling)
  std::vector<double> eigenangles;
  std::vector<Complex> deriv_roots;
  std::vector<int> types;  ///< per deriv root
  int N0 = 0, N1 = 0, N2 = 0;
};

struct EnsembleStats {
  int n = 0;
  int count = 0;
  std::uint64_t seed = 0;
  long N0 = 0, N1 = 0, N2 = 0;
  std::array<std::vector<double>, 3> scaled_radius;  ///< n(1 - |mu'|) per type, sorted
  std::vector<double> type2_gaps;                    ///< n(theta^+ - theta^-)/2pi, sorted
  long identity_failures = 0;
  long sector_checks = 0, sector_counterexamples = 0;
  long resamples = 0;
  double min_F = 0;          ///< min of F over a 1024-point grid, all samples
  double max_F_at_eigen = 0; ///< max |F(theta_k) - n/2|
  double max_gap_integral_error = 0;  ///< max |int F over an eigen-gap - pi|
  std::vector<SampleRecord> samples;  ///< filled when keep_samples is set, in index order
};

/// Samples count matrices with seeds derived from (seed, index), classifies
/// each and reduces in index order.
EnsembleStats batch_stats(int n, int count, std::uint64_t seed, unsigned threads = 0,
                          const DiskTraceOptions& opt = {}, bool keep_samples = false);

}  // namespace eta
