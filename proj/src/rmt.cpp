#include "eta/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace eta {

namespace {

using CL = std::complex<long double>;

constexpr double kCircleTol = 1e-8;  // | |root| - 1 | allowed for eigenvalues
constexpr double kMinGap = 1e-8;
constexpr int kMaxResamples = 16;

// arg z in (cut - 2pi, cut]
double angle_below_cut(Complex z, double cut) {
  double a = std::arg(z);
  while (a > cut) a -= kTwoPi;
  while (a <= cut - kTwoPi) a += kTwoPi;
  return a;
}

double angle_mod(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0 ? a + kTwoPi : a;
}

// Horner value and derivative.
void horner(const std::vector<CL>& c, CL z, CL& p, CL& dp) {
  p = c.back();
  dp = 0;
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[k];
  }
}

// Shrunk roots of unity with a small deterministic jitter.
std::vector<CL> initial_guesses(int m, long double radius) {
  std::vector<CL> z(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const long double a = 2.0L * kPi * (k + 0.25L + 0.1L * std::sin(1.0L + k)) / m + 0.4L;
    z[static_cast<std::size_t>(k)] = std::polar(radius * (1.0L - 0.01L * ((k * 7) % 5) / m), a);
  }
  return z;
}

// Aberth-Ehrlich with newton(z) returning p/p' at z.
template <class Newton>
std::vector<CL> aberth(std::vector<CL> z, Newton&& newton, int max_iter, double tol, const char* what) {
  const std::size_t m = z.size();
  for (int it = 0; it < max_iter; ++it) {
    long double worst = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const CL N = newton(z[i]);
      CL s = 0;
      for (std::size_t j = 0; j < m; ++j)
        if (j != i) s += 1.0L / (z[i] - z[j]);
      const CL w = N / (1.0L - N * s);
      z[i] -= w;
      worst = std::max(worst, std::abs(w) / std::max(1.0L, std::abs(z[i])));
    }
    if (worst < tol) return z;
  }
  std::ostringstream msg;
  msg << "Aberth iteration for " << what << " did not converge in " << max_iter << " iterations";
  fail(ErrorKind::root_solver_nonconvergence, msg.str());
}

// LU with partial pivoting in place; returns the determinant.
CL lu_det(std::vector<CL>& a, int n) {
  CL det = 1;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      det = -det;
    }
    const CL d = a[k * n + k];
    det *= d;
    if (d == CL(0)) return 0;
    for (int i = k + 1; i < n; ++i) {
      const CL f = a[i * n + k] / d;
      a[i * n + k] = f;
      for (int j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
    }
  }
  return det;
}

// tr (A - zI)^{-1}, via LU solves against the unit vectors.
CL resolvent_trace(const Matrix& A, CL z) {
  const int n = A.n;
  std::vector<CL> lu(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lu[i * n + j] = CL(A(i, j)) - (i == j ? z : CL(0));
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(lu[i * n + k]) > std::abs(lu[piv * n + k])) piv = i;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(lu[k * n + j], lu[piv * n + j]);
      std::swap(perm[k], perm[piv]);
    }
    const CL d = lu[k * n + k];
    if (d == CL(0)) return CL(std::numeric_limits<long double>::infinity());
    for (int i = k + 1; i < n; ++i) {
      const CL f = lu[i * n + k] / d;
      lu[i * n + k] = f;
      for (int j = k + 1; j < n; ++j) lu[i * n + j] -= f * lu[k * n + j];
    }
  }
  CL tr = 0;
  std::vector<CL> x(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    // solve (A - zI) x = e_c, only x_c is needed but back substitution needs all
    for (int i = 0; i < n; ++i) {
      CL v = perm[i] == c ? CL(1) : CL(0);
      for (int j = 0; j < i; ++j) v -= lu[i * n + j] * x[j];
      x[i] = v;
    }
    for (int i = n - 1; i >= 0; --i) {
      CL v = x[i];
      for (int j = i + 1; j < n; ++j) v -= lu[i * n + j] * x[j];
      x[i] = v / lu[i * n + i];
    }
    tr += x[c];
  }
  return tr;
}

// Fills everything derived from the eigenangles.
void finish_sample(UnitarySample& s) {
  const int n = s.n;
  std::sort(s.eigenangles.begin(), s.eigenangles.end());
  s.min_gap = kTwoPi;
  double widest = -1;
  for (int k = 0; k < n; ++k) {
    const double a = s.eigenangles[k];
    const double b = s.eigenangles[(k + 1) % n];
    const double g = n == 1 ? kTwoPi : ccw_gap(a, b);
    s.min_gap = std::min(s.min_gap, n == 1 ? kTwoPi : (g == 0 ? 0.0 : g));
    if (g > widest) {
      widest = g;
      s.cut_angle = angle_mod(a + 0.5 * (g == 0 ? kTwoPi : g));
    }
  }
  if (s.min_gap < kMinGap) {
    std::ostringstream msg;
    msg << "eigenvalue gap " << s.min_gap << " below " << kMinGap;
    fail(ErrorKind::root_solver_nonconvergence, msg.str());
  }
  if (s.char_coeffs.empty()) {
    // det(A - zI) = prod (mu_k - z)
    std::vector<CL> c{CL(1)};
    for (double th : s.eigenangles) {
      const CL mu = std::polar(1.0L, static_cast<long double>(th));
      std::vector<CL> next(c.size() + 1, CL(0));
      for (std::size_t k = 0; k < c.size(); ++k) {
        next[k] += mu * c[k];
        next[k + 1] -= c[k];
      }
      c = std::move(next);
    }
    s.char_coeffs.assign(c.begin(), c.end());
  }
  s.deriv_roots = derivative_roots(s.eigenangles);
}

// Branch-tracking sampler of log eta_A along a trace.
struct EtaASampler {
  const UnitarySample& s;
  double branch;  // current arg(-z)
  FieldSample operator()(Complex z) {
    double a = std::arg(-z);
    a += kTwoPi * std::round((branch - a) / kTwoPi);
    branch = a;
    return sample_eta_A(z, s, a);
  }
};

double cut_branch(Complex z, const UnitarySample& s) {
  return angle_below_cut(z, s.cut_angle) - kPi;
}

}  // namespace

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Complex CounterRng::complex_normal(std::uint64_t i) const {
  const double u1 = uniform(2 * i), u2 = uniform(2 * i + 1);
  return std::polar(std::sqrt(-std::log(u1)), kTwoPi * u2);
}

double ccw_gap(double a, double b) { return angle_mod(b - a); }

Matrix haar_unitary(int n, std::uint64_t seed) {
  if (n < 1) fail(ErrorKind::invalid_argument, "matrix size must be positive");
  const CounterRng rng(seed, 1);
  Matrix q{n, std::vector<Complex>(static_cast<std::size_t>(n * n))};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q(i, j) = rng.complex_normal(static_cast<std::uint64_t>(i * n + j));
  for (int j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < j; ++k) {
        Complex r = 0;
        for (int i = 0; i < n; ++i) r += std::conj(q(i, k)) * q(i, j);
        for (int i = 0; i < n; ++i) q(i, j) -= r * q(i, k);
      }
    }
    double norm = 0;
    for (int i = 0; i < n; ++i) norm += std::norm(q(i, j));
    norm = std::sqrt(norm);
    if (!(norm > 1e-300)) fail(ErrorKind::invalid_argument, "rank-deficient Gaussian matrix");
    // R_jj = norm > 0 already, so no extra phase is needed
    for (int i = 0; i < n; ++i) q(i, j) /= norm;
  }
  return q;
}

std::vector<Complex> characteristic_polynomial(const Matrix& A) {
  const int n = A.n;
  // det(zI - A) = z^n + c_{n-1} z^{n-1} + ... + c_0
  std::vector<CL> c(static_cast<std::size_t>(n + 1));
  c[n] = 1;
  std::vector<CL> M(static_cast<std::size_t>(n * n), CL(0)), AM(M.size());
  for (int k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        CL v = 0;
        for (int l = 0; l < n; ++l) v += CL(A(i, l)) * M[l * n + j];
        AM[i * n + j] = v;
      }
    for (int i = 0; i < n; ++i) AM[i * n + i] += c[n - k + 1];
    M.swap(AM);
    CL tr = 0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) tr += CL(A(i, l)) * M[l * n + i];
    c[n - k] = -tr / static_cast<long double>(k);
  }
  std::vector<Complex> out(static_cast<std::size_t>(n + 1));
  const long double sign = (n % 2) ? -1.0L : 1.0L;
  for (int k = 0; k <= n; ++k) out[k] = Complex(sign * c[k]);
  return out;
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs, int max_iter, double tol) {
  std::vector<CL> c(coeffs.begin(), coeffs.end());
  while (!c.empty() && c.back() == CL(0)) c.pop_back();
  if (c.size() < 2) fail(ErrorKind::invalid_argument, "polynomial of degree < 1");
  const int m = static_cast<int>(c.size()) - 1;
  // radius from the geometric mean of the roots
  const long double radius = std::pow(std::abs(c[0] / c[m]), 1.0L / m);
  auto newton = [&](CL z) {
    CL p, dp;
    horner(c, z, p, dp);
    return p / dp;
  };
  const auto z = aberth(initial_guesses(m, 0.9L * (radius > 0 ? radius : 1.0L)), newton, max_iter, tol, "polynomial");
  return {z.begin(), z.end()};
}

std::vector<Complex> derivative_roots(const std::vector<double>& eigenangles, int max_iter, double tol) {
  const int n = static_cast<int>(eigenangles.size());
  if (n < 2) return {};
  std::vector<CL> mu(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) mu[k] = std::polar(1.0L, static_cast<long double>(eigenangles[k]));
  // p'/p'' = S1 / (S1^2 - S2), S_m = sum (z - mu_k)^{-m}
  auto newton = [&](CL z) {
    CL s1 = 0, s2 = 0;
    for (const CL& m : mu) {
      const CL r = 1.0L / (z - m);
      s1 += r;
      s2 += r * r;
    }
    return s1 / (s1 * s1 - s2);
  };
  const auto z = aberth(initial_guesses(n - 1, 0.9L), newton, max_iter, tol, "derivative roots");
  return {z.begin(), z.end()};
}

UnitarySample from_matrix(const Matrix& A) {
  const int n = A.n;
  if (n < 2 || A.a.size() != static_cast<std::size_t>(n * n)) fail(ErrorKind::invalid_argument, "need a square matrix with n >= 2");
  UnitarySample s;
  s.n = n;
  s.char_coeffs = characteristic_polynomial(A);
  auto roots = polynomial_roots(s.char_coeffs);
  for (auto& r : roots) {
    // Newton on det(A - zI) against the matrix itself
    CL z = r;
    for (int it = 0; it < 3; ++it) {
      const CL tr = resolvent_trace(A, z);
      if (!std::isfinite(std::abs(tr)) || tr == CL(0)) break;
      const CL step = 1.0L / tr;
      z += step;
      if (std::abs(step) < 1e-17L) break;
    }
    r = Complex(z);
  }
  s.eigenangles.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    s.max_unit_defect = std::max(s.max_unit_defect, std::abs(std::abs(roots[k]) - 1.0));
    s.eigenangles[k] = angle_mod(std::arg(roots[k]));
  }
  if (s.max_unit_defect > kCircleTol) {
    std::ostringstream msg;
    msg << "eigenvalue off the unit circle by " << s.max_unit_defect;
    fail(ErrorKind::unit_modulus_violation, msg.str());
  }
  std::vector<CL> lu(A.a.begin(), A.a.end());
  s.det_phase = Complex(lu_det(lu, n));
  finish_sample(s);
  const double sum = std::accumulate(s.eigenangles.begin(), s.eigenangles.end(), 0.0);
  s.det_defect = std::abs(std::polar(1.0, sum) - s.det_phase);
  return s;
}

UnitarySample from_eigenangles(std::vector<double> eigenangles) {
  if (eigenangles.size() < 2) fail(ErrorKind::invalid_argument, "need at least two eigenangles");
  UnitarySample s;
  s.n = static_cast<int>(eigenangles.size());
  for (double& a : eigenangles) {
    if (!std::isfinite(a)) fail(ErrorKind::invalid_argument, "non-finite eigenangle");
    a = angle_mod(a);
  }
  s.eigenangles = std::move(eigenangles);
  finish_sample(s);
  s.det_phase = std::polar(1.0, std::accumulate(s.eigenangles.begin(), s.eigenangles.end(), 0.0));
  return s;
}

UnitarySample sample_cue(int n, std::uint64_t seed) {
  if (n < 2) fail(ErrorKind::invalid_argument, "matrix size must be at least 2");
  std::uint64_t cur = seed;
  for (int attempt = 0;; ++attempt) {
    try {
      UnitarySample s = from_matrix(haar_unitary(n, cur));
      s.seed = cur;
      s.resamples = attempt;
      return s;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::root_solver_nonconvergence || attempt + 1 >= kMaxResamples) throw;
      cur = CounterRng::mix(cur ^ (0xa0761d6478bd642full * static_cast<std::uint64_t>(attempt + 1)));
    }
  }
}

FieldSample sample_eta_A(Complex z, const UnitarySample& s, double arg_minus_z) {
  const double n = s.n;
  if (z == Complex(0.0, 0.0)) fail(ErrorKind::pole, "eta_A has a pole at the origin");
  const double half_theta = 0.5 * std::accumulate(s.eigenangles.begin(), s.eigenangles.end(), 0.0);
  FieldSample f;
  Complex lsum = 0, d1 = 0, d2 = 0;
  for (const Complex& m : s.deriv_roots) {
    const Complex w = z - m;
    lsum += std::log(w);
    const Complex r = 1.0 / w;
    d1 += r;
    d2 += r * r;
  }
  // log z - (n/2) log(-z) - (1/2) log det + log((-1)^n n) + sum log(z - mu')
  f.log_value = std::log(z) - 0.5 * n * Complex(std::log(std::abs(z)), arg_minus_z) - Complex(0.0, half_theta) +
                Complex(std::log(n), (s.n % 2) ? kPi : 0.0) + lsum;
  const double e = 1.0 - 0.5 * n;
  f.log_deriv = e / z + d1;
  f.second_ratio = -e / (z * z) - d2 + f.log_deriv * f.log_deriv;
  f.has_second = true;
  return f;
}

namespace {

void check_cut(Complex z, const UnitarySample& s) {
  if (z == Complex(0.0, 0.0)) fail(ErrorKind::pole, "h_A has a pole at the origin");
  if (s.n % 2) {
    const double a = angle_below_cut(z, s.cut_angle);
    if (s.cut_angle - a < 1e-9 || a - (s.cut_angle - kTwoPi) < 1e-9)
      fail(ErrorKind::branch_cut_proximity, "point on the branch cut of (-z)^{-n/2}");
  }
}

}  // namespace

Complex eta_A(Complex z, const UnitarySample& s) {
  check_cut(z, s);
  return std::exp(sample_eta_A(z, s, cut_branch(z, s)).log_value);
}

Complex lambda_A(Complex z, const UnitarySample& s) {
  check_cut(z, s);
  const double half_theta = 0.5 * std::accumulate(s.eigenangles.begin(), s.eigenangles.end(), 0.0);
  Complex l = -0.5 * s.n * Complex(std::log(std::abs(z)), cut_branch(z, s)) - Complex(0.0, half_theta);
  Complex p = 1.0;
  for (double th : s.eigenangles) p *= std::polar(1.0, th) - z;
  return std::exp(l) * p;
}

double F_theta(double theta, const UnitarySample& s) {
  const Complex e = std::polar(1.0, -theta);
  double f = 1.0 - 0.5 * s.n;
  for (const Complex& m : s.deriv_roots) {
    const Complex d = 1.0 - e * m;
    if (std::abs(d) < 1e-14) fail(ErrorKind::derivative_zero, "F evaluated at a zero of p_A'");
    f += (1.0 / d).real();
  }
  return f;
}

RMTClassification classify_sample(const UnitarySample& s, const DiskTraceOptions& opt) {
  const int n = s.n;
  const int m = static_cast<int>(s.deriv_roots.size());
  RMTClassification out;
  out.eigen_hits.assign(static_cast<std::size_t>(n), 0);
  TracerOptions topt = opt.tracer;
  topt.h_max = std::min(topt.h_max, 0.5 / n);

  auto nearest_eigen = [&](double phi) {
    int best = 0;
    double bd = 1e9;
    for (int k = 0; k < n; ++k) {
      const double d = std::abs(wrap_angle(phi - s.eigenangles[k]));
      if (d < bd) bd = d, best = k;
    }
    return std::pair{best, bd};
  };

  for (int i = 0; i < m; ++i) {
    const Complex mu = s.deriv_roots[i];
    RMTZero zr;
    zr.mu_prime = mu;
    // arg eta_A'(mu') and |eta_A''/eta_A'|
    Complex lprod = 0, q = 0;
    double dmin = 1.0 - std::abs(mu);
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      lprod += std::log(mu - s.deriv_roots[j]);
      q += 1.0 / (mu - s.deriv_roots[j]);
      dmin = std::min(dmin, std::abs(mu - s.deriv_roots[j]));
    }
    const double a0 = cut_branch(mu, s);
    const double half_theta = 0.5 * std::accumulate(s.eigenangles.begin(), s.eigenangles.end(), 0.0);
    const double theta = std::arg(mu) - 0.5 * n * a0 - half_theta + ((n % 2) ? kPi : 0.0) + lprod.imag();
    const double ratio = std::abs(2.0 * (1.0 - 0.5 * n) / mu + 2.0 * q);
    double r = topt.start_radius / std::max(1.0, ratio);
    r = std::min(r, 0.2 * std::max(dmin, 1e-12));
    TracerOptions ropt = topt;
    ropt.h_min = std::min(topt.h_min, 0.25 * r);

    for (int sign : {+1, -1}) {
      const double phase = sign * kPi / 2;
      const Complex start = mu + r * double(sign) * Complex(0.0, 1.0) * std::polar(1.0, -theta);
      EtaASampler field{s, a0};
      auto event = [&](Complex prev, Complex cur, const FieldSample&, ContourTrace& tr) -> std::optional<Termination> {
        if (std::abs(cur) >= 1.0) {
          // |prev + w (cur - prev)| = 1
          const Complex d = cur - prev;
          const double A = std::norm(d), B = 2.0 * (std::conj(prev) * d).real(), C = std::norm(prev) - 1.0;
          const double w = (-B + std::sqrt(std::max(0.0, B * B - 4.0 * A * C))) / (2.0 * A);
          double phi = std::arg(prev + w * d);
          EtaASampler local{s, field.branch};
          for (int it = 0; it < 30; ++it) {
            const double res = wrap_angle(local(std::polar(1.0, phi)).log_value.imag() - phase);
            const double step = res / F_theta(phi, s);
            phi -= step;
            if (std::abs(step) < 1e-15) break;
          }
          tr.crossing = angle_mod(phi);
          tr.end = std::polar(1.0, phi);
          return Termination::crossed_unit_circle;
        }
        if (std::abs(cur) < opt.pole_radius) return Termination::reached_pole_region;
        return std::nullopt;
      };
      ContourTrace tr = trace_phase_curve(start, phase, 1, std::ref(field), event, opt.arc_cap, ropt);
      tr.color = sign > 0 ? TraceColor::green : TraceColor::purple;
      tr.origin = i;
      if (topt.keep_points) tr.points.insert(tr.points.begin(), mu);
      if (tr.termination == Termination::crossed_unit_circle) {
        const auto [k, d] = nearest_eigen(*tr.crossing);
        if (d > opt.match_tol) {
          std::ostringstream msg;
          msg << "unit-circle crossing at angle " << *tr.crossing << " is " << d << " from the nearest eigenangle";
          fail(ErrorKind::identity_violation, msg.str());
        }
        zr.crossings.push_back(k);
        ++out.eigen_hits[k];
      } else if (tr.termination != Termination::reached_pole_region) {
        std::ostringstream msg;
        msg << "trace from " << mu << " ended " << to_string(tr.termination) << " at " << tr.end;
        fail(ErrorKind::termination_failure, msg.str());
      }
      (sign > 0 ? zr.green : zr.purple) = std::move(tr);
    }
    zr.type_class = static_cast<ZeroType>(zr.crossings.size());
    if (zr.crossings.size() == 2) {
      const int a = zr.crossings[0], b = zr.crossings[1];
      if (b == (a + 1) % n) out.type2_pairs.push_back({a, b});
      else if (a == (b + 1) % n) out.type2_pairs.push_back({b, a});
      else {
        std::ostringstream msg;
        msg << "type-2 zero " << mu << " joins non-adjacent eigenvalues " << a << " and " << b;
        fail(ErrorKind::identity_violation, msg.str());
      }
    }
    (zr.type_class == ZeroType::T0 ? out.N0 : zr.type_class == ZeroType::T1 ? out.N1 : out.N2)++;
    out.zeros.push_back(std::move(zr));
  }

  std::ostringstream bad;
  if (out.N2 - out.N0 != 1) bad << "N2 - N0 = " << out.N2 - out.N0 << "; ";
  if (out.N1 + 2 * out.N0 != n - 2) bad << "N1 + 2 N0 = " << out.N1 + 2 * out.N0 << " vs n - 2 = " << n - 2 << "; ";
  for (int k = 0; k < n; ++k)
    if (out.eigen_hits[k] != 1) bad << "eigenvalue " << k << " hit " << out.eigen_hits[k] << " times; ";
  if (!bad.str().empty()) fail(ErrorKind::identity_violation, "n = " + std::to_string(n) + ": " + bad.str());
  return out;
}

std::vector<SectorCheck> sector_check(const UnitarySample& s) {
  const int n = s.n;
  const double limit = kTwoPi / (1.0 + 6.0 * n);
  std::vector<SectorCheck> out;
  for (int k = 0; k < n; ++k) {
    SectorCheck c;
    c.lo = k;
    c.hi = (k + 1) % n;
    c.gap = ccw_gap(s.eigenangles[c.lo], s.eigenangles[c.hi]);
    if (c.gap >= limit) continue;
    for (const Complex& m : s.deriv_roots) {
      if (1.0 - std::abs(m) >= 2.0 * c.gap) continue;
      if (ccw_gap(s.eigenangles[c.lo], std::arg(m)) <= c.gap) {
        c.contains_zero = true;
        break;
      }
    }
    out.push_back(c);
  }
  for (const auto& c : out)
    if (!c.contains_zero) {
      std::ostringstream msg;
      msg << "n = " << n << ": gap " << c.gap << " between eigenangles " << s.eigenangles[c.lo] << " and "
          << s.eigenangles[c.hi] << " has no zero of p_A' in its sector";
      fail(ErrorKind::counterexample, msg.str());
    }
  return out;
}

EnsembleStats batch_stats(int n, int count, std::uint64_t seed, unsigned threads, const DiskTraceOptions& opt,
                          bool keep_samples) {
  if (n < 2) fail(ErrorKind::invalid_argument, "matrix size must be at least 2");
  if (count < 1) fail(ErrorKind::invalid_argument, "sample count must be positive");
  struct Slot {
    int N[3] = {0, 0, 0};
    std::array<std::vector<double>, 3> radius;
    std::vector<double> gaps;
    long sectors = 0, counterexamples = 0;
    int resamples = 0;
    double min_F = 1e300, max_F_eigen = 0, max_integral = 0;
    bool identity_failed = false;
    SampleRecord record;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(count));
  DiskTraceOptions o = opt;
  o.tracer.keep_points = false;

  parallel_for(
      static_cast<std::size_t>(count),
      [&](std::size_t idx) {
        Slot& sl = slots[idx];
        std::uint64_t sd = CounterRng::mix(seed ^ CounterRng::mix(idx + 0x51afd7ed558ccd00ull));
        UnitarySample s;
        RMTClassification c;
        for (int attempt = 0;; ++attempt) {
          s = sample_cue(n, sd);
          sl.resamples += s.resamples;
          try {
            c = classify_sample(s, o);
            break;
          } catch (const Error& e) {
            if (e.kind() == ErrorKind::identity_violation) {
              sl.identity_failed = true;
              return;
            }
            if (e.kind() != ErrorKind::termination_failure || attempt + 1 >= kMaxResamples) throw;
            ++sl.resamples;
            sd = CounterRng::mix(s.seed + 0x2545f4914f6cdd1dull);
          }
        }
        for (const auto& z : c.zeros) {
          const int t = static_cast<int>(z.type_class);
          ++sl.N[t];
          sl.radius[t].push_back(n * (1.0 - std::abs(z.mu_prime)));
        }
        if (keep_samples) {
          SampleRecord& r = sl.record;
          r.index = static_cast<int>(idx);
          r.seed = s.seed;
          r.eigenangles = s.eigenangles;
          r.deriv_roots = s.deriv_roots;
          for (const auto& z : c.zeros) r.types.push_back(static_cast<int>(z.type_class));
          r.N0 = c.N0;
          r.N1 = c.N1;
          r.N2 = c.N2;
        }
        for (const auto& p : c.type2_pairs)
          sl.gaps.push_back(n * ccw_gap(s.eigenangles[p[0]], s.eigenangles[p[1]]) / kTwoPi);
        try {
          sl.sectors = static_cast<long>(sector_check(s).size());
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::counterexample) throw;
          sl.counterexamples = 1;
        }
        for (int j = 0; j < 1024; ++j) sl.min_F = std::min(sl.min_F, F_theta(kTwoPi * j / 1024.0, s));
        for (int k = 0; k < n; ++k) {
          sl.max_F_eigen = std::max(sl.max_F_eigen, std::abs(F_theta(s.eigenangles[k], s) - 0.5 * n));
          const double a = s.eigenangles[k];
          const double g = ccw_gap(a, s.eigenangles[(k + 1) % n]);
          const double I = adaptive_simpson([&](double th) { return F_theta(th, s); }, a, a + g, 1e-11, 60);
          sl.max_integral = std::max(sl.max_integral, std::abs(I - kPi));
        }
      },
      threads);

  EnsembleStats st;
  st.n = n;
  st.count = count;
  st.seed = seed;
  st.min_F = 1e300;
  for (const Slot& sl : slots) {
    st.N0 += sl.N[0];
    st.N1 += sl.N[1];
    st.N2 += sl.N[2];
    for (int t = 0; t < 3; ++t) st.scaled_radius[t].insert(st.scaled_radius[t].end(), sl.radius[t].begin(), sl.radius[t].end());
    st.type2_gaps.insert(st.type2_gaps.end(), sl.gaps.begin(), sl.gaps.end());
    st.identity_failures += sl.identity_failed;
    st.sector_checks += sl.sectors;
    st.sector_counterexamples += sl.counterexamples;
    st.resamples += sl.resamples;
    st.min_F = std::min(st.min_F, sl.min_F);
    st.max_F_at_eigen = std::max(st.max_F_at_eigen, sl.max_F_eigen);
    st.max_gap_integral_error = std::max(st.max_gap_integral_error, sl.max_integral);
    if (keep_samples && !sl.identity_failed) st.samples.push_back(sl.record);
  }
  for (auto& v : st.scaled_radius) std::sort(v.begin(), v.end());
  std::sort(st.type2_gaps.begin(), st.type2_gaps.end());
  return st;
}

}  // namespace eta
