#include "eta/common.hpp"

#include <cmath>
#include <cstdlib>

namespace eta {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::pole: return "pole";
    case ErrorKind::accuracy_precondition: return "accuracy-precondition";
    case ErrorKind::height_cap: return "height-cap";
    case ErrorKind::count_mismatch: return "count-mismatch";
    case ErrorKind::multiple_zero: return "suspected-multiple-zero";
    case ErrorKind::edge_proximity: return "edge-proximity";
    case ErrorKind::bracket_failure: return "bracket-failure";
    case ErrorKind::unresolved_classification: return "unresolved-classification";
    case ErrorKind::bijectivity_failure: return "bijectivity-failure";
    case ErrorKind::termination_failure: return "termination-failure";
    case ErrorKind::seed_invalid: return "seed-invalid";
    case ErrorKind::vanishing_derivative: return "vanishing-derivative";
    case ErrorKind::geometry_infeasible: return "geometry-infeasible";
    case ErrorKind::extrapolation_unstable: return "extrapolation-unstable";
    case ErrorKind::incomplete_catalog: return "incomplete-catalog";
    case ErrorKind::quadrature_nonconvergence: return "quadrature-nonconvergence";
    case ErrorKind::root_solver_nonconvergence: return "root-solver-nonconvergence";
    case ErrorKind::unit_modulus_violation: return "unit-modulus-violation";
    case ErrorKind::identity_violation: return "identity-violation";
    case ErrorKind::counterexample: return "counterexample";
    case ErrorKind::branch_cut_proximity: return "branch-cut-proximity";
    case ErrorKind::derivative_zero: return "evaluation-at-derivative-zero";
    case ErrorKind::version_mismatch: return "version-mismatch";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::empty_input: return "empty-input";
    case ErrorKind::config_error: return "config-error";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

double wrap_angle(double x) noexcept {
  double r = std::remainder(x, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("ETA_ATLAS_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

}  // namespace eta
