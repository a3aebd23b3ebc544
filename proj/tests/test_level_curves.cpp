#include <cmath>

#include "doctest.h"
#include "eta/level_curves.hpp"
#include "oracle/oracle.hpp"

using namespace eta;

namespace {

ZeroRecord deriv1_at(Complex z, int index = 1) {
  ZeroRecord r;
  r.location = z;
  r.kind = ZeroKind::deriv1;
  r.index = index;
  return r;
}

const std::vector<ZeroRecord>& low_zeros() {
  static const auto zeros = find_derivative_zeros({kDeriv1SigmaMin, kDeriv1SigmaMax, 10.0, 150.0}, 1);
  return zeros;
}

const std::vector<double>& low_ordinates() {
  static const std::vector<double> ords = [] {
    std::vector<double> v;
    for (const auto& z : find_critical_zeros(8.0, 200.0)) v.push_back(z.gamma());
    return v;
  }();
  return ords;
}

}  // namespace

TEST_CASE("Re log z = 0 is traced along the unit circle") {
  auto field = [](Complex z) {
    const Complex lz = std::log(z);
    return FieldSample{std::log(lz), 1.0 / (z * lz), (-1.0 / (z * z)) / lz, true};
  };
  auto event = [](Complex, Complex, const FieldSample&, ContourTrace& tr) -> std::optional<Termination> {
    if (tr.arc_length > 2.0) return Termination::left_domain;
    return std::nullopt;
  };
  TracerOptions opt;
  const ContourTrace tr = trace_phase_curve(std::polar(1.0, 0.5), kPi / 2, 1, field, event, 100.0, opt);
  CHECK(tr.termination == Termination::left_domain);
  REQUIRE(tr.points.size() > 5);
  double worst = 0;
  for (Complex z : tr.points) worst = std::max(worst, std::abs(std::abs(z) - 1.0));
  CHECK(worst < 1e-8);
  CHECK(std::arg(tr.points.back()) > 2.4);
}

TEST_CASE("first zero of zeta' is type 2 with crossings at gamma_1 and gamma_2") {
  const ZeroRecord z = deriv1_at(oracle_complex(kZetaPrimeZeroOracle[0]));
  const SearchBox dom = classification_domain(z);
  const ContourTrace green = trace_level_curve(z.location, +1, TraceField::re_eta, dom);
  const ContourTrace purple = trace_level_curve(z.location, -1, TraceField::re_eta, dom);
  CHECK(green.termination == Termination::crossed_critical_line);
  CHECK(purple.termination == Termination::crossed_critical_line);
  const double g1 = static_cast<double>(oracle_real(kCriticalZeroOracle[0]));
  const double g2 = static_cast<double>(oracle_real(kCriticalZeroOracle[1]));
  const double a = std::min(*green.crossing, *purple.crossing), b = std::max(*green.crossing, *purple.crossing);
  CHECK(std::abs(a - g1) < 1e-6);
  CHECK(std::abs(b - g2) < 1e-6);
}

TEST_CASE("traces keep the corrector residual and their color") {
  const ZeroRecord z = deriv1_at(oracle_complex(kZetaPrimeZeroOracle[4]));
  for (int sign : {+1, -1}) {
    const ContourTrace tr = trace_level_curve(z.location, sign, TraceField::re_eta, classification_domain(z));
    CHECK(tr.max_residual < 1e-9);
    CHECK(tr.color == (sign > 0 ? TraceColor::green : TraceColor::purple));
    CHECK(std::abs(tr.phase_log) < 1e-6);
    for (std::size_t i = 1; i + 1 < tr.points.size(); ++i) {
      const Complex eta = eta_pack(tr.points[i]).eta;
      CHECK(std::abs(eta.real()) < 1e-9 * std::max(1.0, std::abs(eta)));
      CHECK((sign > 0 ? eta.imag() > 0 : eta.imag() < 0));
    }
  }
}

TEST_CASE("first eight zeros of zeta' have types 2,2,2,2,1,2,1,2") {
  const auto& zeros = low_zeros();
  REQUIRE(zeros.size() >= 8);
  const int expected[8] = {2, 2, 2, 2, 1, 2, 1, 2};
  for (int i = 0; i < 8; ++i) {
    const auto c = classify_zero(zeros[i], classification_domain(zeros[i]), low_ordinates());
    CHECK(c.resolved);
    CHECK_MESSAGE(static_cast<int>(c.type_class) == expected[i], "zero " << i + 1 << " at " << zeros[i].location);
    CHECK(c.crossings.size() == static_cast<std::size_t>(c.type_class));
  }
}

TEST_CASE("first two type-0 zeros sit near heights 113 and 132") {
  std::vector<double> heights;
  for (const auto& z : low_zeros()) {
    const auto c = classify_zero(z, classification_domain(z), low_ordinates());
    if (c.type_class == ZeroType::T0) heights.push_back(z.gamma());
  }
  REQUIRE(heights.size() >= 2);
  CHECK(std::abs(heights[0] - 113.0) < 1.0);
  CHECK(std::abs(heights[1] - 132.0) < 1.0);
}

TEST_CASE("classify_window on (10, 500)") {
  const auto w = classify_window(10.0, 500.0);
  const auto& r = w.report;
  CHECK(r.unresolved == 0);
  CHECK(r.bijectivity_failures == 0);
  CHECK(r.identity_critical);
  CHECK(r.identity_deriv);
  CHECK(r.N1 + 2 * r.N2 == r.critical);
  CHECK(r.N0 + r.N1 + r.N2 == r.deriv1);
  CHECK(r.t0 <= 10.0);
  CHECK(r.t1 >= 500.0);
  int wide_pairs = 0;
  for (const auto& rec : w.catalog.records) {
    if (rec.kind != ZeroKind::deriv1) continue;
    REQUIRE(rec.type_class.has_value());
    CHECK(rec.paired_crossings.has_value() == (*rec.type_class == ZeroType::T2));
    if (rec.paired_crossings) {
      const auto [lo, hi] = *rec.paired_crossings;
      CHECK(lo < hi);
      const bool straddles = lo < rec.gamma() && rec.gamma() < hi;
      if (!straddles) {
        ++wide_pairs;
        CHECK(rec.gamma() < 40.0);
        CHECK((hi - lo) * std::log(rec.gamma()) / kTwoPi > 1.0);
      }
    }
    CHECK(rec.beta() > 0.5);
  }
  // low zeros at 23.30, 31.71 and 38.49 have both crossings below gamma'
  CHECK(wide_pairs == 3);
}

TEST_CASE("traces are deterministic") {
  const ZeroRecord z = low_zeros()[10];
  const auto a = trace_level_curve(z.location, -1, TraceField::re_eta, classification_domain(z));
  const auto b = trace_level_curve(z.location, -1, TraceField::re_eta, classification_domain(z));
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i] == b.points[i]);
}

TEST_CASE("Spira map on (100, 200)") {
  const SpiraWindowReport rep = spira_window(100.0, 200.0);
  CHECK(rep.deriv1 > 0);
  CHECK(rep.injective);
  CHECK(rep.onto);
  CHECK(rep.deriv1 == rep.deriv2);
  CHECK(2 * rep.right_of_partner > rep.deriv1);
  CHECK(rep.max_ordinate_shift < 0.5);
  for (const auto& z : rep.deriv1_zeros) {
    REQUIRE(z.spira_partner.has_value());
    EvalParams p;
    p.derivative_order_max = 2;
    CHECK(std::abs(zeta_pack(*z.spira_partner, p)[2]) < 1e-8);
  }
}

TEST_CASE("Spira trace leaves the pole to the right") {
  const ZeroRecord z = deriv1_at(oracle_complex(kZetaPrimeZeroOracle[1]));
  const SpiraResult r = spira_map(z);
  REQUIRE(r.trace.points.size() > 2);
  CHECK(r.trace.points[1].real() > z.beta());
  CHECK(r.residual < 1e-8);
  CHECK(r.trace.termination == Termination::reached_zero);
  CHECK_THROWS_AS(spira_map(deriv1_at({0.4, 50.0})), Error);
}

TEST_CASE("Z-curves on (10, 300)") {
  const SearchBox win{-8.0, 12.0, 10.0, 300.0};
  int seeds = 0, reached = 0, right_of_one = 0;
  for (int n = 1; n * g_line_spacing() < win.t_max; n += 2) {
    if (n * g_line_spacing() < win.t_min) continue;
    ++seeds;
    const ZCurveResult z = z_curve_trace(n, win);
    CHECK(z.seed_t == doctest::Approx(n * g_line_spacing()));
    if (!z.zero) continue;
    ++reached;
    if (z.zero->real() > 1.0) ++right_of_one;
    EvalParams p;
    p.derivative_order_max = 1;
    CHECK(std::abs(zeta_pack(*z.zero, p)[1]) < 1e-10);
  }
  const double expected = std::log(1.5) / kTwoPi * (win.t_max - win.t_min);
  CHECK(std::abs(reached - expected) <= 3.0);
  CHECK(right_of_one * 10 >= reached * 9);
  CHECK(seeds >= reached);
  CHECK_THROWS_AS(z_curve_trace(4, win), Error);
  CHECK_THROWS_AS(z_curve_trace(201, win), Error);
}
