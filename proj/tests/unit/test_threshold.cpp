#include <doctest.h>

#include <cmath>

#include "wgwin/matching.hpp"
#include "wgwin/spectrum.hpp"
#include "wgwin/threshold.hpp"

using namespace wgwin;

namespace {

double critical_60(double d) { return critical_length(d, 2, 60, 1e-11); }

}  // namespace

TEST_CASE("critical lengths lie in their counting cells") {
  for (double d : {kPi, kPi / 2.0}) {
    const auto ls = critical_lengths(d, 4, 40, 1e-10);
    REQUIRE(ls.size() == 4);
    CHECK(ls[0] == 0.0);
    const double c = count_period(Geometry(d, 0.0));
    for (int n = 2; n <= 4; ++n) {
      CHECK(ls[n - 1] > (n - 1) * c);
      CHECK(ls[n - 1] < n * c);
      CHECK(ls[n - 1] > ls[n - 2]);
    }
  }
  CHECK_THROWS_AS((void)critical_length(kPi, 1, 40, 1e-10), DomainError);
  CriticalOptions opt;
  opt.l_max = 3.0;
  try {
    (void)critical_lengths(kPi, 4, 40, 1e-10, opt);
    FAIL("expected GridExhausted");
  } catch (const GridExhausted& e) {
    CHECK(e.found().size() == 2);
  }
}

TEST_CASE("threshold indicator changes sign at l_2") {
  const double l2 = critical_60(kPi);
  const Geometry g(kPi, l2);
  const double a = threshold_indicator(g.with_l(l2 - 1e-3), Parity::Odd, 60);
  const double b = threshold_indicator(g.with_l(l2 + 1e-3), Parity::Odd, 60);
  CHECK(a * b < 0.0);
}

TEST_CASE("second eigenvalue appears at l_2") {
  for (double d : {kPi, kPi / 2.0}) {
    const double l2 = critical_60(d);
    SpectrumOptions opt;
    opt.threshold_margin = 1e-13;
    opt.root.tol = 1e-13;
    CHECK(discrete_spectrum(Geometry(d, l2 - 1e-2), 60, opt).points.size() == 1);
    CHECK(discrete_spectrum(Geometry(d, l2 + 1e-2), 60, opt).points.size() == 2);
  }
}

TEST_CASE("threshold solution at d = pi") {
  const double l2 = critical_60(kPi);
  const auto ts = threshold_solution(kPi, 2, l2, 60, 1e-11);
  CHECK(ts.parity == Parity::Odd);
  CHECK(ts.zero_mode_coeff == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-12));
  CHECK(ts.second_singular > 1e3 * ts.smallest_singular);
  // Bounded at infinity: tends to sqrt(2/pi) sin(x2), remainder e^{-sqrt3 x1}.
  const double far = evaluate_field(ts.field, 8.0, kPi / 2.0);
  CHECK(std::abs(far - std::sqrt(2.0 / kPi)) < 10.0 * std::exp(-std::sqrt(3.0) * (8.0 - l2)));
  // Equal widths: even under x2 -> -x2, like the first full-strip mode; odd
  // in x1.
  for (double x1 : {0.7, 1.9, 3.5}) {
    for (double x2 : {0.4, 1.3, 2.5}) {
      CHECK(evaluate_field(ts.field, x1, -x2) ==
            doctest::Approx(evaluate_field(ts.field, x1, x2)).scale(1e-12));
      CHECK(evaluate_field(ts.field, -x1, x2) ==
            doctest::Approx(-evaluate_field(ts.field, x1, x2)).scale(1e-12));
    }
  }
  // The edge coefficient is shared by both strips here, doubling pi alpha^2/2.
  CHECK(kPi * ts.alpha * ts.alpha / 2.0 == doctest::Approx(2.0 * ts.mu).epsilon(0.02));
}

TEST_CASE("mu against the edge coefficient for d < pi") {
  const double d = kPi / 2.0;
  const double l2 = critical_60(d);
  const auto ts = threshold_solution(d, 2, l2, 60, 1e-11);
  CHECK(ts.mu > 0.0);
  CHECK(ts.alpha_spread < 0.02 * std::abs(ts.alpha));
  CHECK(kPi * ts.alpha * ts.alpha / 2.0 == doctest::Approx(ts.mu).epsilon(0.02));
  CHECK_THROWS_AS((void)edge_coefficient(ts.field, 2.0), DomainError);
}

TEST_CASE("emergence prediction") {
  const double d = kPi / 2.0;
  const double l2 = critical_60(d);
  const auto ts = threshold_solution(d, 2, l2, 60, 1e-11);
  CHECK(emergence_prediction(ts, l2) == 1.0);
  CHECK(emergence_prediction(ts, l2 + 0.1) ==
        doctest::Approx(1.0 - ts.mu * ts.mu * 0.01).epsilon(1e-14));
  CHECK_THROWS_AS((void)emergence_prediction(ts, l2 - 1e-3), DomainError);
  // Against the solver at a small offset.
  RootOptions ro;
  ro.tol = 1e-13;
  const auto sp = solve_in_bracket(Geometry(d, l2 + 0.0125), 2, 60, ro, 1.0 - 1e-13);
  const double gap = 1.0 - sp.lambda;
  const double pred = 1.0 - emergence_prediction(ts, l2 + 0.0125);
  CHECK(gap == doctest::Approx(pred).epsilon(0.05));
}

TEST_CASE("gradient energy against finite differences of the field") {
  const Geometry g(kPi / 2.0, 1.5);
  const auto ef = eigenfunction(g, solve_in_bracket(g, 1, 60, 1e-12), 60);
  // Midpoint rule over the upper and lower strips for x1 > l, where the
  // series converge fast; compared with the mode sums of the same region.
  double num = 0.0;
  const double hx = 0.01, hy = 0.01;
  for (double x1 = g.l() + hx / 2; x1 < g.l() + 25.0; x1 += hx) {
    for (double x2 = -g.d() + hy / 2; x2 < kPi; x2 += hy) {
      if (std::abs(x2) < hy) continue;
      const double v = evaluate_field_dx1(ef, x1, x2);
      num += v * v * hx * hy;
    }
  }
  double modes = 0.0;
  for (std::size_t q = 1; q <= ef.b.size(); ++q) {
    modes += 0.5 * std::sqrt(double(q * q) - ef.spectral.lambda) * ef.b[q - 1] * ef.b[q - 1];
  }
  for (std::size_t q = 1; q <= ef.c.size(); ++q) {
    const double w = kPi * double(q) / g.d();
    modes += 0.5 * std::sqrt(w * w - ef.spectral.lambda) * ef.c[q - 1] * ef.c[q - 1];
  }
  CHECK(num == doctest::Approx(modes).epsilon(0.02));
  CHECK(gradient_energy_x1(ef) > 2.0 * modes);
}
