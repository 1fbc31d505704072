#include <doctest.h>

#include <cmath>

#include "wgwin/matching.hpp"

using namespace wgwin;

TEST_CASE("parity follows the index") {
  CHECK(parity_for_index(1) == Parity::Even);
  CHECK(parity_for_index(2) == Parity::Odd);
  CHECK(parity_for_index(3) == Parity::Even);
  CHECK(std::string(to_string(Parity::Odd)) == "odd");
}

TEST_CASE("assembly is deterministic") {
  const Geometry g(kPi, 2.0);
  const auto a = assemble(g, 0.5, Parity::Even, 40);
  const auto b = assemble(g, 0.5, Parity::Even, 40);
  CHECK(a.entries.rows() == a.entries.cols());
  CHECK((a.entries.array() == b.entries.array()).all());
  CHECK(indicator(a) == indicator(b));
  CHECK(std::isfinite(indicator(a)));
}

TEST_CASE("assembly rejects lambda outside the open interval") {
  const Geometry g(kPi, 2.0);
  CHECK_THROWS_AS((void)assemble(g, 0.25, Parity::Even, 20), DomainError);
  CHECK_THROWS_AS((void)assemble(g, 1.0, Parity::Even, 20), DomainError);
  CHECK_THROWS_AS((void)assemble(Geometry(kPi, 0.0), 0.5, Parity::Even, 20),
                  DomainError);
}

TEST_CASE("indicator changes sign across the first eigenvalue") {
  const Geometry g(kPi, 2.0);
  const SpectralPoint sp = solve_in_bracket(g, 1, 40, 1e-12);
  const double below = indicator(assemble(g, sp.lambda - 1e-4, Parity::Even, 40));
  const double above = indicator(assemble(g, sp.lambda + 1e-4, Parity::Even, 40));
  CHECK(below * above < 0.0);
}

TEST_CASE("indicator sign is stable in an empty bracket") {
  // Odd sector at l = 2, d = pi has no eigenvalue below the threshold.
  const Geometry g(kPi, 2.0);
  int sign = 0;
  for (int n : {30, 40, 60}) {
    const double v = indicator(assemble(g, 0.9, Parity::Odd, n));
    CHECK(v != 0.0);
    const int s = v > 0.0 ? 1 : -1;
    if (sign != 0) CHECK(s == sign);
    sign = s;
  }
}

TEST_CASE("solver output") {
  const Geometry g(kPi, 2.0);
  const SpectralPoint sp = solve_in_bracket(g, 1, 60, 1e-10);
  CHECK(sp.m == 1);
  CHECK(sp.parity == Parity::Even);
  CHECK(sp.lambda > 0.25);
  CHECK(sp.lambda < lambda_bound(g, 1));
  CHECK(sp.k == doctest::Approx(std::sqrt(1.0 - sp.lambda)));
  CHECK(sp.n_modes_used == 60);
  CHECK_THROWS_AS((void)solve_in_bracket(Geometry(kPi, 0.0), 1, 60, 1e-10),
                  DomainError);
  CHECK_THROWS_AS((void)solve_in_bracket(g, 2, 60, 1e-10), NoSignChange);
}

TEST_CASE("eigenvalue in the third bracket at d = pi/2, l = 6") {
  const Geometry g(kPi / 2.0, 6.0);
  const SpectralPoint sp = solve_in_bracket(g, 3, 60, 1e-10);
  CHECK(sp.lambda > lambda_bound(g, 2));
  CHECK(sp.lambda < lambda_bound(g, 3));
}

TEST_CASE("eigenfunction normalization, parity and walls") {
  const Geometry g(kPi / 2.0, 3.0);
  for (int m : {1, 2}) {
    const SpectralPoint sp = solve_in_bracket(g, m, 60, 1e-12);
    const auto ef = eigenfunction(g, sp, 60);
    CAPTURE(m);
    const double x = g.l() + 5.0;
    // Next upper mode decays like exp(-sqrt(4 - lambda) 5).
    const double envelope = std::exp(-std::sqrt(4.0 - sp.lambda) * 5.0);
    CHECK(std::abs(evaluate_field(ef, x, kPi / 2.0) -
                   std::sqrt(2.0 / kPi) * std::exp(-sp.k * x)) < envelope);
    // Dirichlet walls.
    for (double x1 : {0.3, 1.7, 4.0, 7.0}) {
      CHECK(std::abs(evaluate_field(ef, x1, kPi)) < 1e-12);
      CHECK(std::abs(evaluate_field(ef, x1, -g.d())) < 1e-12);
    }
    CHECK(std::abs(evaluate_field(ef, 4.0, 0.0)) < 1e-12);
    if (m == 2) {
      for (double x2 : {-1.0, -0.3, 0.5, 2.0}) {
        CHECK(evaluate_field(ef, 0.0, x2) == 0.0);
      }
    } else {
      for (double x2 : {-1.0, 0.5, 2.0}) {
        CHECK(std::abs(evaluate_field_dx1(ef, 0.0, x2)) < 1e-12);
      }
    }
    // Evenness/oddness in x1.
    const double s = m == 1 ? 1.0 : -1.0;
    CHECK(evaluate_field(ef, -2.2, 1.0) == doctest::Approx(s * evaluate_field(ef, 2.2, 1.0)));
  }
}

TEST_CASE("field is continuous across the window edge") {
  const Geometry g(kPi, 2.0);
  const auto ef = eigenfunction(g, solve_in_bracket(g, 1, 60, 1e-12), 60);
  for (double x2 : {-2.0, -1.0, 1.0, 2.0}) {
    const double in = evaluate_field(ef, g.l() - 1e-9, x2);
    const double out = evaluate_field(ef, g.l() + 1e-9, x2);
    CHECK(std::abs(in - out) < 2e-3 * std::max(1e-3, std::abs(in)) + 1e-6);
  }
}
