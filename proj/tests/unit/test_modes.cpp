#include <doctest.h>

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>

#include "wgwin/modes.hpp"

using namespace wgwin;

namespace {

using Quad = boost::math::quadrature::gauss<double, 30>;

// Closed forms written out here, independent of make_mode.
double full(double d, int i, double x) {
  const double kappa = kPi / (kPi + d);
  return std::sqrt(2.0 / (kPi + d)) * std::sin(i * kappa * (x - kPi));
}
double upper(int j, double x) { return std::sqrt(2.0 / kPi) * std::sin(j * x); }
double lower(double d, int j, double x) {
  return std::sqrt(2.0 / d) * std::sin(kPi * j * x / d);
}

double quad(auto f, double a, double b) {
  // Split so each piece holds only a few oscillations.
  const int pieces = 16;
  double s = 0.0;
  for (int p = 0; p < pieces; ++p) {
    s += Quad::integrate(f, a + (b - a) * p / pieces, a + (b - a) * (p + 1) / pieces);
  }
  return s;
}

}  // namespace

TEST_CASE("mode values") {
  const Geometry g(kPi, 1.0);
  CHECK(mode_value(make_mode(Region::UpperStrip, 1, g), g, kPi / 2.0) ==
        doctest::Approx(std::sqrt(2.0 / kPi)));
  CHECK(std::abs(mode_value(make_mode(Region::FullStrip, 1, g), g, kPi)) < 1e-15);
  const Geometry h(kPi / 2.0, 1.0);
  CHECK(mode_value(make_mode(Region::LowerStrip, 2, h), h, -h.d() / 4.0) ==
        doctest::Approx(-std::sqrt(2.0 / h.d())));
  CHECK_THROWS_AS((void)make_mode(Region::UpperStrip, 0, g), DomainError);
}

TEST_CASE("modes are orthonormal") {
  for (double d : {kPi, kPi / 2.0, kPi / 4.0}) {
    const Geometry g(d, 1.0);
    for (Region r : {Region::UpperStrip, Region::LowerStrip, Region::FullStrip}) {
      const auto cs = cross_section(r, g);
      for (int i = 1; i <= 4; ++i) {
        for (int j = 1; j <= 4; ++j) {
          const auto mi = make_mode(r, i, g);
          const auto mj = make_mode(r, j, g);
          const double v = quad(
              [&](double x) { return mode_value(mi, g, x) * mode_value(mj, g, x); },
              cs.lo, cs.hi);
          CHECK(v == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("longitudinal rates") {
  const Geometry g(kPi, 1.0);
  CHECK(longitudinal_rate(Region::UpperStrip, 1, 1.0, g) == 0.0);
  CHECK(longitudinal_rate(Region::UpperStrip, 2, 1.0, g) ==
        doctest::Approx(std::sqrt(3.0)));
  CHECK(longitudinal_rate(Region::LowerStrip, 1, 0.75, g) == doctest::Approx(0.5));
  CHECK(longitudinal_rate(Region::FullStrip, 1, 0.75, g) == doctest::Approx(0.25 - 0.75));
}

TEST_CASE("overlap closed forms match quadrature") {
  CHECK(overlap_upper(Geometry(kPi, 1.0), 2, 1) ==
        doctest::Approx(-std::sqrt(2.0) / 2.0).epsilon(1e-13));
  for (double d : {kPi, kPi / 2.0, kPi / 4.0}) {
    const Geometry g(d, 1.0);
    double worst = 0.0;
    for (int i = 1; i <= 50; ++i) {
      for (int j = 1; j <= 50; ++j) {
        const double qu =
            quad([&](double x) { return full(d, i, x) * upper(j, x); }, 0.0, kPi);
        const double ql =
            quad([&](double x) { return full(d, i, x) * lower(d, j, x); }, -d, 0.0);
        worst = std::max({worst, std::abs(qu - overlap_upper(g, i, j)),
                          std::abs(ql - overlap_lower(g, i, j))});
      }
    }
    CAPTURE(d);
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("resonant overlap uses its limit") {
  // kappa = 1/2 at d = pi: i = 2j is the coincident case.
  const Geometry g(kPi, 1.0);
  for (int j = 1; j <= 5; ++j) {
    const double q =
        quad([&](double x) { return full(kPi, 2 * j, x) * upper(j, x); }, 0.0, kPi);
    CHECK(overlap_upper(g, 2 * j, j) == doctest::Approx(q).epsilon(1e-12));
  }
}

TEST_CASE("Parseval defect") {
  // The full mode is nonzero on x2 = 0 where every strip mode vanishes, so
  // the strip coefficients fall off like 1/j and the defect like
  // 4 sin^2(i kappa pi) / (pi^2 J).
  for (double d : {kPi, kPi / 2.0}) {
    const Geometry g(d, 1.0);
    for (int i = 1; i <= 5; ++i) {
      double prev = 0.0;
      double sum = 0.0;
      bool increasing = true;
      const int J = 200;
      for (int j = 1; j <= J; ++j) {
        sum += overlap_upper(g, i, j) * overlap_upper(g, i, j) +
               overlap_lower(g, i, j) * overlap_lower(g, i, j);
        increasing = increasing && sum >= prev;
        prev = sum;
      }
      CAPTURE(d);
      CAPTURE(i);
      CHECK(increasing);
      CHECK(sum <= 1.0 + 1e-12);
      const double s = std::sin(i * g.kappa() * kPi);
      const double tail = 4.0 * s * s / (kPi * kPi * J);
      CHECK(1.0 - sum == doctest::Approx(tail).epsilon(0.05).scale(1e-4));
      CHECK(1.0 - sum < 2.1e-3);
    }
  }
}

TEST_CASE("mirror symmetry at equal widths") {
  const Geometry g(kPi, 1.0);
  for (int i = 1; i <= 8; ++i) {
    for (int j = 1; j <= 8; ++j) {
      // x2 -> -x2 maps the full mode i to (-1)^(i+1) times itself.
      const double s = (i % 2 == 1) ? 1.0 : -1.0;
      CHECK(overlap_lower(g, i, j) == doctest::Approx(-s * overlap_upper(g, i, j)).scale(1.0).epsilon(1e-13));
    }
  }
}
