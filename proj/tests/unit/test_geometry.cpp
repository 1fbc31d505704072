#include <doctest.h>

#include <cmath>

#include "wgwin/geometry.hpp"

using namespace wgwin;

TEST_CASE("kappa from strip widths") {
  CHECK(Geometry(kPi, 2.0).kappa() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(Geometry(kPi / 3.0, 1.0).kappa() == doctest::Approx(0.75).epsilon(1e-15));
  CHECK_THROWS_AS(Geometry(4.0, 1.0), DomainError);
  CHECK_THROWS_AS(Geometry(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(Geometry(kPi, -1.0), DomainError);
  CHECK(Geometry(kPi, 1.0).symmetric());
  CHECK_FALSE(Geometry(kPi / 2.0, 1.0).symmetric());
}

TEST_CASE("lambda bounds") {
  CHECK(lambda_bound(Geometry(kPi, 5.0), 1) ==
        doctest::Approx(0.25 + kPi * kPi / 100.0).epsilon(1e-14));
  CHECK(lambda_bound(Geometry(kPi, 5.0), 1) == doctest::Approx(0.3486960).epsilon(1e-7));
  CHECK(lambda_bound(Geometry(kPi, 0.3), 0) == 0.25);
  CHECK(lambda_bound(Geometry(kPi / 3.0, 2.0), 2) ==
        doctest::Approx(0.5625 + kPi * kPi * 4.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("bounds increase in m and decrease in l") {
  for (double d : {kPi, kPi / 2.0, kPi / 4.0}) {
    for (double l : {0.3, 1.0, 2.5, 9.0}) {
      const Geometry g(d, l);
      for (int m = 0; m < 6; ++m) {
        CHECK(lambda_bound(g, m) < lambda_bound(g, m + 1));
        if (m > 0) CHECK(lambda_bound(g.with_l(l * 1.1), m) < lambda_bound(g, m));
      }
    }
  }
}

TEST_CASE("count bounds") {
  auto c = count_bounds(Geometry(kPi, 2.0));
  CHECK(c.lower == 1);
  CHECK(c.upper == 2);
  c = count_bounds(Geometry(kPi, 20.0));
  CHECK(c.lower == 11);
  CHECK(c.upper == 12);
  c = count_bounds(Geometry(kPi, 1e-6));
  CHECK(c.lower == 0);
  CHECK(c.upper == 1);
}

TEST_CASE("brackets") {
  const Geometry g(kPi, 2.0);
  auto b = bracket_for(g, 1);
  CHECK(b.lower == 0.25);
  CHECK(b.upper == doctest::Approx(0.25 + kPi * kPi / 16.0));
  CHECK(b.is_below_threshold);
  b = bracket_for(g, 2);
  CHECK(b.lower == doctest::Approx(0.8669).epsilon(1e-4));
  CHECK(b.upper == doctest::Approx(2.717).epsilon(1e-3));
  CHECK_FALSE(b.is_below_threshold);
  CHECK_THROWS_AS((void)bracket_for(g, 0), DomainError);
}
