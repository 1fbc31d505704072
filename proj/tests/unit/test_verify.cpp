#include <doctest.h>

#include <json.hpp>

#include <cmath>

#include "wgwin/verify.hpp"

using namespace wgwin;

namespace {

SweepTable small_table() {
  return sweep_over_l(kPi, {0.5, 1.0, 2.0, 4.0, 6.0}, 40, 1e-10);
}

}  // namespace

TEST_CASE("line fit") {
  const auto f = fit_line({1.0, 2.0, 3.0, 4.0}, {3.0, 5.0, 7.0, 9.0});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
}

TEST_CASE("brackets and counting on a real sweep pass") {
  const auto t = small_table();
  CHECK(check_brackets(t).passed);
  CHECK(check_counting(t).passed);
}

TEST_CASE("empty table passes vacuously") {
  SweepTable t;
  t.d = kPi;
  const auto r = check_brackets(t);
  CHECK(r.passed);
  CHECK(r.details.find("vacuously") != std::string::npos);
  CHECK(check_counting(t).passed);
}

TEST_CASE("injected violations fail") {
  auto t = small_table();
  auto bad = t;
  const Geometry g(kPi, bad.l_values[2]);
  bad.rows[2][0].lambda = lambda_bound(g, 1);
  CHECK_FALSE(check_brackets(bad).passed);

  auto missing = t;
  missing.counts[4] = 0;
  CHECK_FALSE(check_counting(missing).passed);

  auto rising = t;
  rising.rows[3][0].lambda = rising.rows[1][0].lambda + 1e-3;
  CHECK_FALSE(check_monotonicity(rising).passed);
}

TEST_CASE("report passes iff every comparison holds") {
  const auto t = small_table();
  for (const auto& r : {check_brackets(t), check_counting(t)}) {
    CHECK(r.measured.size() == r.expected.size());
    CHECK(r.measured.size() == r.tolerances.size());
  }
}

TEST_CASE("parity and decay at moderate sizes") {
  const Geometry g(kPi / 2.0, 2.0);
  const auto sp = solve_in_bracket(g, 1, 60, 1e-12);
  CHECK(check_decay(eigenfunction(g, sp, 60), g).passed);
  CHECK(check_parity(Geometry(kPi / 2.0, 6.0), 60, 1e-10).passed);
}

TEST_CASE("accumulation rejects xi outside the band") {
  CHECK_THROWS_AS((void)check_accumulation(kPi, 0.1, {4.0}, 40, 1e-10), DomainError);
  CHECK_THROWS_AS((void)check_accumulation(kPi, 1.0, {4.0}, 40, 1e-10), DomainError);
}

TEST_CASE("json round trip") {
  CheckReport r;
  r.check_name = "x";
  r.passed = true;
  r.measured = {1.0};
  r.expected = {2.0};
  r.tolerances = {0.5};
  r.tolerance = 0.5;
  const auto j = nlohmann::json::parse(reports_to_json({r}));
  REQUIRE(j.is_array());
  CHECK(j[0]["name"] == "x");
  CHECK(j[0]["passed"] == true);
  CHECK(reports_summary({r}).find("1/1") != std::string::npos);
  CHECK_THROWS_AS((void)run_suite(kPi, "nope", 40, 1e-10), DomainError);
}
