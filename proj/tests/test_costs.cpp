#include <cmath>
#include <vector>

#include "doctest.h"
#include "ooc/costs.hpp"
#include "ooc/error.hpp"

using namespace ooc;

namespace {

CostFunction quad(double c, double lo, double hi) {
  return CostFunction("q", [c](double y) { return (y - c) * (y - c); }, [c](double y) { return 2 * (y - c); }, lo,
                      hi);
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int k = 0; k < n; ++k) g.push_back(lo + (hi - lo) * k / (n - 1));
  return g;
}

}  // namespace

TEST_CASE("paper suite") {
  const CostSuite s = builtin_suite("paper");
  REQUIRE(s.size() == 4);
  CHECK(s[0].value(8) == 0.0);
  CHECK(s[0].gradient(8) == 0.0);
  CHECK(s.l_lower() == 1.0);
  CHECK(s.l_upper() == 3.0);
  // a few hand-evaluated values
  CHECK(s[1].value(0) == 0.0);
  CHECK(s[1].value(1) == doctest::Approx(1.0 / (20 * std::sqrt(2.0)) + 1.0));
  CHECK(s[2].value(5) == doctest::Approx(25.0 / (80 * std::log(27.0))));
  CHECK(s[3].value(0) == doctest::Approx(std::log(2.0)));
  CHECK(s[3].value(1e4) == doctest::Approx(std::log(std::exp(-50.0) + std::exp(50.0)) + 1e8));
}

TEST_CASE("quadratic suite") {
  const CostSuite s = builtin_suite("quadratic(0,2)");
  REQUIRE(s.size() == 2);
  CHECK(s[1].gradient(1) == -2.0);
  CHECK(s.l_lower() == 2.0);
  CHECK(s.l_upper() == 2.0);
  CHECK(builtin_suite(s.descriptor()).size() == 2);
  CHECK_THROWS_AS(builtin_suite("cubic"), Error);
  CHECK_THROWS_AS(builtin_suite("quadratic(1,x)"), Error);
}

TEST_CASE("gradient finite-difference check") {
  const auto pts = grid(-10, 10, 100);
  // near the vertex the central difference is exact up to roundoff; far away
  // the eps |f| / h cancellation term dominates
  CHECK(check_gradient_fd(quad(8, 2, 2), grid(6, 10, 100)) <= 1e-9);
  CHECK(check_gradient_fd(quad(8, 2, 2), pts) <= 1e-7);
  const CostFunction zero("0", [](double) { return 0.0; }, [](double) { return 0.0; }, 1, 1);
  CHECK(check_gradient_fd(zero, pts) == 0.0);
  const CostSuite paper = builtin_suite("paper");
  for (const auto& f : paper) CHECK(check_gradient_fd(f, pts) <= 1e-6);
  // a wrong gradient is caught
  const CostFunction bad("bad", [](double y) { return y * y * y * y / 12; }, [](double y) { return y * y * y / 4; },
                         1, 1);
  CHECK(check_gradient_fd(bad, pts) > 1e-2);
}

TEST_CASE("curvature bound validation") {
  CHECK(validate_cost_bounds(quad(8, 2, 2), -20, 20, 50).ok);
  const BoundsCheck over = validate_cost_bounds(quad(8, 3, 2), -20, 20, 50);
  CHECK_FALSE(over.ok);
  CHECK(over.s1 != over.s2);
  CHECK_FALSE(validate_cost_bounds(quad(8, 1, 1.5), -20, 20, 50).ok);
  for (const auto& f : builtin_suite("paper")) CHECK(validate_cost_bounds(f, -20, 20, 201).ok);
}

TEST_CASE("oracle_minimize examples") {
  CHECK(std::abs(oracle_minimize(CostSuite("one", {quad(8, 2, 2)}), -10, 20) - 8) < 1e-12);
  const CostSuite four("four", {quad(8, 2, 2), quad(0, 2, 2), quad(5, 2, 2), quad(0, 2, 2)});
  CHECK(std::abs(oracle_minimize(four, -10, 10) - 3.25) < 1e-12);
  const CostSuite paper = builtin_suite("paper");
  const auto [lo, hi] = find_bracket(paper);
  const double y = oracle_minimize(paper, lo, hi);
  CHECK(std::round(y * 100) / 100 == doctest::Approx(3.24));
  CHECK(std::abs(paper.total_gradient(y)) <= 1e-12);
  CHECK(paper.total_value(y + 1e-4) > paper.total_value(y));
  CHECK(paper.total_value(y - 1e-4) > paper.total_value(y));
}

TEST_CASE("oracle_minimize needs a sign change") {
  try {
    (void)oracle_minimize(CostSuite("one", {quad(8, 2, 2)}), 9, 20);
    FAIL("expected NoBracket");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoBracket);
  }
}

TEST_CASE("quadratic oracle equals the mean of the centers") {
  const std::vector<double> centers{-3.5, 0.25, 7, 11.5, -0.125};
  const CostSuite s = quadratic_suite(centers);
  const auto [lo, hi] = find_bracket(s);
  double mean = 0;
  for (double c : centers) mean += c / centers.size();
  CHECK(std::abs(oracle_minimize(s, lo, hi) - mean) < 1e-10);
}
