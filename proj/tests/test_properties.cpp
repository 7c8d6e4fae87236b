#include <catch_amalgamated.hpp>

#include "matchlab/estimator/properties.hpp"

using namespace matchlab::estimator;

TEST_CASE("solver exactness suite") {
  for (const auto& r : check_solver_exactness(100, 3)) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.passed);
  }
}

TEST_CASE("structural inequalities") {
  for (const auto& r : check_structure(60, 4)) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.passed);
  }
}

TEST_CASE("density change exponent on the line") {
  for (const double p : {1.0, 2.0, 3.0}) {
    const auto c = check_change(1, p, 200);
    INFO("p = " << p << " slope " << c.sweep.fit.slope);
    CHECK(c.passed);
  }
}

TEST_CASE("covering weight in the plane") {
  const auto c = check_covering(2, 2.0, 1e4, 40, 500, 5);
  CHECK(c.passed);
}
