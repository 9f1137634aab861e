#include "doctest.h"

#include "property_suite.hpp"

TEST_CASE("properties over random rational affine maps") {
  for (auto& r : props::run()) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.maps >= 20);
    CHECK(r.checks > 0);
    CHECK(r.ok);
  }
}
