#include <doctest.h>

#include "fabric/error.hpp"
#include "fabric/years.hpp"

using namespace fabric;

TEST_CASE("exact year resolves to itself") {
  const auto r = resolve_year({2016, 2020, 2023}, 2020, 3, "t");
  CHECK(r.resolved == 2020);
  CHECK(r.exact());
}

TEST_CASE("nearest year inside the window, ties to the earlier year") {
  CHECK(resolve_year({2016, 2020}, 2017, 3, "t").resolved == 2016);
  CHECK(resolve_year({2016, 2020}, 2019, 3, "t").resolved == 2020);
  CHECK(resolve_year({2016, 2020}, 2018, 3, "t").resolved == 2016);
  CHECK_FALSE(resolve_year({2016, 2020}, 2018, 3, "t").exact());
  CHECK(resolve_year({2020}, 2023, 3, "t").resolved == 2020);
}

TEST_CASE("years beyond the window are a hard error listing what exists") {
  try {
    resolve_year({2016, 2017}, 2021, 3, "grid X");
    FAIL("expected ResolutionError");
  } catch (const ResolutionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("grid X") != std::string::npos);
    REQUIRE(e.candidates().size() == 2);
    CHECK(e.candidates()[0] == "2016");
  }
  CHECK_THROWS_AS(resolve_year({}, 2020, 3, "empty"), ResolutionError);
  CHECK_THROWS_AS(resolve_year({2019}, 2020, 0, "window 0"), ResolutionError);
}
