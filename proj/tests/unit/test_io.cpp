#include "rankone/errors.hpp"
#include "rankone/io.hpp"
#include "rankone/random.hpp"
#include "rankone/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace rankone;

TEST_SUITE("io") {

TEST_CASE("doubles round trip through 17 digits") {
  Rng rng(17);
  for (int k = 0; k < 5000; ++k) {
    const double x = rng.normal() * std::pow(10.0, rng.uniform_int(-30, 30));
    REQUIRE(parse_double(format_double(x)) == x);
  }
  CHECK(parse_double(format_double(0.1)) == 0.1);
  CHECK(parse_double(format_double(-0.0)) == 0.0);
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1e-300).find(',') == std::string::npos);
}

TEST_CASE("malformed numbers") {
  CHECK_THROWS_AS(parse_double(""), FormatError);
  CHECK_THROWS_AS(parse_double("1.0x"), FormatError);
  CHECK_THROWS_AS(parse_double("1,5"), FormatError);
  CHECK_THROWS_AS(parse_double("abc"), FormatError);
}

TEST_CASE("jacobi window round trip") {
  JacobiWindow w = anderson_jacobi(9, -4, 5, 1.3);
  w.a[3] = 0.1 + 1e-17;
  w.a[5] = 2.0 / 3.0;
  std::stringstream s;
  write_window(s, w);
  const Window back = read_window(s);
  REQUIRE(std::holds_alternative<JacobiWindow>(back));
  const auto& j = std::get<JacobiWindow>(back);
  CHECK(j.n_min == -4);
  CHECK(j.n_max == 5);
  CHECK(j.b == w.b);
  CHECK(j.a == w.a);
}

TEST_CASE("cmv window round trip") {
  CMVWindow w = random_verblunsky(3, -6, 4, 0.95);
  w.boundary_left = std::polar(1.0, 0.3);
  std::stringstream s;
  write_window(s, w);
  const Window back = read_window(s);
  REQUIRE(std::holds_alternative<CMVWindow>(back));
  const auto& c = std::get<CMVWindow>(back);
  CHECK(c.j_min == -6);
  CHECK(c.j_max == 4);
  CHECK(c.alpha == w.alpha);
  CHECK(c.boundary_left == w.boundary_left);
  CHECK(c.boundary_right == w.boundary_right);
}

TEST_CASE("comments and blank lines are skipped") {
  std::istringstream in("# a window\n\njacobi 0 1\n0 1.5\n1 -2\n# bonds\n0 0.25\n");
  const auto w = std::get<JacobiWindow>(read_window(in));
  CHECK(w.b == std::vector<double>{1.5, -2.0});
  CHECK(w.a == std::vector<double>{0.25});
}

TEST_CASE("malformed windows") {
  const char* bad[] = {
      "",
      "# only a comment\n",
      "hermite 0 1\n",
      "jacobi 1 0\n",
      "jacobi 0 1\n0 1\n",
      "jacobi 0 1\n0 1\n2 1\n0 1\n",
      "jacobi 0 1\n0 1\n1 1\n0 x\n",
      "jacobi 0 1\n0 1\n1 1\n0 1\n0 1\n",
      "jacobi 0 1\n0 1 3\n1 1\n0 1\n",
      "cmv 0 2 1 0 1 0\n0 0 0\n",
      "cmv 0 2 1 0 1\n0 0 0\n1 0 0\n",
  };
  for (const char* text : bad) {
    std::istringstream in(text);
    CAPTURE(text);
    CHECK_THROWS_AS(read_window(in), FormatError);
  }
  CHECK_THROWS_AS(read_window_file("/nonexistent/window.txt"), FormatError);
}

TEST_CASE("measure csv round trip") {
  AtomicSpectralMeasure mu{SupportKind::unit_circle, {{std::polar(1.0, 0.2), 0.25}, {std::polar(1.0, 2.0), 0.75}}};
  std::stringstream s;
  write_measure_csv(s, mu);
  CHECK(s.str().rfind("# kind: unit-circle\n", 0) == 0);
  const AtomicSpectralMeasure back = read_measure_csv(s);
  CHECK(back.kind == SupportKind::unit_circle);
  REQUIRE(back.atoms.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(back.atoms[k].location == mu.atoms[k].location);
    CHECK(back.atoms[k].weight == mu.atoms[k].weight);
  }
  std::istringstream no_header("0,0,1\n");
  CHECK_THROWS_AS(read_measure_csv(no_header), FormatError);
}

}
