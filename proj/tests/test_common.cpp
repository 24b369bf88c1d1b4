#include <doctest.h>

#include "common.hpp"

using namespace pano;

TEST_CASE("wrap_yaw maps into [0, 360)") {
  CHECK(wrap_yaw(0.0) == 0.0);
  CHECK(wrap_yaw(360.0) == 0.0);
  CHECK(wrap_yaw(-10.0) == doctest::Approx(350.0));
  CHECK(wrap_yaw(725.0) == doctest::Approx(5.0));
}

TEST_CASE("yaw_shorter_delta takes the shorter arc") {
  CHECK(yaw_shorter_delta(10.0, 20.0) == doctest::Approx(10.0));
  CHECK(yaw_shorter_delta(350.0, 10.0) == doctest::Approx(20.0));
  CHECK(yaw_shorter_delta(10.0, 350.0) == doctest::Approx(-20.0));
  // tie at 180 resolves toward increasing yaw
  CHECK(yaw_shorter_delta(0.0, 180.0) == doctest::Approx(180.0));
}

TEST_CASE("rng is deterministic per seed") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 10; ++i) {
    double va = a.uniform();
    CHECK(va == b.uniform());
    CHECK(va >= 0.0);
    CHECK(va < 1.0);
  }
  CHECK(Rng(7).next_u64() != c.next_u64());
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.0, 1.0, 0.1, 1e-17, 123456.789, -2.5e300}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("read_csv reports malformed rows with line numbers") {
  std::string path = "/tmp/pano_test_common.csv";
  write_text_file(path, "a,b\n1,2\n3\n");
  CHECK_THROWS_AS(read_csv(path), ParseError);
  write_text_file(path, "a,b\n1,2\n");
  CsvTable t = read_csv(path);
  CHECK(t.rows.size() == 1);
  CHECK(t.column("b") == 1);
  CHECK(t.column("missing") == -1);
}
