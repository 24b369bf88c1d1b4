#include <doctest.h>

#include "common.hpp"
#include "jnd.hpp"

using namespace pano;

TEST_CASE("content jnd: luminance masking plus texture term") {
  JndModel m = default_jnd_model();
  CHECK(m.content_jnd(127.0, 0.0) == doctest::Approx(3.0));
  CHECK(m.content_jnd(0.0, 0.0) == doctest::Approx(20.0));
  CHECK(m.content_jnd(127.0, 10.0) == doctest::Approx(4.0));
  // linear segment above mid-gray
  CHECK(m.content_jnd(255.0, 0.0) == doctest::Approx(3.0 + 128.0 * 3.0 / 128.0));
  CHECK_THROWS_AS(m.content_jnd(-1.0, 0.0), InvalidArgError);
  CHECK_THROWS_AS(m.content_jnd(0.0, 300.0), InvalidArgError);
}

TEST_CASE("multiplier curves: calibration points and interpolation") {
  JndModel m = default_jnd_model();
  CHECK(m.speed.eval(0.0) == 1.0);
  CHECK(m.speed.eval(10.0) == doctest::Approx(1.5));
  CHECK(m.luminance.eval(200.0) == doctest::Approx(1.5));
  CHECK(m.dof.eval(0.7) == doctest::Approx(1.5));
  CHECK(m.luminance.eval(100.0) == doctest::Approx(1.25));
  // extrapolation continues the last segment, clamped at the cap
  CHECK(m.speed.eval(20.0) == doctest::Approx(2.0));
  CHECK(m.speed.eval(100.0) == doctest::Approx(3.0));
}

TEST_CASE("action ratio is the product of the three multipliers") {
  JndModel m = default_jnd_model();
  CHECK(m.action_ratio({0, 0, 0}) == doctest::Approx(1.0));
  CHECK(m.action_ratio({10, 200, 0.7}) == doctest::Approx(3.375));
  // capped per curve, not on the product
  CHECK(m.action_ratio({1000, 1000, 1000}) == doctest::Approx(27.0));
}

TEST_CASE("jnd360 composes content and action terms") {
  JndModel m = default_jnd_model();
  CHECK(m.jnd360(5.0, {0, 0, 0}) == doctest::Approx(5.0));
  CHECK(m.jnd360(3.0, {10, 0, 0}) == doctest::Approx(4.5));
  CHECK_THROWS_AS(m.jnd360(0.0, {0, 0, 0}), InvalidArgError);
}

namespace {

MultiplierCurve random_curve(Rng& rng) {
  MultiplierCurve c;
  c.cap = rng.uniform(1.5, 4.0);
  double x = 0.0, mult = 1.0;
  int knots = rng.uniform_int(1, 4);
  for (int i = 0; i < knots; ++i) {
    x += rng.uniform(0.5, 10.0);
    mult += rng.uniform(0.0, 0.8);
    c.knots.emplace_back(x, mult);
  }
  return c;
}

}  // namespace

TEST_CASE("property: jnd360 monotone in each factor, separable, scale-equivariant") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    JndModel m = default_jnd_model();
    m.speed = random_curve(rng);
    m.luminance = random_curve(rng);
    m.dof = random_curve(rng);
    m.validate();

    double c = rng.uniform(0.5, 20.0);
    ActionState a{rng.uniform(0, 25), rng.uniform(0, 250), rng.uniform(0, 3)};

    // monotone in each factor
    ActionState faster = a;
    faster.rel_speed += rng.uniform(0, 10);
    CHECK(m.jnd360(c, faster) >= m.jnd360(c, a));
    ActionState brighter = a;
    brighter.luminance_change += rng.uniform(0, 100);
    CHECK(m.jnd360(c, brighter) >= m.jnd360(c, a));
    ActionState deeper = a;
    deeper.dof_diff += rng.uniform(0, 2);
    CHECK(m.jnd360(c, deeper) >= m.jnd360(c, a));

    // separability: ratio to the static case is the action ratio
    double ratio = m.jnd360(c, a) / m.jnd360(c, {0, 0, 0});
    CHECK(ratio == doctest::Approx(m.action_ratio(a)).epsilon(1e-12));

    // doubling content JND doubles the output
    CHECK(m.jnd360(2 * c, a) == doctest::Approx(2 * m.jnd360(c, a)).epsilon(1e-12));
    CHECK(m.jnd360(c, a) > 0.0);
  }
}

TEST_CASE("config: text round-trip preserves the model") {
  JndModel m = default_jnd_model();
  m.speed.knots = {{0.0, 1.0}, {5.0, 1.2}, {10.0, 1.5}};
  m.content.texture_weight = 0.25;
  std::string text = jnd_config_to_text(m);
  JndModel parsed = parse_jnd_config(text, "<test>");
  CHECK(parsed == m);
}

TEST_CASE("config: bad inputs are rejected with context") {
  CHECK_THROWS_AS(parse_jnd_config("[speed]\nknots = [[1, 1.0]]\n", "<t>"), InvariantError);
  CHECK_THROWS_AS(parse_jnd_config("[speed]\nknots = [[0, 1.0], [5, 0.9]]\n", "<t>"),
                  InvariantError);
  CHECK_THROWS_AS(parse_jnd_config("[bogus]\nx = 1\n", "<t>"), ParseError);
  CHECK_THROWS_AS(parse_jnd_config("[speed]\ncap\n", "<t>"), ParseError);
}
