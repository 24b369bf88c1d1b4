#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "pspnr.hpp"

using namespace pano;

TEST_CASE("pmse on pixel planes") {
  PixelPlane orig = PixelPlane::constant(4, 4, 100.0);
  PixelPlane same = orig;
  PixelPlane jnd = PixelPlane::constant(4, 4, 4.0);
  CHECK(pmse(orig, same, jnd) == 0.0);

  PixelPlane off10 = PixelPlane::constant(4, 4, 110.0);
  CHECK(pmse(orig, off10, jnd) == doctest::Approx(36.0));

  PixelPlane off3 = PixelPlane::constant(4, 4, 103.0);
  CHECK(pmse(orig, off3, jnd) == 0.0);  // sub-JND errors filtered

  PixelPlane small = PixelPlane::constant(2, 2, 0.0);
  CHECK_THROWS_AS(pmse(orig, off10, small), InvalidArgError);
}

TEST_CASE("pmse brute force on a mixed plane") {
  // hand-built 2x2: errors {10, 3, 4, 0}, jnd 4 -> only 10 and 4 count
  PixelPlane a{2, 2, {50, 60, 70, 80}};
  PixelPlane b{2, 2, {60, 63, 74, 80}};
  PixelPlane jnd = PixelPlane::constant(2, 2, 4.0);
  double expected = ((10.0 - 4) * (10.0 - 4) + 0 + 0 + 0) / 4.0;
  CHECK(pmse(a, b, jnd) == doctest::Approx(expected));
}

TEST_CASE("pspnr_from_pmse evaluates Eq. 1 with a zero ceiling") {
  CHECK(pspnr_from_pmse(36.0) == doctest::Approx(32.5678).epsilon(1e-4));
  CHECK(pspnr_from_pmse(1.0) == doctest::Approx(48.1308).epsilon(1e-4));
  CHECK(pspnr_from_pmse(0.0) == 100.0);
  CHECK(pspnr_from_pmse(0.0, 80.0) == 80.0);
  CHECK_THROWS_AS(pspnr_from_pmse(-1.0), InvalidArgError);
}

TEST_CASE("pspnr_from_pmse strictly decreasing below the ceiling") {
  double prev = pspnr_from_pmse(1e-5);
  for (double m = 1e-4; m < 65000.0; m *= 3.0) {
    double cur = pspnr_from_pmse(m);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("tile_pmse: constant-plane specialization") {
  CHECK(tile_pmse(10.0, 4.0, 1.0) == doctest::Approx(36.0));
  CHECK(tile_pmse(10.0, 4.0, 3.0) == 0.0);
  CHECK(tile_pmse(0.0, 4.0, 1.0) == 0.0);
}

TEST_CASE("property: tile_pmse equals pmse on constant planes") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    double e = rng.uniform(0.0, 40.0);
    double c = rng.uniform(0.5, 20.0);
    double a = rng.uniform(1.0, 3.0);
    int w = rng.uniform_int(1, 8), h = rng.uniform_int(1, 8);
    PixelPlane orig = PixelPlane::constant(w, h, 100.0);
    PixelPlane dist = PixelPlane::constant(w, h, 100.0 + e);
    PixelPlane jnd = PixelPlane::constant(w, h, c * a);
    CHECK(tile_pmse(e, c, a) == doctest::Approx(pmse(orig, dist, jnd)).epsilon(1e-12));
  }
}

TEST_CASE("property: raising JND never raises pmse") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    PixelPlane orig{3, 3, {}}, dist{3, 3, {}}, jnd{3, 3, {}};
    for (int i = 0; i < 9; ++i) {
      orig.values.push_back(rng.uniform(0, 255));
      dist.values.push_back(rng.uniform(0, 255));
      jnd.values.push_back(rng.uniform(0, 30));
    }
    double before = pmse(orig, dist, jnd);
    PixelPlane higher = jnd;
    higher.values[rng.uniform_int(0, 8)] += rng.uniform(0, 20);
    CHECK(pmse(orig, dist, higher) <= before);
  }
}

TEST_CASE("chunk_pspnr aggregates area-weighted pmse") {
  CHECK(chunk_pspnr({{1.0, 36.0}}) == doctest::Approx(32.5678).epsilon(1e-4));
  CHECK(chunk_pspnr({{2.0, 0.0}, {2.0, 72.0}}) == doctest::Approx(32.5678).epsilon(1e-4));
  CHECK(chunk_pspnr({{1.0, 0.0}, {5.0, 0.0}}) == 100.0);
  CHECK_THROWS_AS(chunk_pspnr({}), InvalidArgError);

  // invariant under uniform area scaling
  std::vector<TileArea> tiles{{1.0, 10.0}, {3.0, 20.0}, {2.0, 5.0}};
  std::vector<TileArea> scaled{{7.0, 10.0}, {21.0, 20.0}, {14.0, 5.0}};
  CHECK(chunk_pspnr(tiles) == doctest::Approx(chunk_pspnr(scaled)).epsilon(1e-12));
}

TEST_CASE("sampled_sequence_pspnr evaluates one frame in every stride") {
  std::vector<double> frames;
  for (int i = 0; i < 20; ++i) frames.push_back(i % 2 == 0 ? 36.0 : 64.0);
  auto at = [&frames](size_t i) { return frames[i]; };

  // stride 1 is exact
  double full = sampled_sequence_pspnr(frames.size(), 1, at);
  double mean = (36.0 + 64.0) / 2.0;
  CHECK(full == doctest::Approx(pspnr_from_pmse(mean)));

  // constant sequence: subsampling changes nothing
  auto constant = [](size_t) { return 36.0; };
  CHECK(sampled_sequence_pspnr(20, 10, constant) ==
        doctest::Approx(sampled_sequence_pspnr(20, 1, constant)));

  // alternating {36, 64} with stride 2 only samples the 36s
  CHECK(sampled_sequence_pspnr(frames.size(), 2, at) == doctest::Approx(pspnr_from_pmse(36.0)));

  // sampled frames replicate over a short tail
  int calls = 0;
  auto counting = [&calls](size_t) {
    ++calls;
    return 4.0;
  };
  sampled_sequence_pspnr(25, 10, counting);
  CHECK(calls == 3);

  CHECK_THROWS_AS(sampled_sequence_pspnr(5, 0, at), InvalidArgError);
}
