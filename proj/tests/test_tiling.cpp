#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "action_state.hpp"
#include "common.hpp"
#include "pspnr.hpp"
#include "tiling.hpp"

using namespace pano;

namespace {

std::vector<double> random_grid(Rng& rng, int rows, int cols, double lo = 0.0, double hi = 9.0) {
  std::vector<double> g(static_cast<size_t>(rows) * cols);
  for (auto& v : g) v = rng.uniform(lo, hi);
  return g;
}

}  // namespace

TEST_CASE("group_tiles: uniform field gives a valid zero-cost partition") {
  std::vector<double> scores(static_cast<size_t>(kGridRows) * kGridCols, 2.5);
  Tiling a = group_tiles(scores, 30);
  a.validate();
  CHECK(a.rects.size() == 30);
  CHECK(a.cost == doctest::Approx(0.0));
  // deterministic
  Tiling b = group_tiles(scores, 30);
  CHECK(a.rects == b.rects);
}

TEST_CASE("group_tiles: 2x2 field [[1,1],[9,9]] splits rows") {
  std::vector<double> scores = {1, 1, 9, 9};
  Tiling t = group_tiles(scores, 2, 2, 2);
  CHECK(t.cost == doctest::Approx(0.0));
  REQUIRE(t.rects.size() == 2);
  CHECK(t.rects[0] == GridRect{0, 0, 1, 2});
  CHECK(t.rects[1] == GridRect{1, 0, 1, 2});
  CHECK(t.mean_gamma[0] == doctest::Approx(1.0));
  CHECK(t.mean_gamma[1] == doctest::Approx(9.0));
}

TEST_CASE("group_tiles: argument validation") {
  std::vector<double> scores(4, 1.0);
  CHECK_THROWS_AS(group_tiles(scores, 2, 2, 0), InvalidArgError);
  CHECK_THROWS_AS(group_tiles(scores, 2, 2, 5), InvalidArgError);
  CHECK_THROWS_AS(group_tiles(scores, 2, 2, 2, 0), InvalidArgError);
}

TEST_CASE("brute force oracle: base cases and guard") {
  std::vector<double> flat(6, 3.0);
  CHECK(brute_force_guillotine(flat, 2, 3, 1).cost ==
        doctest::Approx(partition_cost(flat, 2, 3, {{0, 0, 2, 3}})));
  for (int n = 1; n <= 4; ++n) CHECK(brute_force_guillotine(flat, 2, 3, n).cost ==
                                     doctest::Approx(0.0));

  std::vector<double> steps = {1, 1, 9, 9};
  BruteForceResult r = brute_force_guillotine(steps, 2, 2, 2);
  CHECK(r.cost == doctest::Approx(0.0));

  CHECK_THROWS_AS(brute_force_guillotine(std::vector<double>(16, 0.0), 4, 4, 2),
                  InvalidArgError);
  CHECK_THROWS_AS(brute_force_guillotine(std::vector<double>(12, 0.0), 3, 4, 5),
                  InvalidArgError);
}

TEST_CASE("greedy grouping vs exhaustive oracle on small grids") {
  Rng rng(31337);
  for (int trial = 0; trial < 60; ++trial) {
    int rows = 2, cols = 3;
    std::vector<double> scores = random_grid(rng, rows, cols);
    int n = rng.uniform_int(1, 4);
    Tiling greedy = group_tiles(scores, rows, cols, n);
    greedy.validate();
    BruteForceResult best = brute_force_guillotine(scores, rows, cols, n);
    CHECK(greedy.cost >= best.cost - 1e-9);
    CHECK(partition_cost(scores, rows, cols, greedy.rects) == doctest::Approx(greedy.cost));
  }
}

TEST_CASE("greedy matches the optimum on row- and column-constant fields") {
  Rng rng(555);
  for (int trial = 0; trial < 40; ++trial) {
    int rows = 3, cols = 4;
    std::vector<double> scores(static_cast<size_t>(rows) * cols);
    bool by_rows = trial % 2 == 0;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        scores[static_cast<size_t>(r) * cols + c] =
            by_rows ? rng.uniform(0, 9) * 0 + (r * 3.7 + trial % 5)
                    : (c * 2.3 + trial % 7);
      }
    }
    for (int n = 1; n <= 4; ++n) {
      Tiling greedy = group_tiles(scores, rows, cols, n);
      BruteForceResult best = brute_force_guillotine(scores, rows, cols, n);
      CHECK(greedy.cost == doctest::Approx(best.cost).epsilon(1e-9));
    }
  }
}

TEST_CASE("property: each greedy split never increases J") {
  Rng rng(808);
  std::vector<double> scores = random_grid(rng, kGridRows, kGridCols);
  double prev = group_tiles(scores, 1).cost;
  for (int n = 2; n <= 40; n += 3) {
    double cur = group_tiles(scores, n).cost;
    CHECK(cur <= prev + 1e-9);
    prev = cur;
  }
}

TEST_CASE("property: random fields always produce valid partitions") {
  Rng rng(4242);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> scores = random_grid(rng, kGridRows, kGridCols);
    int n = rng.uniform_int(1, 60);
    Tiling t = group_tiles(scores, n);
    t.validate();
    CHECK(static_cast<int>(t.rects.size()) == n);
  }
}

TEST_CASE("efficiency scores: flat quality curve and arithmetic") {
  SceneSpec spec = scene_spec_for("tracked-object");
  spec.duration_s = 2.0;
  VideoDescriptor video = generate_synthetic_video(spec, 9);
  JndModel jnd = default_jnd_model();

  // a tile with zero error at every level has a flat quality curve
  for (int q = 0; q < video.levels(); ++q) video.abs_error[video.ladder_index(0, 0, 0, q)] =
      q * 1e-12;  // strictly increasing but negligible
  ViewpointTrace still;
  still.sample_period_s = 0.05;
  for (int i = 0; i <= 60; ++i) still.samples.push_back({i * 0.05, 180.0, 0.0});
  EfficiencyMap map = efficiency_scores(video, {still}, jnd);
  CHECK(map.chunks == 2);
  CHECK(map.at(0, 0, 0) == doctest::Approx(0.0).epsilon(1e-6));

  // hand-composed oracle for one cell: PSPNR at both ends of the ladder
  int r = 6, c = 12;
  const CellFeatures& f = video.cell(0, r, c);
  double cj = jnd.content_jnd(f.luminance, f.texture);
  double ratio = jnd.action_ratio(realized_action_state(video, still, 0, r, c, 0.0, 1.0));
  double p_hi = pspnr_from_pmse(tile_pmse(video.error(0, r, c, 0), cj, ratio));
  double p_lo = pspnr_from_pmse(tile_pmse(video.error(0, r, c, 4), cj, ratio));
  double expected = std::max((p_hi - p_lo) / 20.0, 0.0);
  CHECK(map.at(0, r, c) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("efficiency scores: uncovered chunk is an error naming the chunk") {
  SceneSpec spec = scene_spec_for("tracked-object");
  spec.duration_s = 3.0;
  VideoDescriptor video = generate_synthetic_video(spec, 9);
  ViewpointTrace shorty;
  shorty.sample_period_s = 0.05;
  for (int i = 0; i <= 30; ++i) shorty.samples.push_back({i * 0.05, 0.0, 0.0});  // 1.5 s
  CHECK_THROWS_WITH_AS(efficiency_scores(video, {shorty}, default_jnd_model()),
                       doctest::Contains("chunk 2"), InvalidArgError);
}

TEST_CASE("tiling csv round trip") {
  std::vector<double> scores = random_grid(*new Rng(1), kGridRows, kGridCols);
  Tiling t = group_tiles(scores, 12);
  std::string path = "/tmp/pano_tiling_test.csv";
  save_tiling_csv(t, path);
  Tiling loaded = load_tiling_csv(path);
  CHECK(loaded.rects == t.rects);
  for (size_t i = 0; i < t.mean_gamma.size(); ++i)
    CHECK(loaded.mean_gamma[i] == doctest::Approx(t.mean_gamma[i]).epsilon(1e-12));
}
