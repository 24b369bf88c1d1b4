#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "common.hpp"
#include "trace_model.hpp"

using namespace pano;

namespace {

std::string temp_dir() {
  std::string dir = "/tmp/pano_trace_model_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

VideoDescriptor tiny_video(int chunks = 1) {
  VideoDescriptor v;
  v.num_chunks = chunks;
  size_t n_cells = static_cast<size_t>(chunks) * v.cells();
  v.features.assign(n_cells, CellFeatures{0, 0, 120, 1.0, 10});
  v.rate_bps.resize(n_cells * v.levels());
  v.abs_error.resize(n_cells * v.levels());
  for (size_t i = 0; i < n_cells; ++i)
    for (int q = 0; q < v.levels(); ++q) {
      v.rate_bps[i * v.levels() + q] = default_rate_law(20000, v.quality_qp[q]);
      v.abs_error[i * v.levels() + q] = default_error_law(2.0, v.quality_qp[q]);
    }
  return v;
}

}  // namespace

TEST_CASE("video descriptor: save/load round trip") {
  std::string path = temp_dir() + "/video.csv";
  VideoDescriptor v = tiny_video();
  save_video_descriptor(v, path);
  VideoDescriptor loaded = load_video_descriptor(path);
  CHECK(loaded.num_chunks == 1);
  CHECK(loaded == v);

  // save(load(f)) loads back identically
  std::string path2 = temp_dir() + "/video2.csv";
  save_video_descriptor(loaded, path2);
  CHECK(load_video_descriptor(path2) == loaded);
}

TEST_CASE("video descriptor: ladder monotonicity enforced on load") {
  std::string path = temp_dir() + "/bad_video.csv";
  VideoDescriptor v = tiny_video();
  // R(27) > R(22) for one tile
  v.rate_bps[v.ladder_index(0, 3, 5, 1)] = v.rate(0, 3, 5, 0) * 2.0;
  CHECK_THROWS_WITH_AS(save_video_descriptor(v, path),
                       doctest::Contains("chunk 0 tile (3,5)"), InvariantError);

  save_video_descriptor(tiny_video(), path);
  std::string text = read_text_file(path);
  // flip a luminance out of range in the raw text: row for tile (0,0)
  size_t pos = text.find("\n0,0,0,");
  REQUIRE(pos != std::string::npos);
  size_t lum = text.find(",120,", pos);
  REQUIRE(lum != std::string::npos);
  text.replace(lum, 5, ",999,");
  write_text_file(path, text);
  CHECK_THROWS_AS(load_video_descriptor(path), InvariantError);
}

TEST_CASE("video descriptor: missing tile is reported") {
  std::string path = temp_dir() + "/short_video.csv";
  save_video_descriptor(tiny_video(), path);
  std::string text = read_text_file(path);
  text.erase(text.rfind("\n0,11,23"), text.size());  // drop the last row
  write_text_file(path, text + "\n");
  CHECK_THROWS_WITH_AS(load_video_descriptor(path), doctest::Contains("missing tile"),
                       InvariantError);
}

TEST_CASE("generator: default ladder law") {
  CHECK(default_error_law(2.0, 22) == doctest::Approx(2.0));
  CHECK(default_error_law(2.0, 28) == doctest::Approx(4.0));
  CHECK(default_rate_law(1000.0, 28) == doctest::Approx(500.0));
}

TEST_CASE("generator: deterministic per (spec, seed)") {
  SceneSpec spec = scene_spec_for("tracked-object");
  spec.duration_s = 3.0;
  VideoDescriptor a = generate_synthetic_video(spec, 11);
  VideoDescriptor b = generate_synthetic_video(spec, 11);
  VideoDescriptor c = generate_synthetic_video(spec, 12);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a.num_chunks == 3);

  CHECK(generate_viewpoint_trace(spec, 5) == generate_viewpoint_trace(spec, 5));
  CHECK(generate_network_trace(spec, 5) == generate_network_trace(spec, 5));
  CHECK_THROWS_AS(scene_spec_for("no-such-scene"), InvalidArgError);
}

TEST_CASE("generator: archetypes satisfy descriptor invariants") {
  for (const char* name : {"tracked-object", "night-scene", "mixed-dof"}) {
    SceneSpec spec = scene_spec_for(name);
    spec.duration_s = 2.0;
    VideoDescriptor v = generate_synthetic_video(spec, 3);
    v.validate();
    CHECK(v.num_chunks == 2);
  }
}

TEST_CASE("viewpoint_at: interpolation and shorter-arc wrap") {
  ViewpointTrace t;
  t.sample_period_s = 1.0;
  t.samples = {{0.0, 10.0, 0.0}, {1.0, 20.0, 10.0}};
  CHECK(viewpoint_at(t, 0.0).yaw_deg == doctest::Approx(10.0));
  CHECK(viewpoint_at(t, 0.5).yaw_deg == doctest::Approx(15.0));
  CHECK(viewpoint_at(t, 0.5).pitch_deg == doctest::Approx(5.0));
  CHECK(viewpoint_at(t, 1.0).yaw_deg == doctest::Approx(20.0));
  CHECK_THROWS_AS(viewpoint_at(t, 1.5), InvalidArgError);
  CHECK(viewpoint_at_clamped(t, 5.0).yaw_deg == doctest::Approx(20.0));

  ViewpointTrace wrap;
  wrap.sample_period_s = 1.0;
  wrap.samples = {{0.0, 350.0, 0.0}, {1.0, 10.0, 0.0}};
  CHECK(viewpoint_at(wrap, 0.5).yaw_deg == doctest::Approx(0.0));
}

TEST_CASE("viewpoint_at is continuous under the shorter-arc metric") {
  SceneSpec spec = scene_spec_for("tracked-object");
  spec.duration_s = 5.0;
  ViewpointTrace t = generate_viewpoint_trace(spec, 21);
  for (double base : {0.3, 1.7, 2.499, 4.0}) {
    ViewpointSample a = viewpoint_at(t, base);
    ViewpointSample b = viewpoint_at(t, base + 1e-7);
    CHECK(angular_distance(a.yaw_deg, a.pitch_deg, b.yaw_deg, b.pitch_deg) < 1e-4);
  }
}

TEST_CASE("viewpoint trace: load validates spacing and ranges") {
  std::string path = temp_dir() + "/vp.csv";
  write_text_file(path, "time_s,yaw_deg,pitch_deg\n0,10,0\n0.05,11,1\n0.1,12,2\n");
  ViewpointTrace t = load_viewpoint_trace(path);
  CHECK(t.sample_period_s == doctest::Approx(0.05));
  CHECK(t.samples.size() == 3);

  write_text_file(path, "time_s,yaw_deg,pitch_deg\n0,10,0\n0.05,11,1\n0.2,12,2\n");
  CHECK_THROWS_AS(load_viewpoint_trace(path), InvariantError);
  write_text_file(path, "time_s,yaw_deg,pitch_deg\n0,10,0\n0.05,11,99\n");
  CHECK_THROWS_AS(load_viewpoint_trace(path), InvariantError);
}

TEST_CASE("network trace: piecewise-constant lookup") {
  NetworkTrace t;
  t.samples = {{0.0, 100.0}, {2.0, 200.0}};
  CHECK(t.throughput_at(-1.0) == 100.0);
  CHECK(t.throughput_at(0.0) == 100.0);
  CHECK(t.throughput_at(1.99) == 100.0);
  CHECK(t.throughput_at(2.0) == 200.0);
  CHECK(t.throughput_at(50.0) == 200.0);

  NetworkTrace bad;
  bad.samples = {{0.0, 100.0}, {0.0, 50.0}};
  CHECK_THROWS_AS(bad.validate(), InvariantError);
}

TEST_CASE("tiles_in_viewport: full sphere, containment and the yaw seam") {
  // whole-sphere viewport sees every tile of any partition
  std::vector<GridRect> grid;
  for (int r = 0; r < kGridRows; ++r)
    for (int c = 0; c < kGridCols; ++c) grid.push_back({r, c, 1, 1});
  Viewport whole{0, 0, 360, 180};
  CHECK(tiles_in_viewport(whole, grid).size() == grid.size());

  // viewport strictly inside one coarse tile
  std::vector<GridRect> quads = {{0, 0, 6, 12}, {0, 12, 6, 12}, {6, 0, 6, 12}, {6, 12, 6, 12}};
  Viewport inside{90.0, 45.0, 30.0, 30.0};  // centered in the top-left quad
  auto hit = tiles_in_viewport(inside, quads);
  REQUIRE(hit.size() == 1);
  CHECK(hit[0] == 0);

  // 2x4 grid over the sphere; viewport straddling the yaw seam at 0/360
  std::vector<GridRect> coarse = {{0, 0, 6, 6},  {0, 6, 6, 6},  {0, 12, 6, 6}, {0, 18, 6, 6},
                                  {6, 0, 6, 6},  {6, 6, 6, 6},  {6, 12, 6, 6}, {6, 18, 6, 6}};
  Viewport seam{0.0, 0.0, 40.0, 40.0};  // yaw in [340, 20]
  auto got = tiles_in_viewport(seam, coarse);
  // by hand: yaw interval intersects columns [18,24) and [0,6); pitch
  // interval [-20,20] intersects both row bands
  std::vector<int> expected = {0, 3, 4, 7};
  CHECK(got == expected);

  // invariant under adding 360 to the viewport yaw
  Viewport seam2 = seam;
  seam2.yaw_deg += 360.0;
  CHECK(tiles_in_viewport(seam2, coarse) == got);
}

TEST_CASE("cell lookup by orientation") {
  CHECK(cell_row_of_pitch(90.0) == 0);
  CHECK(cell_row_of_pitch(-90.0) == kGridRows - 1);
  CHECK(cell_row_of_pitch(0.0001) == 5);
  CHECK(cell_col_of_yaw(0.0) == 0);
  CHECK(cell_col_of_yaw(359.9) == kGridCols - 1);
  CHECK(cell_col_of_yaw(375.0) == 1);
}
