#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jnd.hpp"
#include "pspnr.hpp"
#include "tiling.hpp"
#include "trace_model.hpp"

namespace pano {

// Uncompressed PSPNR lookup table: n representative values per movement
// factor, n^3 PSPNR entries per (chunk, tile, quality level).
struct RawLookupTable {
  int n = 5;
  double v_max = 20.0;   // deg/s
  double l_max = 240.0;  // gray levels
  double d_max = 2.0;    // diopters
  int chunks = 0;
  int tiles = 0;
  int levels = 0;
  double ceiling_db = kDefaultPspnrCeilingDb;

  std::vector<double> rep_v, rep_l, rep_d;  // n each, evenly spaced from 0
  std::vector<double> ratio;                // action ratio per (iv,il,id), n^3
  std::vector<double> pspnr_db;             // [chunk][tile][level][iv][il][id]

  size_t cell_count() const { return static_cast<size_t>(n) * n * n; }
  size_t entry_index(int chunk, int tile, int level, int iv, int il, int id) const {
    return (((static_cast<size_t>(chunk) * tiles + tile) * levels + level) * n + iv) * n * n +
           static_cast<size_t>(il) * n + id;
  }
  double at(int chunk, int tile, int level, int iv, int il, int id) const {
    return pspnr_db[entry_index(chunk, tile, level, iv, il, id)];
  }
};

// One power-fit P(A) = a * A^b per (chunk, tile, quality level); (a, b) are
// held in their quantized form (a in 0.25 dB steps, b in 1/256 steps) so
// serialization is lossless.
struct CompressedLookupTable {
  int chunks = 0;
  int tiles = 0;
  int levels = 0;
  double a_min_fit = 1.0;  // fit domain over the action ratio
  double a_max_fit = 1.0;
  double ceiling_db = kDefaultPspnrCeilingDb;

  std::vector<uint16_t> a_q;      // a = a_q * 0.25 dB
  std::vector<int16_t> b_q;       // b = b_q / 256
  std::vector<uint16_t> rmse_q;   // fit RMSE = rmse_q / 256 dB (saturating)

  static constexpr double kAStep = 0.25;
  static constexpr double kBStep = 1.0 / 256.0;
  static constexpr double kRmseStep = 1.0 / 256.0;

  size_t index(int chunk, int tile, int level) const {
    return (static_cast<size_t>(chunk) * tiles + tile) * levels + level;
  }
  double a(int chunk, int tile, int level) const { return a_q[index(chunk, tile, level)] * kAStep; }
  double b(int chunk, int tile, int level) const { return b_q[index(chunk, tile, level)] * kBStep; }
  double fit_rmse(int chunk, int tile, int level) const {
    return rmse_q[index(chunk, tile, level)] * kRmseStep;
  }

  bool operator==(const CompressedLookupTable&) const = default;
};

// Client-facing artifact: tile geometry, per-chunk tile features, object
// trajectories, nominal bitrates, the compressed lookup table, and the JND
// multiplier curves the table was built with.
struct Manifest {
  double chunk_duration_s = 1.0;
  int num_chunks = 0;
  std::vector<int> quality_qp;
  std::vector<GridRect> tiles;

  // per (chunk, tile): quantized at build time so serialization is lossless
  std::vector<uint8_t> tile_luminance;   // gray level
  std::vector<uint16_t> tile_dof_q;      // diopters * 256
  // object trajectory: one velocity sample per 10 frames (30 fps assumed)
  int traj_samples_per_chunk = 3;
  std::vector<float> traj_vel;           // [chunk][tile][sample][yaw,pitch]

  std::vector<float> tile_rate_bps;      // [tile][level], nominal across chunks

  CompressedLookupTable table;
  JndModel jnd;

  size_t ct_index(int chunk, int tile) const {
    return static_cast<size_t>(chunk) * tiles.size() + static_cast<size_t>(tile);
  }
  double luminance(int chunk, int tile) const { return tile_luminance[ct_index(chunk, tile)]; }
  double dof(int chunk, int tile) const { return tile_dof_q[ct_index(chunk, tile)] / 256.0; }
  double rate(int tile, int level) const {
    return tile_rate_bps[static_cast<size_t>(tile) * quality_qp.size() + level];
  }
  void object_velocity(int chunk, int tile, double* vel_yaw, double* vel_pitch) const;

  bool operator==(const Manifest&) const = default;
};

// Representative values evenly spaced over [0, max] per factor; PSPNR per
// cell through the homogeneous-tile PMSE math, averaged over the unit cells
// of each coarse tile.
RawLookupTable build_raw_table(const VideoDescriptor& video, const Tiling& tiling,
                               const JndModel& jnd, int n);

// Least-squares fit of log P against log A per (chunk, tile, level);
// duplicate A values are averaged before fitting. Degenerate tables (all A
// equal) store (mean P, 0).
CompressedLookupTable compress_table(const RawLookupTable& raw);

// a * A^b with A clamped into the fit domain and the output clamped at the
// table's dB ceiling. Throws on unknown (tile, level).
double eval_compressed(const CompressedLookupTable& t, int chunk, int tile, int level, double A);

// Full manifest build: raw table -> compression + feature/trajectory capture.
Manifest build_manifest(const VideoDescriptor& video, const Tiling& tiling, const JndModel& jnd,
                        int n);

// Binary encoding: magic "PANO1", little-endian section lengths, sections
// [tiles][features][trajectories][rates][table]. Byte-deterministic.
std::vector<uint8_t> serialize_manifest(const Manifest& m);
Manifest parse_manifest(const std::vector<uint8_t>& bytes);

void save_manifest(const Manifest& m, const std::string& path);
Manifest load_manifest(const std::string& path);

// Size in bytes of the serialized lookup-table section (dictionary + refs).
size_t manifest_table_section_bytes(const Manifest& m);

// Debug view.
std::string manifest_to_json(const Manifest& m);

}  // namespace pano
