#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"

namespace pano {

inline constexpr int kGridRows = 12;
inline constexpr int kGridCols = 24;
inline constexpr double kCellYawDeg = 360.0 / kGridCols;   // 15
inline constexpr double kCellPitchDeg = 180.0 / kGridRows;  // 15

// Content features of one unit tile in one chunk.
struct CellFeatures {
  double vel_yaw = 0.0;    // deg/s of the dominant object, (0,0) = background
  double vel_pitch = 0.0;
  double luminance = 0.0;  // mean gray level 0..255
  double dof = 0.0;        // diopters >= 0
  double texture = 0.0;    // mean local gradient magnitude 0..255

  bool operator==(const CellFeatures&) const = default;
};

// Synthetic stand-in for an encoded 360 video: per chunk and unit tile,
// content features plus a rate/distortion ladder over the QP levels.
struct VideoDescriptor {
  double chunk_duration_s = 1.0;
  int num_chunks = 0;
  int rows = kGridRows;
  int cols = kGridCols;
  std::vector<int> quality_qp = {22, 27, 32, 37, 42};

  std::vector<CellFeatures> features;  // [chunk][row][col]
  std::vector<double> rate_bps;        // [chunk][row][col][level]
  std::vector<double> abs_error;       // [chunk][row][col][level]

  int cells() const { return rows * cols; }
  int levels() const { return static_cast<int>(quality_qp.size()); }
  double duration_s() const { return num_chunks * chunk_duration_s; }

  size_t cell_index(int chunk, int row, int col) const {
    return (static_cast<size_t>(chunk) * rows + row) * cols + col;
  }
  size_t ladder_index(int chunk, int row, int col, int level) const {
    return cell_index(chunk, row, col) * levels() + level;
  }
  const CellFeatures& cell(int chunk, int row, int col) const {
    return features[cell_index(chunk, row, col)];
  }
  double rate(int chunk, int row, int col, int level) const {
    return rate_bps[ladder_index(chunk, row, col, level)];
  }
  double error(int chunk, int row, int col, int level) const {
    return abs_error[ladder_index(chunk, row, col, level)];
  }

  void validate() const;  // throws InvariantError naming chunk/tile/field
  bool operator==(const VideoDescriptor&) const = default;
};

struct ViewpointSample {
  double time_s;
  double yaw_deg;    // [0, 360)
  double pitch_deg;  // [-90, 90]
  bool operator==(const ViewpointSample&) const = default;
};

struct ViewpointTrace {
  std::vector<ViewpointSample> samples;
  double sample_period_s = 0.05;

  double start_s() const { return samples.empty() ? 0.0 : samples.front().time_s; }
  double end_s() const { return samples.empty() ? 0.0 : samples.back().time_s; }
  void validate() const;
  bool operator==(const ViewpointTrace&) const = default;
};

struct NetworkSample {
  double time_s;
  double throughput_bps;  // > 0, piecewise constant until the next sample
  bool operator==(const NetworkSample&) const = default;
};

struct NetworkTrace {
  std::vector<NetworkSample> samples;

  void validate() const;
  // Throughput in effect at time t (first sample before t; clamped at ends).
  double throughput_at(double t) const;
  bool operator==(const NetworkTrace&) const = default;
};

struct Viewport {
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;
  double width_deg = 110.0;
  double height_deg = 90.0;

  void validate() const;
};

// Rectangle of unit tiles, in grid coordinates.
struct GridRect {
  int row0 = 0;
  int col0 = 0;
  int rows = 0;
  int cols = 0;

  int area() const { return rows * cols; }
  bool contains(int r, int c) const {
    return r >= row0 && r < row0 + rows && c >= col0 && c < col0 + cols;
  }
  bool operator==(const GridRect&) const = default;
};

// ---- file I/O ----
// video.csv: chunk,row,col,vel_yaw,vel_pitch,luminance,dof,texture,
//            R_<qp>...,e_<qp>...; scalar metadata in a <path>.json sidecar.
VideoDescriptor load_video_descriptor(const std::string& path);
void save_video_descriptor(const VideoDescriptor& v, const std::string& path);

// viewpoint.csv: time_s,yaw_deg,pitch_deg (+ optional <path>.json sidecar)
ViewpointTrace load_viewpoint_trace(const std::string& path);
void save_viewpoint_trace(const ViewpointTrace& t, const std::string& path);

// network.csv: time_s,throughput_bps
NetworkTrace load_network_trace(const std::string& path);
void save_network_trace(const NetworkTrace& t, const std::string& path);

// ---- geometry ----

// Interpolated orientation at time t; throws on t outside the trace span.
// Yaw is interpolated along the shorter arc.
ViewpointSample viewpoint_at(const ViewpointTrace& trace, double t);
// As above but clamps t to the trace span (simulation helper).
ViewpointSample viewpoint_at_clamped(const ViewpointTrace& trace, double t);

// Unit cell containing an orientation.
int cell_row_of_pitch(double pitch_deg);
int cell_col_of_yaw(double yaw_deg);

// Indices of tiles whose equirectangular rectangle overlaps the viewport
// rectangle (with yaw wrap). Overlap is strict (positive area).
std::vector<int> tiles_in_viewport(const Viewport& vp, const std::vector<GridRect>& tiles);
bool rect_intersects_viewport(const Viewport& vp, const GridRect& rect);

// ---- synthetic generation ----

struct SceneSpec {
  std::string archetype = "tracked-object";  // tracked-object|night-scene|mixed-dof
  double duration_s = 30.0;
  double chunk_duration_s = 1.0;
  std::vector<int> quality_qp = {22, 27, 32, 37, 42};
  double base_rate_bps = 20000.0;  // per unit tile at the first QP
  double base_error = 2.0;         // at the first QP

  // tracked-object knobs
  double object_speed_yaw = 15.0;   // deg/s
  double object_speed_pitch = 0.0;
  int object_rows = 2;              // object footprint in unit tiles
  int object_cols = 2;

  // viewpoint-trace knobs
  double track_fraction = 0.7;      // fraction of time spent tracking the object
  double viewpoint_period_s = 0.05;

  // network-trace knobs
  double network_mean_bps = 1.0e6;
  double network_step_s = 1.0;

  void validate() const;
};

SceneSpec scene_spec_for(const std::string& archetype);

// Default rate/distortion laws: one QP step of +6 halves the rate and
// doubles the representative error.
double default_error_law(double base_error, int qp);
double default_rate_law(double base_rate_bps, int qp);

// Deterministic for a fixed (spec, seed).
VideoDescriptor generate_synthetic_video(const SceneSpec& spec, uint64_t seed);
ViewpointTrace generate_viewpoint_trace(const SceneSpec& spec, uint64_t seed);
NetworkTrace generate_network_trace(const SceneSpec& spec, uint64_t seed);

}  // namespace pano
