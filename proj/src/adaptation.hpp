#pragma once

#include <vector>

#include "jnd.hpp"
#include "manifest.hpp"
#include "trace_model.hpp"

namespace pano {

// Linear-regression viewpoint predictor over a recent history window.
struct ViewpointPredictor {
  double window_s = 1.0;

  // Least-squares lines through the window's samples (unwrapped yaw,
  // pitch), extrapolated horizon_s past the last sample. Falls back to the
  // last sample with fewer than 2 samples in the window.
  ViewpointSample predict(const ViewpointTrace& history, double now_s, double horizon_s) const;
};

// Conservative per-tile movement estimate (lower-bound speed).
struct ActionEstimate {
  double rel_speed = 0.0;
  double luminance_change = 0.0;
  double dof_diff = 0.0;

  ActionState as_state() const { return {rel_speed, luminance_change, dof_diff}; }
};

inline constexpr double kSpeedWindowS = 2.0;

// Lower-bound relative speed = min over the trailing 2 s of
// |head velocity - object velocity|; luminance/DoF are predicted against
// the focus tile (the tile containing the predicted viewpoint).
ActionEstimate estimate_action(const ViewpointTrace& history, double now_s, const Manifest& m,
                               int chunk, int tile, int focus_tile, int past_focus_tile);

struct BufferState {
  double level_s = 0.0;
  double target_s = 2.0;
  double max_s = 10.0;
  int playhead_chunk = 0;
};

// MPC chunk bitrate: harmonic-mean throughput over the last 5 download
// samples, 3-chunk horizon; picks the highest ladder rate whose simulated
// buffer never stalls and stays at or above the target after each step.
double mpc_chunk_bitrate(const BufferState& buffer, const std::vector<double>& throughput_history,
                         const std::vector<double>& chunk_rate_ladder, double chunk_duration_s,
                         int horizon_chunks = 3);

// One selectable tile in the allocation problem.
struct TileChoice {
  double area = 1.0;                 // S_t
  std::vector<double> rate_bps;      // R_t(q), one per level
  std::vector<double> weighted_pmse; // S_t * M_t(q), one per level
};

struct AllocationResult {
  std::vector<int> level;  // per tile
  double objective = 0.0;  // sum of S_t * M_t
  double total_rate = 0.0;
  bool over_budget = false;
};

// Exact minimizer of sum S_t*M_t(q_t) subject to sum R_t(q_t) <= budget,
// searched with lossless dominance pruning; among objective ties returns
// the lexicographically smallest level vector. Infeasible instances fall
// back to all-lowest with the over_budget flag set.
AllocationResult allocate_exact(double budget_bps, const std::vector<TileChoice>& tiles);

// Viewport-prior wrapper: tiles outside the predicted viewport are pinned
// to the lowest level before the exact search over the rest.
AllocationResult allocate_tiles(double budget_bps, const std::vector<TileChoice>& tiles,
                                const std::vector<bool>& in_viewport);

struct FrontierPoint {
  double pmse = 0.0;
  double size = 0.0;
};

// Indices of points surviving weak (pmse, size) dominance with at least one
// strict inequality; exact ties keep the smallest index.
std::vector<size_t> prune_dominated(const std::vector<FrontierPoint>& points);

}  // namespace pano
