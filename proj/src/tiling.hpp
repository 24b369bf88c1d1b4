#pragma once

#include <string>
#include <vector>

#include "jnd.hpp"
#include "trace_model.hpp"

namespace pano {

// Per-unit-tile efficiency scores: PSPNR gain per QP step, one grid per chunk.
struct EfficiencyMap {
  int chunks = 0;
  std::vector<double> gamma;  // [chunk][row][col], >= 0

  double at(int chunk, int row, int col) const {
    return gamma[(static_cast<size_t>(chunk) * kGridRows + row) * kGridCols + col];
  }
  // Mean over chunks, for the static (session-level) tiling mode.
  std::vector<double> chunk_mean() const;
};

// Guillotine partition of the unit grid into N rectangles.
struct Tiling {
  std::vector<GridRect> rects;
  std::vector<double> mean_gamma;  // per rectangle
  double cost = 0.0;               // J = sum over rects of area * variance

  void validate() const;
};

// Efficiency scores from history viewpoint traces (Eq. gamma = dPSPNR/dQP):
// per trace the per-cell PSPNR at the best and worst QP under the realized
// movement state, averaged across traces, then differenced and clamped at 0.
EfficiencyMap efficiency_scores(const VideoDescriptor& video,
                                const std::vector<ViewpointTrace>& traces, const JndModel& jnd,
                                double ceiling_db = 100.0);

// Greedy top-down grouping: repeatedly apply the split (rectangle, axis,
// cut) with the largest reduction of J. Optional beam width keeps the best
// `beam` candidate partitions per step.
Tiling group_tiles(const std::vector<double>& scores, int rows, int cols, int n, int beam = 1);

// Convenience overload on the fixed unit grid.
Tiling group_tiles(const std::vector<double>& scores, int n, int beam = 1);

// Exhaustive guillotine optimum for small instances (grid <= 3x4, n <= 4).
// Test oracle for group_tiles.
struct BruteForceResult {
  double cost;
  std::vector<GridRect> rects;
};
BruteForceResult brute_force_guillotine(const std::vector<double>& scores, int rows, int cols,
                                        int n);

// J of an arbitrary partition (area-weighted population variance).
double partition_cost(const std::vector<double>& scores, int rows, int cols,
                      const std::vector<GridRect>& rects);

// tiling.csv: chunk,tile_id,row0,col0,rows,cols,mean_gamma. Static tilings
// are written with chunk = -1.
void save_tiling_csv(const Tiling& t, const std::string& path);
Tiling load_tiling_csv(const std::string& path);

}  // namespace pano
