#include "tiling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "action_state.hpp"
#include "pspnr.hpp"

namespace pano {

std::vector<double> EfficiencyMap::chunk_mean() const {
  std::vector<double> out(static_cast<size_t>(kGridRows) * kGridCols, 0.0);
  if (chunks == 0) return out;
  for (int k = 0; k < chunks; ++k)
    for (size_t i = 0; i < out.size(); ++i)
      out[i] += gamma[static_cast<size_t>(k) * out.size() + i];
  for (double& g : out) g /= chunks;
  return out;
}

void Tiling::validate() const {
  if (rects.empty()) throw InvariantError("tiling has no rectangles");
  std::vector<int> owner(static_cast<size_t>(kGridRows) * kGridCols, -1);
  for (size_t i = 0; i < rects.size(); ++i) {
    const GridRect& r = rects[i];
    if (r.rows < 1 || r.cols < 1) throw InvariantError(strf("tile %zu is empty", i));
    if (r.row0 < 0 || r.col0 < 0 || r.row0 + r.rows > kGridRows || r.col0 + r.cols > kGridCols)
      throw InvariantError(strf("tile %zu out of grid bounds", i));
    for (int rr = r.row0; rr < r.row0 + r.rows; ++rr) {
      for (int cc = r.col0; cc < r.col0 + r.cols; ++cc) {
        int& o = owner[static_cast<size_t>(rr) * kGridCols + cc];
        if (o >= 0)
          throw InvariantError(strf("tiles %d and %zu overlap at cell (%d,%d)", o, i, rr, cc));
        o = static_cast<int>(i);
      }
    }
  }
  for (int rr = 0; rr < kGridRows; ++rr)
    for (int cc = 0; cc < kGridCols; ++cc)
      if (owner[static_cast<size_t>(rr) * kGridCols + cc] < 0)
        throw InvariantError(strf("cell (%d,%d) is not covered", rr, cc));
}

// ---- efficiency scores ----

EfficiencyMap efficiency_scores(const VideoDescriptor& video,
                               const std::vector<ViewpointTrace>& traces, const JndModel& jnd,
                               double ceiling_db) {
  if (traces.empty()) throw InvalidArgError("efficiency_scores: no viewpoint traces");
  EfficiencyMap map;
  map.chunks = video.num_chunks;
  map.gamma.assign(static_cast<size_t>(video.num_chunks) * video.cells(), 0.0);
  int q_best = 0;
  int q_worst = video.levels() - 1;
  double qp_span = video.quality_qp[q_worst] - video.quality_qp[q_best];

  for (int k = 0; k < video.num_chunks; ++k) {
    double t0 = k * video.chunk_duration_s;
    double t1 = t0 + video.chunk_duration_s;
    std::vector<const ViewpointTrace*> covering;
    for (const auto& tr : traces)
      if (tr.start_s() <= t0 + 1e-9 && tr.end_s() >= t1 - 1e-9) covering.push_back(&tr);
    if (covering.empty())
      throw InvalidArgError(strf("no viewpoint trace covers chunk %d", k));

    for (int r = 0; r < video.rows; ++r) {
      for (int c = 0; c < video.cols; ++c) {
        const CellFeatures& f = video.cell(k, r, c);
        double cj = jnd.content_jnd(f.luminance, f.texture);
        double p_hi = 0.0, p_lo = 0.0;
        for (const ViewpointTrace* tr : covering) {
          double ratio = jnd.action_ratio(realized_action_state(video, *tr, k, r, c, t0, t1));
          p_hi += pspnr_from_pmse(tile_pmse(video.error(k, r, c, q_best), cj, ratio), ceiling_db);
          p_lo += pspnr_from_pmse(tile_pmse(video.error(k, r, c, q_worst), cj, ratio), ceiling_db);
        }
        p_hi /= static_cast<double>(covering.size());
        p_lo /= static_cast<double>(covering.size());
        map.gamma[(static_cast<size_t>(k) * video.rows + r) * video.cols + c] =
            std::max((p_hi - p_lo) / qp_span, 0.0);
      }
    }
  }
  return map;
}

// ---- grouping ----

namespace {

// Prefix sums for O(1) SSE of any rectangle.
struct SseGrid {
  int rows, cols;
  std::vector<double> sum, sum2;

  SseGrid(const std::vector<double>& scores, int rows_, int cols_) : rows(rows_), cols(cols_) {
    sum.assign(static_cast<size_t>(rows + 1) * (cols + 1), 0.0);
    sum2.assign(sum.size(), 0.0);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        double v = scores[static_cast<size_t>(r) * cols + c];
        size_t i = static_cast<size_t>(r + 1) * (cols + 1) + (c + 1);
        size_t up = static_cast<size_t>(r) * (cols + 1) + (c + 1);
        size_t left = static_cast<size_t>(r + 1) * (cols + 1) + c;
        size_t diag = static_cast<size_t>(r) * (cols + 1) + c;
        sum[i] = v + sum[up] + sum[left] - sum[diag];
        sum2[i] = v * v + sum2[up] + sum2[left] - sum2[diag];
      }
    }
  }

  double rect_sum(const GridRect& g, const std::vector<double>& acc) const {
    size_t r1 = static_cast<size_t>(g.row0 + g.rows), c1 = static_cast<size_t>(g.col0 + g.cols);
    size_t r0 = static_cast<size_t>(g.row0), c0 = static_cast<size_t>(g.col0);
    return acc[r1 * (cols + 1) + c1] - acc[r0 * (cols + 1) + c1] - acc[r1 * (cols + 1) + c0] +
           acc[r0 * (cols + 1) + c0];
  }
  double sse(const GridRect& g) const {
    double s = rect_sum(g, sum);
    double q = rect_sum(g, sum2);
    return std::max(q - s * s / g.area(), 0.0);
  }
  double mean(const GridRect& g) const { return rect_sum(g, sum) / g.area(); }
};

struct SplitCandidate {
  double gain = -1.0;
  size_t rect_index = 0;
  int axis = 0;  // 0 = horizontal cut (split rows), 1 = vertical
  int cut = 0;   // rows/cols in the first piece
  GridRect rect;
  bool valid = false;
};

// Tie order: larger gain, then larger rectangle, horizontal over vertical,
// smaller cut index, then rect position for full determinism.
bool better_split(const SplitCandidate& a, const SplitCandidate& b) {
  if (!b.valid) return true;
  double tol = 1e-9 * std::max({1.0, std::abs(a.gain), std::abs(b.gain)});
  if (a.gain > b.gain + tol) return true;
  if (a.gain < b.gain - tol) return false;
  if (a.rect.area() != b.rect.area()) return a.rect.area() > b.rect.area();
  if (a.axis != b.axis) return a.axis < b.axis;
  if (a.cut != b.cut) return a.cut < b.cut;
  if (a.rect.row0 != b.rect.row0) return a.rect.row0 < b.rect.row0;
  return a.rect.col0 < b.rect.col0;
}

void split_rect(const GridRect& g, int axis, int cut, GridRect* a, GridRect* b) {
  *a = g;
  *b = g;
  if (axis == 0) {
    a->rows = cut;
    b->row0 = g.row0 + cut;
    b->rows = g.rows - cut;
  } else {
    a->cols = cut;
    b->col0 = g.col0 + cut;
    b->cols = g.cols - cut;
  }
}

struct BeamState {
  std::vector<GridRect> rects;
  double cost = 0.0;

  std::string key() const {
    std::string k;
    for (const auto& r : rects)
      k += strf("%d,%d,%d,%d;", r.row0, r.col0, r.rows, r.cols);
    return k;
  }
};

SplitCandidate best_split_of(const BeamState& state, const SseGrid& grid) {
  SplitCandidate best;
  for (size_t i = 0; i < state.rects.size(); ++i) {
    const GridRect& g = state.rects[i];
    double parent = grid.sse(g);
    for (int axis = 0; axis < 2; ++axis) {
      int limit = axis == 0 ? g.rows : g.cols;
      for (int cut = 1; cut < limit; ++cut) {
        GridRect a, b;
        split_rect(g, axis, cut, &a, &b);
        SplitCandidate cand;
        cand.gain = parent - grid.sse(a) - grid.sse(b);
        cand.rect_index = i;
        cand.axis = axis;
        cand.cut = cut;
        cand.rect = g;
        cand.valid = true;
        if (better_split(cand, best)) best = cand;
      }
    }
  }
  return best;
}

void apply_split(BeamState* state, const SplitCandidate& s) {
  GridRect a, b;
  split_rect(state->rects[s.rect_index], s.axis, s.cut, &a, &b);
  state->rects[s.rect_index] = a;
  state->rects.insert(state->rects.begin() + static_cast<long>(s.rect_index) + 1, b);
  state->cost -= s.gain;
}

}  // namespace

Tiling group_tiles(const std::vector<double>& scores, int rows, int cols, int n, int beam) {
  if (scores.size() != static_cast<size_t>(rows) * cols)
    throw InvalidArgError("score grid size mismatch");
  if (n < 1 || n > rows * cols)
    throw InvalidArgError(strf("tile count %d out of [1, %d]", n, rows * cols));
  if (beam < 1) throw InvalidArgError("beam must be >= 1");

  SseGrid grid(scores, rows, cols);
  BeamState root;
  root.rects = {GridRect{0, 0, rows, cols}};
  root.cost = grid.sse(root.rects[0]);

  std::vector<BeamState> frontier{root};
  for (int step = 1; step < n; ++step) {
    if (beam == 1) {
      SplitCandidate s = best_split_of(frontier[0], grid);
      apply_split(&frontier[0], s);
      continue;
    }
    // beam > 1: expand every state with every split, keep the best `beam`
    std::map<std::string, BeamState> pool;
    for (const auto& state : frontier) {
      for (size_t i = 0; i < state.rects.size(); ++i) {
        const GridRect& g = state.rects[i];
        for (int axis = 0; axis < 2; ++axis) {
          int limit = axis == 0 ? g.rows : g.cols;
          for (int cut = 1; cut < limit; ++cut) {
            SplitCandidate s;
            s.rect_index = i;
            s.axis = axis;
            s.cut = cut;
            s.rect = g;
            GridRect a, b;
            split_rect(g, axis, cut, &a, &b);
            s.gain = grid.sse(g) - grid.sse(a) - grid.sse(b);
            BeamState next = state;
            apply_split(&next, s);
            pool.emplace(next.key(), std::move(next));
          }
        }
      }
    }
    std::vector<BeamState> ranked;
    ranked.reserve(pool.size());
    for (auto& [key, st] : pool) ranked.push_back(std::move(st));
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const BeamState& a, const BeamState& b) { return a.cost < b.cost; });
    if (static_cast<int>(ranked.size()) > beam) ranked.resize(static_cast<size_t>(beam));
    frontier = std::move(ranked);
  }

  const BeamState& final_state = frontier[0];
  Tiling t;
  t.rects = final_state.rects;
  t.cost = 0.0;
  for (const auto& r : t.rects) {
    t.mean_gamma.push_back(grid.mean(r));
    t.cost += grid.sse(r);
  }
  t.validate();
  if (static_cast<int>(t.rects.size()) != n) throw InvariantError("split count mismatch");
  return t;
}

Tiling group_tiles(const std::vector<double>& scores, int n, int beam) {
  return group_tiles(scores, kGridRows, kGridCols, n, beam);
}

double partition_cost(const std::vector<double>& scores, int rows, int cols,
                      const std::vector<GridRect>& rects) {
  SseGrid grid(scores, rows, cols);
  double j = 0.0;
  for (const auto& r : rects) j += grid.sse(r);
  return j;
}

// ---- brute force oracle ----

namespace {

struct BruteForcer {
  const SseGrid& grid;
  std::map<std::tuple<int, int, int, int, int>, BruteForceResult> memo;

  BruteForceResult solve(const GridRect& g, int n) {
    if (n == 1) return {grid.sse(g), {g}};
    auto key = std::make_tuple(g.row0, g.col0, g.rows, g.cols, n);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    BruteForceResult best{std::numeric_limits<double>::infinity(), {}};
    for (int axis = 0; axis < 2; ++axis) {
      int limit = axis == 0 ? g.rows : g.cols;
      for (int cut = 1; cut < limit; ++cut) {
        GridRect a, b;
        split_rect(g, axis, cut, &a, &b);
        int max_a = a.rows * a.cols, max_b = b.rows * b.cols;
        for (int na = 1; na < n; ++na) {
          int nb = n - na;
          if (na > max_a || nb > max_b) continue;
          BruteForceResult ra = solve(a, na);
          BruteForceResult rb = solve(b, nb);
          if (ra.cost + rb.cost < best.cost) {
            best.cost = ra.cost + rb.cost;
            best.rects = ra.rects;
            best.rects.insert(best.rects.end(), rb.rects.begin(), rb.rects.end());
          }
        }
      }
    }
    memo[key] = best;
    return best;
  }
};

}  // namespace

BruteForceResult brute_force_guillotine(const std::vector<double>& scores, int rows, int cols,
                                        int n) {
  bool size_ok = (rows <= 3 && cols <= 4) || (rows <= 4 && cols <= 3);
  if (!size_ok || n > 4)
    throw InvalidArgError(strf("brute force limited to 3x4 grids and n <= 4 (got %dx%d, n=%d)",
                               rows, cols, n));
  if (n < 1 || n > rows * cols) throw InvalidArgError("n out of range");
  if (scores.size() != static_cast<size_t>(rows) * cols)
    throw InvalidArgError("score grid size mismatch");
  SseGrid grid(scores, rows, cols);
  BruteForcer bf{grid, {}};
  return bf.solve(GridRect{0, 0, rows, cols}, n);
}

// ---- CSV ----

void save_tiling_csv(const Tiling& t, const std::string& path) {
  std::ostringstream out;
  out << "chunk,tile_id,row0,col0,rows,cols,mean_gamma\n";
  for (size_t i = 0; i < t.rects.size(); ++i) {
    const GridRect& r = t.rects[i];
    out << -1 << "," << i << "," << r.row0 << "," << r.col0 << "," << r.rows << "," << r.cols
        << "," << format_double(t.mean_gamma[i]) << "\n";
  }
  write_text_file(path, out.str());
}

Tiling load_tiling_csv(const std::string& path) {
  CsvTable csv = read_csv(path);
  int c_id = csv.require_column("tile_id", path);
  int c_r0 = csv.require_column("row0", path);
  int c_c0 = csv.require_column("col0", path);
  int c_rows = csv.require_column("rows", path);
  int c_cols = csv.require_column("cols", path);
  int c_g = csv.require_column("mean_gamma", path);
  Tiling t;
  t.rects.resize(csv.rows.size());
  t.mean_gamma.resize(csv.rows.size());
  for (size_t i = 0; i < csv.rows.size(); ++i) {
    std::string ctx = strf("%s:%zu", path.c_str(), csv.line_numbers[i]);
    size_t id = static_cast<size_t>(parse_long(csv.rows[i][c_id], ctx));
    if (id >= csv.rows.size()) throw ParseError(ctx + ": tile_id out of range");
    t.rects[id] = GridRect{static_cast<int>(parse_long(csv.rows[i][c_r0], ctx)),
                           static_cast<int>(parse_long(csv.rows[i][c_c0], ctx)),
                           static_cast<int>(parse_long(csv.rows[i][c_rows], ctx)),
                           static_cast<int>(parse_long(csv.rows[i][c_cols], ctx))};
    t.mean_gamma[id] = parse_double(csv.rows[i][c_g], ctx);
  }
  t.validate();
  return t;
}

}  // namespace pano
