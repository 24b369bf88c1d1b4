#include "adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "action_state.hpp"

namespace pano {

ViewpointSample ViewpointPredictor::predict(const ViewpointTrace& history, double now_s,
                                            double horizon_s) const {
  const auto& s = history.samples;
  if (s.empty()) throw InvalidArgError("predict: empty history");

  size_t end = 0;
  while (end < s.size() && s[end].time_s <= now_s + 1e-12) ++end;
  size_t begin = end;
  while (begin > 0 && s[begin - 1].time_s >= now_s - window_s - 1e-12) --begin;
  if (end - begin < 2) {
    const ViewpointSample& last = end > 0 ? s[end - 1] : s.front();
    return {now_s + horizon_s, last.yaw_deg, last.pitch_deg};
  }

  // unwrap yaw across the window so regression sees a continuous signal
  std::vector<double> t(end - begin), yaw(end - begin), pitch(end - begin);
  double unwrapped = s[begin].yaw_deg;
  for (size_t i = begin; i < end; ++i) {
    if (i > begin) unwrapped += yaw_shorter_delta(s[i - 1].yaw_deg, s[i].yaw_deg);
    t[i - begin] = s[i].time_s;
    yaw[i - begin] = unwrapped;
    pitch[i - begin] = s[i].pitch_deg;
  }

  auto fit_at = [&t](const std::vector<double>& y, double x) {
    double n = static_cast<double>(t.size());
    double mt = std::accumulate(t.begin(), t.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < t.size(); ++i) {
      sxx += (t[i] - mt) * (t[i] - mt);
      sxy += (t[i] - mt) * (y[i] - my);
    }
    double slope = sxx > 0 ? sxy / sxx : 0.0;
    return my + slope * (x - mt);
  };

  double when = now_s + horizon_s;
  ViewpointSample out;
  out.time_s = when;
  out.yaw_deg = wrap_yaw(fit_at(yaw, when));
  out.pitch_deg = std::clamp(fit_at(pitch, when), -90.0, 90.0);
  return out;
}

ActionEstimate estimate_action(const ViewpointTrace& history, double now_s, const Manifest& m,
                               int chunk, int tile, int focus_tile, int past_focus_tile) {
  ActionEstimate est;

  double obj_vy, obj_vp;
  m.object_velocity(chunk, tile, &obj_vy, &obj_vp);
  auto vel = head_velocity_samples(history, now_s - kSpeedWindowS, now_s);
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& v : vel)
    lo = std::min(lo, std::sqrt((v.vel_yaw - obj_vy) * (v.vel_yaw - obj_vy) +
                                (v.vel_pitch - obj_vp) * (v.vel_pitch - obj_vp)));
  est.rel_speed = vel.empty() ? 0.0 : lo;

  int past_chunk = std::max(
      chunk - static_cast<int>(std::ceil(kLuminanceWindowS / m.chunk_duration_s)), 0);
  est.luminance_change =
      std::abs(m.luminance(chunk, tile) - m.luminance(past_chunk, past_focus_tile));
  est.dof_diff = std::abs(m.dof(chunk, tile) - m.dof(chunk, focus_tile));
  return est;
}

double mpc_chunk_bitrate(const BufferState& buffer, const std::vector<double>& throughput_history,
                         const std::vector<double>& chunk_rate_ladder, double chunk_duration_s,
                         int horizon_chunks) {
  if (chunk_rate_ladder.empty()) throw InvalidArgError("empty chunk rate ladder");
  double lowest = *std::min_element(chunk_rate_ladder.begin(), chunk_rate_ladder.end());
  if (throughput_history.empty()) return lowest;

  // harmonic mean of the last 5 samples
  size_t n = std::min<size_t>(5, throughput_history.size());
  double inv = 0.0;
  for (size_t i = throughput_history.size() - n; i < throughput_history.size(); ++i)
    inv += 1.0 / std::max(throughput_history[i], 1.0);
  double predicted = static_cast<double>(n) / inv;

  double best = lowest;
  for (double r : chunk_rate_ladder) {
    double level = buffer.level_s;
    bool ok = true;
    for (int h = 0; h < horizon_chunks; ++h) {
      double dl = r * chunk_duration_s / predicted;
      if (level - dl < -1e-9) {  // would stall mid-download
        ok = false;
        break;
      }
      level = std::min(level - dl + chunk_duration_s, buffer.max_s);
      if (level < buffer.target_s - 1e-9) {
        ok = false;
        break;
      }
    }
    if (ok && r > best) best = r;
  }
  return best;
}

// ---- tile-level allocation ----

namespace {

struct PartialState {
  double pmse = 0.0;
  double size = 0.0;
  std::vector<int> levels;  // in processed order
};

// Lexicographic comparison of two partial assignments as they would appear
// in the original tile order.
bool lex_less(const PartialState& x, const PartialState& y,
              const std::vector<size_t>& original_order_positions) {
  for (size_t pos : original_order_positions) {
    if (pos >= x.levels.size()) break;
    if (x.levels[pos] != y.levels[pos]) return x.levels[pos] < y.levels[pos];
  }
  return false;
}

}  // namespace

AllocationResult allocate_exact(double budget_bps, const std::vector<TileChoice>& tiles) {
  AllocationResult result;
  if (tiles.empty()) return result;
  size_t levels = tiles[0].rate_bps.size();
  for (const auto& t : tiles)
    if (t.rate_bps.size() != levels || t.weighted_pmse.size() != levels)
      throw InvalidArgError("tile ladders must share the level count");
  if (levels == 0) throw InvalidArgError("tiles need at least one level");

  // all-lowest fallback (lowest quality = last level)
  double min_total = 0.0;
  for (const auto& t : tiles) min_total += t.rate_bps[levels - 1];
  if (min_total > budget_bps + 1e-9) {
    result.over_budget = true;
    result.level.assign(tiles.size(), static_cast<int>(levels) - 1);
    for (size_t i = 0; i < tiles.size(); ++i) {
      result.objective += tiles[i].weighted_pmse[levels - 1];
      result.total_rate += tiles[i].rate_bps[levels - 1];
    }
    return result;
  }

  // process in descending area; results map back to original indices
  std::vector<size_t> order(tiles.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return tiles[a].area > tiles[b].area; });

  // processed positions sorted by original index, for lex tie-breaks
  std::vector<size_t> lex_positions(order.size());
  std::iota(lex_positions.begin(), lex_positions.end(), 0);
  std::sort(lex_positions.begin(), lex_positions.end(),
            [&](size_t a, size_t b) { return order[a] < order[b]; });

  // cheapest completion of the remaining tiles, for lossless budget pruning
  std::vector<double> remaining_min(order.size() + 1, 0.0);
  for (size_t i = order.size(); i-- > 0;) {
    double cheapest = tiles[order[i]].rate_bps[0];
    for (size_t q = 1; q < levels; ++q)
      cheapest = std::min(cheapest, tiles[order[i]].rate_bps[q]);
    remaining_min[i] = remaining_min[i + 1] + cheapest;
  }

  std::vector<PartialState> frontier{PartialState{}};
  std::vector<PartialState> next;
  for (size_t i = 0; i < order.size(); ++i) {
    const TileChoice& tile = tiles[order[i]];
    next.clear();
    for (const auto& state : frontier) {
      for (size_t q = 0; q < levels; ++q) {
        double size = state.size + tile.rate_bps[q];
        if (size + remaining_min[i + 1] > budget_bps + 1e-9) continue;
        PartialState s;
        s.pmse = state.pmse + tile.weighted_pmse[q];
        s.size = size;
        s.levels = state.levels;
        s.levels.push_back(static_cast<int>(q));
        next.push_back(std::move(s));
      }
    }
    if (next.empty()) throw InvariantError("allocation frontier emptied unexpectedly");

    // dominance pruning, preserving the lex tie-break:
    //   drop Y if some X has smaller pmse and size <= Y's, or equal pmse,
    //   size <= Y's and a lex-smaller assignment.
    std::sort(next.begin(), next.end(), [&](const PartialState& a, const PartialState& b) {
      if (a.pmse != b.pmse) return a.pmse < b.pmse;
      if (a.size != b.size) return a.size < b.size;
      return lex_less(a, b, lex_positions);
    });
    std::vector<PartialState> pruned;
    double min_size_smaller_pmse = std::numeric_limits<double>::infinity();
    size_t g = 0;
    while (g < next.size()) {
      size_t g_end = g;
      while (g_end < next.size() && next[g_end].pmse == next[g].pmse) ++g_end;
      double group_min_size = std::numeric_limits<double>::infinity();
      const PartialState* best_lex = nullptr;
      for (size_t j = g; j < g_end; ++j) {  // already sorted by size asc
        group_min_size = std::min(group_min_size, next[j].size);
        if (next[j].size >= min_size_smaller_pmse) continue;
        if (best_lex != nullptr && !lex_less(next[j], *best_lex, lex_positions)) continue;
        best_lex = &next[j];
        pruned.push_back(next[j]);
      }
      min_size_smaller_pmse = std::min(min_size_smaller_pmse, group_min_size);
      g = g_end;
    }
    frontier = std::move(pruned);
  }

  // pick the optimum: min pmse, then the lex-smallest assignment among the
  // tied survivors (they are size-sorted with decreasing lex)
  size_t best_idx = 0;
  for (size_t j = 1; j < frontier.size() && frontier[j].pmse == frontier[0].pmse; ++j)
    if (lex_less(frontier[j], frontier[best_idx], lex_positions)) best_idx = j;
  const PartialState& best = frontier[best_idx];
  result.level.assign(tiles.size(), 0);
  for (size_t i = 0; i < order.size(); ++i) result.level[order[i]] = best.levels[i];
  for (size_t i = 0; i < tiles.size(); ++i) {
    result.objective += tiles[i].weighted_pmse[static_cast<size_t>(result.level[i])];
    result.total_rate += tiles[i].rate_bps[static_cast<size_t>(result.level[i])];
  }
  return result;
}

AllocationResult allocate_tiles(double budget_bps, const std::vector<TileChoice>& tiles,
                                const std::vector<bool>& in_viewport) {
  if (in_viewport.size() != tiles.size())
    throw InvalidArgError("viewport mask size mismatch");
  if (tiles.empty()) return {};
  size_t levels = tiles[0].rate_bps.size();
  int lowest = static_cast<int>(levels) - 1;

  double pinned_rate = 0.0;
  std::vector<TileChoice> search;
  std::vector<size_t> search_index;
  for (size_t i = 0; i < tiles.size(); ++i) {
    if (in_viewport[i]) {
      search.push_back(tiles[i]);
      search_index.push_back(i);
    } else {
      pinned_rate += tiles[i].rate_bps[static_cast<size_t>(lowest)];
    }
  }

  AllocationResult result;
  result.level.assign(tiles.size(), lowest);
  if (!search.empty()) {
    AllocationResult inner = allocate_exact(budget_bps - pinned_rate, search);
    result.over_budget = inner.over_budget;
    for (size_t i = 0; i < search.size(); ++i) result.level[search_index[i]] = inner.level[i];
  } else if (pinned_rate > budget_bps + 1e-9) {
    result.over_budget = true;
  }
  for (size_t i = 0; i < tiles.size(); ++i) {
    result.objective += tiles[i].weighted_pmse[static_cast<size_t>(result.level[i])];
    result.total_rate += tiles[i].rate_bps[static_cast<size_t>(result.level[i])];
  }
  return result;
}

std::vector<size_t> prune_dominated(const std::vector<FrontierPoint>& points) {
  std::vector<size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    if (points[a].pmse != points[b].pmse) return points[a].pmse < points[b].pmse;
    if (points[a].size != points[b].size) return points[a].size < points[b].size;
    return a < b;
  });

  std::vector<size_t> out;
  double min_size_smaller_pmse = std::numeric_limits<double>::infinity();
  size_t g = 0;
  while (g < idx.size()) {
    size_t g_end = g;
    while (g_end < idx.size() && points[idx[g_end]].pmse == points[idx[g]].pmse) ++g_end;
    // within an equal-pmse group only the smallest size survives (first
    // index on exact ties), and only if it beats every smaller-pmse point
    if (points[idx[g]].size < min_size_smaller_pmse) out.push_back(idx[g]);
    min_size_smaller_pmse = std::min(min_size_smaller_pmse, points[idx[g]].size);
    g = g_end;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pano
