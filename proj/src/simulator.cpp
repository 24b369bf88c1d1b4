#include "simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "action_state.hpp"
#include "pspnr.hpp"

namespace pano {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::pano:
      return "pano";
    case Scheme::viewport_uniform:
      return "viewport_uniform";
    case Scheme::whole_sphere:
      return "whole_sphere";
  }
  return "?";
}

std::optional<Scheme> scheme_from_name(const std::string& name) {
  if (name == "pano") return Scheme::pano;
  if (name == "viewport_uniform") return Scheme::viewport_uniform;
  if (name == "whole_sphere") return Scheme::whole_sphere;
  return std::nullopt;
}

int mos_from_pspnr(double pspnr_db) {
  if (pspnr_db < 46.0) return 1;
  if (pspnr_db < 54.0) return 2;
  if (pspnr_db < 62.0) return 3;
  if (pspnr_db < 70.0) return 4;
  return 5;
}

namespace {

// Fluid-flow bits delivered over [t0, t1] of a piecewise-constant trace.
double integrate_bits(const NetworkTrace& net, double t0, double t1) {
  if (t1 <= t0) return 0.0;
  double bits = 0.0;
  double t = t0;
  size_t i = 0;
  const auto& s = net.samples;
  while (i + 1 < s.size() && s[i + 1].time_s <= t) ++i;
  while (t < t1) {
    double seg_end = i + 1 < s.size() ? s[i + 1].time_s : t1;
    double end = std::min(seg_end, t1);
    bits += s[i].throughput_bps * (end - t);
    t = end;
    if (i + 1 < s.size() && t >= s[i + 1].time_s) ++i;
  }
  return bits;
}

std::vector<GridRect> unit_grid_rects() {
  std::vector<GridRect> rects;
  rects.reserve(static_cast<size_t>(kGridRows) * kGridCols);
  for (int r = 0; r < kGridRows; ++r)
    for (int c = 0; c < kGridCols; ++c) rects.push_back(GridRect{r, c, 1, 1});
  return rects;
}

double tile_bits_at(const VideoDescriptor& video, const GridRect& g, int chunk, int level) {
  double bits = 0.0;
  for (int r = g.row0; r < g.row0 + g.rows; ++r)
    for (int c = g.col0; c < g.col0 + g.cols; ++c)
      bits += video.rate(chunk, r, c, level) * video.chunk_duration_s;
  return bits;
}

struct ChunkPlan {
  std::vector<int> level;         // per scheme tile
  std::vector<double> est_ratio;  // pano only
  double budget_bps = 0.0;
  bool over_budget = false;
};

struct SchemeState {
  Scheme kind;
  std::vector<GridRect> tiles;
  const Manifest* manifest = nullptr;  // pano only
  ViewpointPredictor predictor;
};

// Per-chunk quality decision at download start.
ChunkPlan decide_chunk(const SchemeState& st, const VideoDescriptor& video,
                       const ViewpointTrace& trace, int chunk, double now_s, double level_s,
                       const std::vector<double>& throughput_history, const SessionConfig& cfg,
                       double* pred_yaw, double* pred_pitch) {
  int levels = video.levels();
  int lowest = levels - 1;
  double horizon = std::clamp(level_s, 1.0, 3.0);
  ViewpointSample predicted = st.predictor.predict(trace, now_s, horizon);
  *pred_yaw = predicted.yaw_deg;
  *pred_pitch = predicted.pitch_deg;
  Viewport pv{predicted.yaw_deg, predicted.pitch_deg, cfg.viewport_width_deg,
              cfg.viewport_height_deg};

  std::vector<bool> in_vp(st.tiles.size(), false);
  for (int t : tiles_in_viewport(pv, st.tiles)) in_vp[static_cast<size_t>(t)] = true;

  BufferState buffer;
  buffer.level_s = level_s;
  buffer.target_s = cfg.target_buffer_s;
  buffer.max_s = cfg.max_buffer_s;
  buffer.playhead_chunk = chunk;

  ChunkPlan plan;
  plan.level.assign(st.tiles.size(), lowest);

  if (st.kind == Scheme::pano) {
    const Manifest& m = *st.manifest;
    // candidate chunk budgets from the manifest's nominal rates
    std::vector<double> ladder(static_cast<size_t>(levels), 0.0);
    for (size_t t = 0; t < st.tiles.size(); ++t)
      for (int q = 0; q < levels; ++q)
        ladder[static_cast<size_t>(q)] +=
            m.rate(static_cast<int>(t), in_vp[t] ? q : lowest);
    plan.budget_bps = mpc_chunk_bitrate(buffer, throughput_history, ladder,
                                        video.chunk_duration_s, cfg.mpc_horizon_chunks);

    int focus_tile = 0, past_focus_tile = 0;
    {
      int fr, fc;
      // focus follows the predicted viewpoint; luminance reference is the
      // tile the user looked at 5 s ago
      fr = cell_row_of_pitch(predicted.pitch_deg);
      fc = cell_col_of_yaw(predicted.yaw_deg);
      for (size_t t = 0; t < m.tiles.size(); ++t)
        if (m.tiles[t].contains(fr, fc)) focus_tile = static_cast<int>(t);
      focus_cell_at(trace, std::max(now_s - kLuminanceWindowS, trace.start_s()), &fr, &fc);
      for (size_t t = 0; t < m.tiles.size(); ++t)
        if (m.tiles[t].contains(fr, fc)) past_focus_tile = static_cast<int>(t);
    }

    plan.est_ratio.resize(st.tiles.size(), 1.0);
    std::vector<TileChoice> choices(st.tiles.size());
    for (size_t t = 0; t < st.tiles.size(); ++t) {
      ActionEstimate est = estimate_action(trace, now_s, m, chunk, static_cast<int>(t),
                                           focus_tile, past_focus_tile);
      double ratio = m.jnd.action_ratio(est.as_state());
      plan.est_ratio[t] = ratio;
      TileChoice& ch = choices[t];
      ch.area = st.tiles[t].area();
      ch.rate_bps.resize(static_cast<size_t>(levels));
      ch.weighted_pmse.resize(static_cast<size_t>(levels));
      for (int q = 0; q < levels; ++q) {
        ch.rate_bps[static_cast<size_t>(q)] = m.rate(static_cast<int>(t), q);
        double db = eval_compressed(m.table, chunk, static_cast<int>(t), q, ratio);
        double mse = 255.0 * 255.0 * std::pow(10.0, -db / 10.0);
        ch.weighted_pmse[static_cast<size_t>(q)] = ch.area * mse;
      }
    }
    AllocationResult alloc = allocate_tiles(plan.budget_bps, choices, in_vp);
    plan.level = alloc.level;
    plan.over_budget = alloc.over_budget;
    return plan;
  }

  // baselines: uniform quality per distance band, actual per-chunk rates
  std::vector<double> composition(static_cast<size_t>(levels), 0.0);
  Viewport expanded = pv;
  expanded.width_deg = std::min(360.0, pv.width_deg + 2.0 * cfg.band_margin_deg);
  expanded.height_deg = std::min(180.0, pv.height_deg + 2.0 * cfg.band_margin_deg);
  std::vector<int> band(st.tiles.size(), 2);
  for (size_t t = 0; t < st.tiles.size(); ++t) {
    if (st.kind == Scheme::whole_sphere) {
      band[t] = 0;
    } else if (in_vp[t]) {
      band[t] = 0;
    } else if (rect_intersects_viewport(expanded, st.tiles[t])) {
      band[t] = 1;
    }
  }
  for (int q0 = 0; q0 < levels; ++q0) {
    double total = 0.0;
    for (size_t t = 0; t < st.tiles.size(); ++t) {
      int q = band[t] == 0 ? q0 : (band[t] == 1 ? std::min(q0 + 1, lowest) : lowest);
      total += tile_bits_at(video, st.tiles[t], chunk, q) / video.chunk_duration_s;
    }
    composition[static_cast<size_t>(q0)] = total;
  }
  plan.budget_bps = mpc_chunk_bitrate(buffer, throughput_history, composition,
                                      video.chunk_duration_s, cfg.mpc_horizon_chunks);
  int chosen_q0 = lowest;
  for (int q0 = 0; q0 < levels; ++q0)
    if (composition[static_cast<size_t>(q0)] == plan.budget_bps) {
      chosen_q0 = q0;
      break;
    }
  for (size_t t = 0; t < st.tiles.size(); ++t)
    plan.level[t] =
        band[t] == 0 ? chosen_q0 : (band[t] == 1 ? std::min(chosen_q0 + 1, lowest) : lowest);
  return plan;
}

// Ground-truth chunk quality from the realized viewpoint and movement state.
void ground_truth_pspnr(const VideoDescriptor& video, const ViewpointTrace& trace,
                        const std::vector<GridRect>& tiles, const std::vector<int>& level,
                        int chunk, double t0, double t1, const JndModel& jnd,
                        const SessionConfig& cfg, double* viewport_db, double* sphere_db) {
  ViewpointSample mid = viewpoint_at_clamped(trace, (t0 + t1) / 2.0);
  Viewport actual{mid.yaw_deg, mid.pitch_deg, cfg.viewport_width_deg, cfg.viewport_height_deg};

  std::vector<int> cell_level(static_cast<size_t>(video.cells()), 0);
  for (size_t t = 0; t < tiles.size(); ++t) {
    const GridRect& g = tiles[t];
    for (int r = g.row0; r < g.row0 + g.rows; ++r)
      for (int c = g.col0; c < g.col0 + g.cols; ++c)
        cell_level[static_cast<size_t>(r) * video.cols + c] = level[t];
  }

  double vp_sum = 0.0, sphere_sum = 0.0;
  int vp_count = 0;
  for (int r = 0; r < video.rows; ++r) {
    for (int c = 0; c < video.cols; ++c) {
      const CellFeatures& f = video.cell(chunk, r, c);
      double cj = jnd.content_jnd(f.luminance, f.texture);
      double ratio = jnd.action_ratio(realized_action_state(video, trace, chunk, r, c, t0, t1));
      int q = cell_level[static_cast<size_t>(r) * video.cols + c];
      double m = tile_pmse(video.error(chunk, r, c, q), cj, ratio);
      sphere_sum += m;
      if (rect_intersects_viewport(actual, GridRect{r, c, 1, 1})) {
        vp_sum += m;
        ++vp_count;
      }
    }
  }
  *sphere_db = pspnr_from_pmse(sphere_sum / video.cells(), cfg.pspnr_ceiling_db);
  *viewport_db = vp_count > 0
                     ? pspnr_from_pmse(vp_sum / vp_count, cfg.pspnr_ceiling_db)
                     : cfg.pspnr_ceiling_db;
}

}  // namespace

SessionResult run_session(const VideoDescriptor& video, const ViewpointTrace& viewpoint,
                          const NetworkTrace& network, Scheme scheme, const SessionConfig& cfg,
                          const JndModel& jnd, const Manifest* manifest) {
  if (video.num_chunks == 0) throw InvalidArgError("video has no chunks");
  if (viewpoint.end_s() < video.duration_s() - 1e-9)
    throw InvalidArgError(strf("viewpoint trace (%.2fs) shorter than video (%.2fs)",
                               viewpoint.end_s(), video.duration_s()));
  if (network.samples.back().time_s < video.duration_s() - 1e-9 &&
      network.samples.size() > 1)
    throw InvalidArgError(strf("network trace (%.2fs) shorter than video (%.2fs)",
                               network.samples.back().time_s, video.duration_s()));

  SchemeState st;
  st.kind = scheme;
  if (scheme == Scheme::pano) {
    if (manifest == nullptr) throw InvalidArgError("pano scheme requires a manifest");
    if (static_cast<int>(manifest->quality_qp.size()) != video.levels() ||
        manifest->num_chunks != video.num_chunks)
      throw InvalidArgError("manifest does not match the video descriptor");
    st.tiles = manifest->tiles;
    st.manifest = manifest;
  } else {
    st.tiles = unit_grid_rects();
  }

  const double dt = cfg.quantum_s;
  const long chunk_ticks = std::lround(video.chunk_duration_s / dt);
  if (chunk_ticks < 1) throw InvalidArgError("quantum larger than chunk duration");

  SessionResult out;
  out.chunks.resize(static_cast<size_t>(video.num_chunks));

  // download state
  int next_decision = 0;  // next chunk to decide
  int chunks_complete = 0;
  bool in_flight = false;
  int dl_chunk = 0;
  std::vector<double> dl_tile_bits;   // per tile, in download order
  std::vector<size_t> dl_tile_order;  // scheme tile ids in download order
  std::vector<std::vector<bool>> tile_delivered(static_cast<size_t>(video.num_chunks));
  double dl_done_bits = 0.0, dl_need_bits = 0.0;
  long dl_start_tick = 0;
  std::vector<double> throughput_history;

  long tick = 0;
  long played_ticks = 0, stall_ticks = 0;
  int playhead = 0;
  bool chunk_playing = false;
  double play_start_wall = 0.0;

  const long max_ticks = 100000000;  // hard safety stop
  while (playhead < video.num_chunks && tick < max_ticks) {
    double now = static_cast<double>(tick) * dt;

    // start a download when the link is free and the buffer has room
    double level_s =
        std::max(chunks_complete * video.chunk_duration_s - played_ticks * dt, 0.0);
    if (!in_flight && next_decision < video.num_chunks &&
        level_s <= cfg.max_buffer_s - video.chunk_duration_s + 1e-9) {
      ChunkRecord& rec = out.chunks[static_cast<size_t>(next_decision)];
      rec.chunk = next_decision;
      ChunkPlan plan =
          decide_chunk(st, video, viewpoint, next_decision, now, level_s, throughput_history,
                       cfg, &rec.pred_yaw, &rec.pred_pitch);
      rec.budget_bps = plan.budget_bps;
      rec.level = plan.level;
      rec.est_ratio = plan.est_ratio;
      rec.over_budget = plan.over_budget;
      double horizon = std::clamp(level_s, 1.0, 3.0);
      ViewpointSample act = viewpoint_at_clamped(viewpoint, now + horizon);
      rec.act_yaw = act.yaw_deg;
      rec.act_pitch = act.pitch_deg;

      // viewport-first download order
      Viewport pv{rec.pred_yaw, rec.pred_pitch, cfg.viewport_width_deg, cfg.viewport_height_deg};
      std::vector<size_t> first, rest;
      for (size_t t = 0; t < st.tiles.size(); ++t) {
        if (rect_intersects_viewport(pv, st.tiles[t]))
          first.push_back(t);
        else
          rest.push_back(t);
      }
      dl_tile_order = first;
      dl_tile_order.insert(dl_tile_order.end(), rest.begin(), rest.end());
      dl_tile_bits.clear();
      dl_need_bits = 0.0;
      for (size_t t : dl_tile_order) {
        double bits = tile_bits_at(video, st.tiles[t], next_decision,
                                   plan.level[t]);
        dl_tile_bits.push_back(bits);
        dl_need_bits += bits;
      }
      rec.delivered_bits = dl_need_bits;
      tile_delivered[static_cast<size_t>(next_decision)] =
          std::vector<bool>(st.tiles.size(), false);
      dl_done_bits = 0.0;
      dl_chunk = next_decision;
      dl_start_tick = tick;
      in_flight = true;
      ++next_decision;
    }

    // fluid-flow download progress over this tick
    if (in_flight) {
      double inflow = integrate_bits(network, now, now + dt);
      double used = std::min(inflow, dl_need_bits - dl_done_bits);
      dl_done_bits += used;
      out.total_bits += used;
      // mark tiles whose cumulative prefix is now delivered
      double prefix = 0.0;
      for (size_t i = 0; i < dl_tile_order.size(); ++i) {
        prefix += dl_tile_bits[i];
        if (dl_done_bits >= prefix - 1e-6)
          tile_delivered[static_cast<size_t>(dl_chunk)][dl_tile_order[i]] = true;
      }
      if (dl_done_bits >= dl_need_bits - 1e-6) {
        double seconds = static_cast<double>(tick - dl_start_tick + 1) * dt;
        throughput_history.push_back(dl_need_bits / seconds);
        chunks_complete = dl_chunk + 1;
        in_flight = false;
      }
    }

    // playback / stall bookkeeping
    if (played_ticks % chunk_ticks == 0 && !chunk_playing) {
      // due chunk: wait until every actual-viewport tile is delivered
      ViewpointSample vp = viewpoint_at_clamped(viewpoint, now);
      Viewport actual{vp.yaw_deg, vp.pitch_deg, cfg.viewport_width_deg, cfg.viewport_height_deg};
      bool ready = playhead < chunks_complete;
      if (!ready && !tile_delivered[static_cast<size_t>(playhead)].empty()) {
        ready = true;
        for (int t : tiles_in_viewport(actual, st.tiles))
          if (!tile_delivered[static_cast<size_t>(playhead)][static_cast<size_t>(t)]) {
            ready = false;
            break;
          }
      }
      if (ready) {
        chunk_playing = true;
        play_start_wall = now;
      }
    }

    if (chunk_playing) {
      ++played_ticks;
      if (played_ticks % chunk_ticks == 0) {
        double end_wall = static_cast<double>(tick + 1) * dt;
        ChunkRecord& rec = out.chunks[static_cast<size_t>(playhead)];
        ground_truth_pspnr(video, viewpoint, st.tiles, rec.level, playhead, play_start_wall,
                           end_wall, jnd, cfg, &rec.pspnr_viewport_db, &rec.pspnr_sphere_db);
        ++playhead;
        chunk_playing = false;
      }
    } else {
      ++stall_ticks;
      out.chunks[static_cast<size_t>(playhead)].stall_s += dt;
      if (static_cast<double>(stall_ticks) * dt > cfg.stall_cap_s) {
        out.aborted = true;
        break;
      }
    }
    ++tick;
  }

  out.playback_s = static_cast<double>(played_ticks) * dt;
  out.stall_s = static_cast<double>(stall_ticks) * dt;
  out.wall_s = static_cast<double>(tick) * dt;
  double denom = out.playback_s + out.stall_s;
  out.buffering_ratio = denom > 0 ? out.stall_s / denom : 0.0;
  out.mean_bandwidth_bps = out.wall_s > 0 ? out.total_bits / out.wall_s : 0.0;

  int played = playhead;
  if (played > 0) {
    double vp_sum = 0.0, sp_sum = 0.0;
    for (int k = 0; k < played; ++k) {
      vp_sum += out.chunks[static_cast<size_t>(k)].pspnr_viewport_db;
      sp_sum += out.chunks[static_cast<size_t>(k)].pspnr_sphere_db;
    }
    out.mean_pspnr_viewport_db = vp_sum / played;
    out.mean_pspnr_sphere_db = sp_sum / played;
  }
  out.chunks.resize(static_cast<size_t>(std::max(played, next_decision)));
  out.mos = mos_from_pspnr(out.mean_pspnr_viewport_db);
  return out;
}

// ---- CSV ----

void write_results_csv(const std::vector<SessionRow>& rows, const std::string& path) {
  std::ostringstream out;
  out << "session_id,scheme,seed,target_buffer_s,mean_pspnr_viewport_db,mean_pspnr_sphere_db,"
         "mean_bandwidth_bps,buffering_ratio,stall_s,playback_s,wall_s,total_bits,mos,aborted\n";
  for (const auto& r : rows) {
    out << r.session_id << "," << scheme_name(r.scheme) << "," << r.seed << ","
        << format_double(r.target_buffer_s) << ","
        << format_double(r.result.mean_pspnr_viewport_db) << ","
        << format_double(r.result.mean_pspnr_sphere_db) << ","
        << format_double(r.result.mean_bandwidth_bps) << ","
        << format_double(r.result.buffering_ratio) << "," << format_double(r.result.stall_s)
        << "," << format_double(r.result.playback_s) << "," << format_double(r.result.wall_s)
        << "," << format_double(r.result.total_bits) << "," << r.result.mos << ","
        << (r.result.aborted ? 1 : 0) << "\n";
  }
  write_text_file(path, out.str());
}

std::vector<SchemeSummary> summarize_results_csv(const std::string& path) {
  CsvTable csv = read_csv(path);
  int c_scheme = csv.require_column("scheme", path);
  int c_vp = csv.require_column("mean_pspnr_viewport_db", path);
  int c_sp = csv.require_column("mean_pspnr_sphere_db", path);
  int c_bw = csv.require_column("mean_bandwidth_bps", path);
  int c_buf = csv.require_column("buffering_ratio", path);
  int c_mos = csv.require_column("mos", path);

  std::vector<SchemeSummary> out;
  for (Scheme s : {Scheme::pano, Scheme::viewport_uniform, Scheme::whole_sphere}) {
    SchemeSummary sum;
    sum.scheme = s;
    for (size_t i = 0; i < csv.rows.size(); ++i) {
      if (csv.rows[i][static_cast<size_t>(c_scheme)] != scheme_name(s)) continue;
      std::string ctx = strf("%s:%zu", path.c_str(), csv.line_numbers[i]);
      ++sum.sessions;
      sum.mean_pspnr_viewport_db += parse_double(csv.rows[i][static_cast<size_t>(c_vp)], ctx);
      sum.mean_pspnr_sphere_db += parse_double(csv.rows[i][static_cast<size_t>(c_sp)], ctx);
      sum.mean_bandwidth_bps += parse_double(csv.rows[i][static_cast<size_t>(c_bw)], ctx);
      sum.mean_buffering_ratio += parse_double(csv.rows[i][static_cast<size_t>(c_buf)], ctx);
      sum.mean_mos += parse_double(csv.rows[i][static_cast<size_t>(c_mos)], ctx);
    }
    if (sum.sessions > 0) {
      double n = sum.sessions;
      sum.mean_pspnr_viewport_db /= n;
      sum.mean_pspnr_sphere_db /= n;
      sum.mean_bandwidth_bps /= n;
      sum.mean_buffering_ratio /= n;
      sum.mean_mos /= n;
      out.push_back(sum);
    }
  }
  return out;
}

void write_summary_csv(const std::vector<SchemeSummary>& summaries, const std::string& path) {
  std::ostringstream out;
  out << "scheme,sessions,mean_pspnr_viewport_db,mean_pspnr_sphere_db,mean_bandwidth_bps,"
         "mean_buffering_ratio,mean_mos\n";
  for (const auto& s : summaries) {
    out << scheme_name(s.scheme) << "," << s.sessions << ","
        << format_double(s.mean_pspnr_viewport_db) << ","
        << format_double(s.mean_pspnr_sphere_db) << "," << format_double(s.mean_bandwidth_bps)
        << "," << format_double(s.mean_buffering_ratio) << "," << format_double(s.mean_mos)
        << "\n";
  }
  write_text_file(path, out.str());
}

NetworkTrace scale_network_trace(const NetworkTrace& t, double factor) {
  if (!(factor > 0)) throw InvalidArgError("scale factor must be > 0");
  NetworkTrace out = t;
  for (auto& s : out.samples) s.throughput_bps *= factor;
  return out;
}

// ---- comparison ----

namespace {

struct SchemeRun {
  double mean_pspnr = 0.0;
  double mean_bandwidth = 0.0;
  SchemeSummary summary;
};

SchemeRun run_workload(const VideoDescriptor& video, const std::vector<WorkloadTriple>& workload,
                       Scheme scheme, const SessionConfig& cfg, const JndModel& jnd,
                       const Manifest* manifest, double throughput_scale) {
  SchemeRun run;
  run.summary.scheme = scheme;
  for (const auto& triple : workload) {
    NetworkTrace net = throughput_scale == 1.0
                           ? *triple.network
                           : scale_network_trace(*triple.network, throughput_scale);
    SessionResult res =
        run_session(video, *triple.viewpoint, net, scheme, cfg, jnd, manifest);
    ++run.summary.sessions;
    run.summary.mean_pspnr_viewport_db += res.mean_pspnr_viewport_db;
    run.summary.mean_pspnr_sphere_db += res.mean_pspnr_sphere_db;
    run.summary.mean_bandwidth_bps += res.mean_bandwidth_bps;
    run.summary.mean_buffering_ratio += res.buffering_ratio;
    run.summary.mean_mos += res.mos;
  }
  double n = std::max(run.summary.sessions, 1);
  run.summary.mean_pspnr_viewport_db /= n;
  run.summary.mean_pspnr_sphere_db /= n;
  run.summary.mean_bandwidth_bps /= n;
  run.summary.mean_buffering_ratio /= n;
  run.summary.mean_mos /= n;
  run.mean_pspnr = run.summary.mean_pspnr_viewport_db;
  run.mean_bandwidth = run.summary.mean_bandwidth_bps;
  return run;
}

}  // namespace

ComparisonReport compare_schemes(const VideoDescriptor& video,
                                 const std::vector<WorkloadTriple>& workload,
                                 const std::vector<Scheme>& schemes, const SessionConfig& cfg,
                                 const JndModel& jnd, const Manifest* manifest) {
  if (workload.empty()) throw InvalidArgError("compare_schemes: empty workload");
  if (schemes.empty()) throw InvalidArgError("compare_schemes: no schemes");

  ComparisonReport report;
  std::vector<SchemeRun> runs;
  for (Scheme s : schemes) {
    runs.push_back(run_workload(video, workload, s, cfg, jnd, manifest, 1.0));
    report.per_scheme.push_back(runs.back().summary);
  }

  // reference = weakest scheme at full link; scale the others down to match
  size_t ref = 0;
  for (size_t i = 1; i < runs.size(); ++i)
    if (runs[i].mean_pspnr < runs[ref].mean_pspnr) ref = i;

  for (size_t i = 0; i < runs.size(); ++i) {
    if (i == ref) continue;
    double target = runs[ref].mean_pspnr;
    MatchedQualityDelta delta;
    delta.scheme = schemes[i];
    delta.reference = schemes[ref];
    delta.reference_pspnr_db = target;

    if (runs[i].mean_pspnr <= target + 0.5) {
      // already matched at full link
      delta.throughput_scale = 1.0;
      delta.pspnr_db = runs[i].mean_pspnr;
      delta.bandwidth_ratio = runs[i].mean_bandwidth / runs[ref].mean_bandwidth;
    } else {
      double lo = 0.02, hi = 1.0;
      SchemeRun at_lo = run_workload(video, workload, schemes[i], cfg, jnd, manifest, lo);
      if (at_lo.mean_pspnr >= target - 0.5) {
        hi = lo;  // even a tiny link matches; report the floor
      } else {
        for (int iter = 0; iter < 24; ++iter) {
          double mid = (lo + hi) / 2.0;
          SchemeRun at_mid = run_workload(video, workload, schemes[i], cfg, jnd, manifest, mid);
          if (at_mid.mean_pspnr >= target - 0.5)
            hi = mid;
          else
            lo = mid;
        }
      }
      SchemeRun matched = run_workload(video, workload, schemes[i], cfg, jnd, manifest, hi);
      delta.throughput_scale = hi;
      delta.pspnr_db = matched.mean_pspnr;
      delta.bandwidth_ratio = matched.mean_bandwidth / runs[ref].mean_bandwidth;
    }
    report.matched.push_back(delta);
  }
  return report;
}

}  // namespace pano
