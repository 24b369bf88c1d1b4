#include "pano/pano.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>

#include "adaptation.hpp"
#include "jnd.hpp"
#include "manifest.hpp"
#include "simulator.hpp"
#include "tiling.hpp"
#include "trace_model.hpp"

using namespace pano;

struct pano_video {
  VideoDescriptor v;
};
struct pano_viewpoint_trace {
  ViewpointTrace t;
};
struct pano_network_trace {
  NetworkTrace t;
};
struct pano_jnd_model {
  JndModel m;
};
struct pano_tiling {
  Tiling t;
};
struct pano_manifest {
  Manifest m;
};
struct pano_session_result {
  SessionResult r;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
pano_status wrap(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return PANO_OK;
  } catch (const IoError& e) {
    g_last_error = e.what();
    return PANO_ERR_IO;
  } catch (const ParseError& e) {
    g_last_error = e.what();
    return PANO_ERR_PARSE;
  } catch (const InvariantError& e) {
    g_last_error = e.what();
    return PANO_ERR_INVARIANT;
  } catch (const InvalidArgError& e) {
    g_last_error = e.what();
    return PANO_ERR_INVALID_ARG;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PANO_ERR_INTERNAL;
  }
}

pano_status require(bool ok, const char* message) {
  if (ok) return PANO_OK;
  g_last_error = message;
  return PANO_ERR_INVALID_ARG;
}

SceneSpec scene_from_options(const pano_scene_options* opts) {
  if (opts == nullptr || opts->archetype == nullptr)
    throw InvalidArgError("scene options/archetype required");
  SceneSpec spec = scene_spec_for(opts->archetype);
  if (opts->duration_s > 0) spec.duration_s = opts->duration_s;
  if (opts->base_rate_bps > 0) spec.base_rate_bps = opts->base_rate_bps;
  if (opts->base_error > 0) spec.base_error = opts->base_error;
  if (!std::isnan(opts->object_speed_yaw)) spec.object_speed_yaw = opts->object_speed_yaw;
  if (opts->track_fraction >= 0) spec.track_fraction = opts->track_fraction;
  if (opts->network_mean_bps > 0) spec.network_mean_bps = opts->network_mean_bps;
  spec.validate();
  return spec;
}

Scheme scheme_from(pano_scheme s) {
  switch (s) {
    case PANO_SCHEME_PANO:
      return Scheme::pano;
    case PANO_SCHEME_VIEWPORT_UNIFORM:
      return Scheme::viewport_uniform;
    case PANO_SCHEME_WHOLE_SPHERE:
      return Scheme::whole_sphere;
  }
  throw InvalidArgError("unknown scheme");
}

SessionConfig config_from(const pano_session_options* opts) {
  SessionConfig cfg;
  if (opts != nullptr) {
    if (opts->target_buffer_s > 0) cfg.target_buffer_s = opts->target_buffer_s;
    cfg.seed = opts->seed;
  }
  return cfg;
}

void write_decision_log(const SessionResult& r, const std::string& path) {
  std::ostringstream out;
  out << "chunk,r_k_bps,levels,est_ratio,pred_yaw,pred_pitch,act_yaw,act_pitch,over_budget\n";
  for (const auto& c : r.chunks) {
    out << c.chunk << "," << format_double(c.budget_bps) << ",";
    for (size_t i = 0; i < c.level.size(); ++i) out << (i ? ";" : "") << c.level[i];
    out << ",";
    for (size_t i = 0; i < c.est_ratio.size(); ++i)
      out << (i ? ";" : "") << format_double(c.est_ratio[i]);
    out << "," << format_double(c.pred_yaw) << "," << format_double(c.pred_pitch) << ","
        << format_double(c.act_yaw) << "," << format_double(c.act_pitch) << ","
        << (c.over_budget ? 1 : 0) << "\n";
  }
  write_text_file(path, out.str());
}

}  // namespace

extern "C" {

const char* pano_status_name(pano_status status) {
  switch (status) {
    case PANO_OK:
      return "ok";
    case PANO_ERR_IO:
      return "io_error";
    case PANO_ERR_PARSE:
      return "parse_error";
    case PANO_ERR_INVARIANT:
      return "invariant_error";
    case PANO_ERR_INVALID_ARG:
      return "invalid_argument";
    case PANO_ERR_INTERNAL:
      return "internal_error";
  }
  return "unknown";
}

const char* pano_last_error(void) { return g_last_error.c_str(); }

const char* pano_version(void) { return "1.0.0"; }

void pano_scene_options_init(pano_scene_options* opts) {
  if (opts == nullptr) return;
  opts->archetype = "tracked-object";
  opts->duration_s = 0;
  opts->base_rate_bps = 0;
  opts->base_error = 0;
  opts->object_speed_yaw = NAN;
  opts->track_fraction = -1;
  opts->network_mean_bps = 0;
}

pano_status pano_video_generate(const pano_scene_options* opts, uint64_t seed, pano_video** out) {
  if (pano_status s = require(out != nullptr, "out pointer required")) return s;
  return wrap([&] { *out = new pano_video{generate_synthetic_video(scene_from_options(opts), seed)}; });
}

pano_status pano_viewpoint_generate(const pano_scene_options* opts, uint64_t seed,
                                    pano_viewpoint_trace** out) {
  if (pano_status s = require(out != nullptr, "out pointer required")) return s;
  return wrap(
      [&] { *out = new pano_viewpoint_trace{generate_viewpoint_trace(scene_from_options(opts), seed)}; });
}

pano_status pano_network_generate(const pano_scene_options* opts, uint64_t seed,
                                  pano_network_trace** out) {
  if (pano_status s = require(out != nullptr, "out pointer required")) return s;
  return wrap(
      [&] { *out = new pano_network_trace{generate_network_trace(scene_from_options(opts), seed)}; });
}

pano_status pano_video_load(const char* csv_path, pano_video** out) {
  if (pano_status s = require(csv_path && out, "path and out required")) return s;
  return wrap([&] { *out = new pano_video{load_video_descriptor(csv_path)}; });
}

pano_status pano_video_save(const pano_video* video, const char* csv_path) {
  if (pano_status s = require(video && csv_path, "video and path required")) return s;
  return wrap([&] { save_video_descriptor(video->v, csv_path); });
}

void pano_video_free(pano_video* video) { delete video; }

int pano_video_num_chunks(const pano_video* video) {
  return video ? video->v.num_chunks : 0;
}

pano_status pano_viewpoint_load(const char* csv_path, pano_viewpoint_trace** out) {
  if (pano_status s = require(csv_path && out, "path and out required")) return s;
  return wrap([&] { *out = new pano_viewpoint_trace{load_viewpoint_trace(csv_path)}; });
}

pano_status pano_viewpoint_save(const pano_viewpoint_trace* trace, const char* csv_path) {
  if (pano_status s = require(trace && csv_path, "trace and path required")) return s;
  return wrap([&] { save_viewpoint_trace(trace->t, csv_path); });
}

void pano_viewpoint_free(pano_viewpoint_trace* trace) { delete trace; }

pano_status pano_network_load(const char* csv_path, pano_network_trace** out) {
  if (pano_status s = require(csv_path && out, "path and out required")) return s;
  return wrap([&] { *out = new pano_network_trace{load_network_trace(csv_path)}; });
}

pano_status pano_network_save(const pano_network_trace* trace, const char* csv_path) {
  if (pano_status s = require(trace && csv_path, "trace and path required")) return s;
  return wrap([&] { save_network_trace(trace->t, csv_path); });
}

void pano_network_free(pano_network_trace* trace) { delete trace; }

pano_status pano_jnd_default(pano_jnd_model** out) {
  if (pano_status s = require(out != nullptr, "out pointer required")) return s;
  return wrap([&] { *out = new pano_jnd_model{default_jnd_model()}; });
}

pano_status pano_jnd_load(const char* config_path, pano_jnd_model** out) {
  if (pano_status s = require(config_path && out, "path and out required")) return s;
  return wrap([&] { *out = new pano_jnd_model{load_jnd_config(config_path)}; });
}

void pano_jnd_free(pano_jnd_model* model) { delete model; }

pano_status pano_prepare(const pano_video* video, const pano_viewpoint_trace* const* traces,
                         size_t num_traces, const pano_jnd_model* jnd, int n_tiles, int table_n,
                         pano_tiling** out_tiling, pano_manifest** out_manifest) {
  if (pano_status s = require(video && traces && num_traces > 0 && jnd, "video, traces and jnd required"))
    return s;
  return wrap([&] {
    std::vector<ViewpointTrace> history;
    history.reserve(num_traces);
    for (size_t i = 0; i < num_traces; ++i) {
      if (traces[i] == nullptr) throw InvalidArgError("null trace in history list");
      history.push_back(traces[i]->t);
    }
    EfficiencyMap scores = efficiency_scores(video->v, history, jnd->m);
    Tiling tiling = group_tiles(scores.chunk_mean(), n_tiles);
    Manifest manifest = build_manifest(video->v, tiling, jnd->m, table_n);
    if (out_tiling) *out_tiling = new pano_tiling{std::move(tiling)};
    if (out_manifest) *out_manifest = new pano_manifest{std::move(manifest)};
  });
}

pano_status pano_tiling_save_csv(const pano_tiling* tiling, const char* path) {
  if (pano_status s = require(tiling && path, "tiling and path required")) return s;
  return wrap([&] { save_tiling_csv(tiling->t, path); });
}

int pano_tiling_num_tiles(const pano_tiling* tiling) {
  return tiling ? static_cast<int>(tiling->t.rects.size()) : 0;
}

void pano_tiling_free(pano_tiling* tiling) { delete tiling; }

pano_status pano_manifest_save(const pano_manifest* manifest, const char* path) {
  if (pano_status s = require(manifest && path, "manifest and path required")) return s;
  return wrap([&] { save_manifest(manifest->m, path); });
}

pano_status pano_manifest_load(const char* path, pano_manifest** out) {
  if (pano_status s = require(path && out, "path and out required")) return s;
  return wrap([&] { *out = new pano_manifest{load_manifest(path)}; });
}

pano_status pano_manifest_dump_json(const pano_manifest* manifest, const char* path) {
  if (pano_status s = require(manifest && path, "manifest and path required")) return s;
  return wrap([&] { write_text_file(path, manifest_to_json(manifest->m)); });
}

size_t pano_manifest_size_bytes(const pano_manifest* manifest) {
  if (manifest == nullptr) return 0;
  return serialize_manifest(manifest->m).size();
}

size_t pano_manifest_table_bytes(const pano_manifest* manifest) {
  if (manifest == nullptr) return 0;
  return manifest_table_section_bytes(manifest->m);
}

void pano_manifest_free(pano_manifest* manifest) { delete manifest; }

void pano_session_options_init(pano_session_options* opts) {
  if (opts == nullptr) return;
  opts->scheme = PANO_SCHEME_PANO;
  opts->target_buffer_s = 0;
  opts->seed = 0;
}

pano_status pano_run_session(const pano_video* video, const pano_viewpoint_trace* viewpoint,
                             const pano_network_trace* network, const pano_manifest* manifest,
                             const pano_jnd_model* jnd, const pano_session_options* opts,
                             pano_session_result** out) {
  if (pano_status s = require(video && viewpoint && network && jnd && opts && out,
                              "video, traces, jnd, options and out required"))
    return s;
  return wrap([&] {
    SessionConfig cfg = config_from(opts);
    *out = new pano_session_result{run_session(video->v, viewpoint->t, network->t,
                                               scheme_from(opts->scheme), cfg, jnd->m,
                                               manifest ? &manifest->m : nullptr)};
  });
}

double pano_session_mean_pspnr_db(const pano_session_result* r) {
  return r ? r->r.mean_pspnr_viewport_db : 0;
}
double pano_session_sphere_pspnr_db(const pano_session_result* r) {
  return r ? r->r.mean_pspnr_sphere_db : 0;
}
double pano_session_buffering_ratio(const pano_session_result* r) {
  return r ? r->r.buffering_ratio : 0;
}
double pano_session_mean_bandwidth_bps(const pano_session_result* r) {
  return r ? r->r.mean_bandwidth_bps : 0;
}
double pano_session_stall_s(const pano_session_result* r) { return r ? r->r.stall_s : 0; }
int pano_session_mos(const pano_session_result* r) { return r ? r->r.mos : 0; }
int pano_session_aborted(const pano_session_result* r) { return r && r->r.aborted ? 1 : 0; }
void pano_session_result_free(pano_session_result* r) { delete r; }

pano_status pano_simulate_matrix(const pano_video* video,
                                 const pano_viewpoint_trace* const* viewpoints,
                                 size_t num_viewpoints, const pano_network_trace* const* networks,
                                 size_t num_networks, const pano_manifest* manifest,
                                 const pano_jnd_model* jnd, const pano_scheme* schemes,
                                 size_t num_schemes, const pano_session_options* opts,
                                 int workers, const char* results_csv_path,
                                 const char* decision_log_dir) {
  if (pano_status s =
          require(video && viewpoints && num_viewpoints > 0 && networks && num_networks > 0 &&
                      jnd && schemes && num_schemes > 0 && results_csv_path,
                  "video, traces, jnd, schemes and results path required"))
    return s;
  return wrap([&] {
    struct Job {
      Scheme scheme;
      const ViewpointTrace* vp;
      const NetworkTrace* net;
    };
    std::vector<Job> jobs;
    for (size_t s = 0; s < num_schemes; ++s)
      for (size_t v = 0; v < num_viewpoints; ++v)
        for (size_t n = 0; n < num_networks; ++n) {
          if (viewpoints[v] == nullptr || networks[n] == nullptr)
            throw InvalidArgError("null trace in workload");
          jobs.push_back({scheme_from(schemes[s]), &viewpoints[v]->t, &networks[n]->t});
        }

    SessionConfig cfg = config_from(opts);
    std::vector<SessionRow> rows(jobs.size());
    std::mutex failure_mutex;
    std::exception_ptr failure;

    int n_workers = std::max(1, workers);
    std::vector<std::thread> pool;
    std::atomic<size_t> cursor{0};
    auto work = [&] {
      for (;;) {
        size_t i = cursor.fetch_add(1);
        if (i >= jobs.size()) return;
        try {
          SessionRow row;
          row.session_id = static_cast<int>(i);
          row.scheme = jobs[i].scheme;
          row.seed = cfg.seed;
          row.target_buffer_s = cfg.target_buffer_s;
          row.result = run_session(video->v, *jobs[i].vp, *jobs[i].net, jobs[i].scheme, cfg,
                                   jnd->m, manifest ? &manifest->m : nullptr);
          rows[i] = std::move(row);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    };
    if (n_workers == 1) {
      work();
    } else {
      for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    write_results_csv(rows, results_csv_path);
    if (decision_log_dir != nullptr) {
      std::filesystem::create_directories(decision_log_dir);
      for (const auto& row : rows) {
        std::string path = std::string(decision_log_dir) + "/decisions_" +
                           std::to_string(row.session_id) + "_" + scheme_name(row.scheme) +
                           ".csv";
        write_decision_log(row.result, path);
      }
    }
  });
}

pano_status pano_report(const char* results_csv_path, const char* summary_csv_path) {
  if (pano_status s = require(results_csv_path && summary_csv_path, "paths required")) return s;
  return wrap(
      [&] { write_summary_csv(summarize_results_csv(results_csv_path), summary_csv_path); });
}

pano_status pano_compare(const pano_video* video, const pano_viewpoint_trace* const* viewpoints,
                         size_t num_viewpoints, const pano_network_trace* const* networks,
                         size_t num_networks, const pano_manifest* manifest,
                         const pano_jnd_model* jnd, const pano_scheme* schemes,
                         size_t num_schemes, const pano_session_options* opts,
                         const char* report_csv_path) {
  if (pano_status s =
          require(video && viewpoints && num_viewpoints > 0 && networks && num_networks > 0 &&
                      jnd && schemes && num_schemes > 0 && report_csv_path,
                  "video, traces, jnd, schemes and report path required"))
    return s;
  return wrap([&] {
    std::vector<WorkloadTriple> workload;
    for (size_t v = 0; v < num_viewpoints; ++v)
      for (size_t n = 0; n < num_networks; ++n) {
        if (viewpoints[v] == nullptr || networks[n] == nullptr)
          throw InvalidArgError("null trace in workload");
        workload.push_back({&viewpoints[v]->t, &networks[n]->t});
      }
    std::vector<Scheme> list;
    for (size_t s = 0; s < num_schemes; ++s) list.push_back(scheme_from(schemes[s]));

    SessionConfig cfg = config_from(opts);
    ComparisonReport report = compare_schemes(video->v, workload, list, cfg, jnd->m,
                                              manifest ? &manifest->m : nullptr);
    std::ostringstream out;
    out << "kind,scheme,reference,sessions,mean_pspnr_viewport_db,mean_bandwidth_bps,"
           "mean_buffering_ratio,mean_mos,throughput_scale,bandwidth_ratio\n";
    for (const auto& s : report.per_scheme)
      out << "summary," << scheme_name(s.scheme) << ",," << s.sessions << ","
          << format_double(s.mean_pspnr_viewport_db) << ","
          << format_double(s.mean_bandwidth_bps) << ","
          << format_double(s.mean_buffering_ratio) << "," << format_double(s.mean_mos)
          << ",,\n";
    for (const auto& m : report.matched)
      out << "matched," << scheme_name(m.scheme) << "," << scheme_name(m.reference) << ",,"
          << format_double(m.pspnr_db) << ",,,," << format_double(m.throughput_scale) << ","
          << format_double(m.bandwidth_ratio) << "\n";
    write_text_file(report_csv_path, out.str());
  });
}

}  // extern "C"
