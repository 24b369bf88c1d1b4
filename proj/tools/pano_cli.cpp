// Command-line front end for the pano shared library. Wires the pipeline:
//   gen      -> synthetic video + viewpoint + network traces
//   prepare  -> tiling.csv + manifest
//   simulate -> results.csv (+ comparison / decision logs)
//   report   -> summary.csv
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pano/pano.h"

namespace {

int g_verbosity = 1;  // 0 quiet, 1 info, 2 debug; PANO_LOG overrides

void init_verbosity() {
  const char* env = std::getenv("PANO_LOG");
  if (env == nullptr) return;
  std::string v(env);
  if (v == "quiet" || v == "0")
    g_verbosity = 0;
  else if (v == "debug" || v == "2")
    g_verbosity = 2;
  else
    g_verbosity = 1;
}

void info(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void info(const char* fmt, ...) {
  if (g_verbosity < 1) return;
  va_list args;
  va_start(args, fmt);
  std::vfprintf(stdout, fmt, args);
  va_end(args);
  std::fputc('\n', stdout);
}

[[noreturn]] void fail(pano_status status, const std::string& what) {
  std::fprintf(stderr, "error: %s: %s (%s)\n", what.c_str(), pano_last_error(),
               pano_status_name(status));
  std::exit(1);
}

void check(pano_status status, const std::string& what) {
  if (status != PANO_OK) fail(status, what);
}

struct VideoHandle {
  pano_video* p = nullptr;
  ~VideoHandle() { pano_video_free(p); }
};
struct ViewpointHandle {
  pano_viewpoint_trace* p = nullptr;
  ~ViewpointHandle() { pano_viewpoint_free(p); }
};
struct NetworkHandle {
  pano_network_trace* p = nullptr;
  ~NetworkHandle() { pano_network_free(p); }
};
struct JndHandle {
  pano_jnd_model* p = nullptr;
  ~JndHandle() { pano_jnd_free(p); }
};
struct TilingHandle {
  pano_tiling* p = nullptr;
  ~TilingHandle() { pano_tiling_free(p); }
};
struct ManifestHandle {
  pano_manifest* p = nullptr;
  ~ManifestHandle() { pano_manifest_free(p); }
};

std::vector<pano_scheme> parse_schemes(const std::vector<std::string>& names) {
  std::vector<pano_scheme> out;
  for (const auto& n : names) {
    if (n == "pano")
      out.push_back(PANO_SCHEME_PANO);
    else if (n == "viewport_uniform")
      out.push_back(PANO_SCHEME_VIEWPORT_UNIFORM);
    else if (n == "whole_sphere")
      out.push_back(PANO_SCHEME_WHOLE_SPHERE);
    else {
      std::fprintf(stderr, "error: unknown scheme '%s'\n", n.c_str());
      std::exit(1);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  init_verbosity();
  CLI::App app{"pano: perceptual 360-degree video streaming simulator"};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate synthetic video and traces");
  std::string gen_scene = "tracked-object";
  double gen_duration = 30.0;
  double gen_rate = 0.0, gen_error = 0.0, gen_net_mean = 0.0;
  double gen_obj_speed = -1.0, gen_track_fraction = -1.0;
  uint64_t gen_seed = 1;
  std::string gen_out = ".";
  gen->add_option("--scene", gen_scene, "archetype: tracked-object|night-scene|mixed-dof");
  gen->add_option("--duration", gen_duration, "video duration in seconds");
  gen->add_option("--base-rate", gen_rate, "per-tile bitrate at the top quality (bps)");
  gen->add_option("--base-error", gen_error, "per-tile error at the top quality");
  gen->add_option("--object-speed", gen_obj_speed, "object yaw speed (deg/s)");
  gen->add_option("--track-fraction", gen_track_fraction, "fraction of time tracking the object");
  gen->add_option("--network-mean", gen_net_mean, "mean link throughput (bps)");
  gen->add_option("--seed", gen_seed, "generation seed");
  gen->add_option("--out", gen_out, "output directory");

  // ---- prepare ----
  auto* prepare = app.add_subcommand("prepare", "offline tiling + manifest build");
  std::string prep_video;
  std::vector<std::string> prep_viewpoints;
  std::string prep_jnd;
  int prep_n_tiles = 30;
  int prep_table_n = 5;
  std::string prep_out = ".";
  prepare->add_option("--video", prep_video, "video.csv path")->required();
  prepare->add_option("--viewpoint", prep_viewpoints, "history viewpoint trace(s)")->required();
  prepare->add_option("--jnd", prep_jnd, "jnd config file (defaults built in)");
  prepare->add_option("--n-tiles", prep_n_tiles, "number of coarse tiles");
  prepare->add_option("--table-n", prep_table_n, "representative values per factor");
  prepare->add_option("--out", prep_out, "output directory");

  // ---- simulate ----
  auto* simulate = app.add_subcommand("simulate", "trace-driven session replay");
  std::string sim_video;
  std::vector<std::string> sim_viewpoints, sim_networks, sim_schemes{"pano"};
  std::string sim_manifest, sim_jnd;
  double sim_target_buffer = 2.0;
  uint64_t sim_seed = 1;
  int sim_workers = 1;
  bool sim_decisions = false, sim_compare = false;
  std::string sim_out = ".";
  simulate->add_option("--video", sim_video, "video.csv path")->required();
  simulate->add_option("--viewpoint", sim_viewpoints, "viewpoint trace(s)")->required();
  simulate->add_option("--network", sim_networks, "network trace(s)")->required();
  simulate->add_option("--manifest", sim_manifest, "manifest (required for the pano scheme)");
  simulate->add_option("--scheme", sim_schemes, "pano|viewport_uniform|whole_sphere");
  simulate->add_option("--jnd", sim_jnd, "jnd config for ground-truth evaluation");
  simulate->add_option("--target-buffer", sim_target_buffer, "buffer target in seconds");
  simulate->add_option("--seed", sim_seed, "session seed");
  simulate->add_option("--workers", sim_workers, "parallel sessions");
  simulate->add_flag("--dump-decisions", sim_decisions, "write per-session decision logs");
  simulate->add_flag("--compare", sim_compare, "matched-quality comparison report");
  simulate->add_option("--out", sim_out, "output directory");

  // ---- report ----
  auto* report = app.add_subcommand("report", "aggregate results.csv into summary.csv");
  std::string rep_results, rep_out = ".";
  report->add_option("--results", rep_results, "results.csv path")->required();
  report->add_option("--out", rep_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    pano_scene_options opts;
    pano_scene_options_init(&opts);
    opts.archetype = gen_scene.c_str();
    opts.duration_s = gen_duration;
    if (gen_rate > 0) opts.base_rate_bps = gen_rate;
    if (gen_error > 0) opts.base_error = gen_error;
    if (gen_obj_speed >= 0) opts.object_speed_yaw = gen_obj_speed;
    if (gen_track_fraction >= 0) opts.track_fraction = gen_track_fraction;
    if (gen_net_mean > 0) opts.network_mean_bps = gen_net_mean;

    std::filesystem::create_directories(gen_out);
    VideoHandle video;
    ViewpointHandle vp;
    NetworkHandle net;
    check(pano_video_generate(&opts, gen_seed, &video.p), "generate video");
    check(pano_viewpoint_generate(&opts, gen_seed, &vp.p), "generate viewpoint trace");
    check(pano_network_generate(&opts, gen_seed, &net.p), "generate network trace");
    check(pano_video_save(video.p, (gen_out + "/video.csv").c_str()), "save video");
    check(pano_viewpoint_save(vp.p, (gen_out + "/viewpoint.csv").c_str()), "save viewpoint");
    check(pano_network_save(net.p, (gen_out + "/network.csv").c_str()), "save network");
    info("scene=%s chunks=%d seed=%llu -> %s/{video,viewpoint,network}.csv", gen_scene.c_str(),
         pano_video_num_chunks(video.p), static_cast<unsigned long long>(gen_seed),
         gen_out.c_str());
    return 0;
  }

  if (prepare->parsed()) {
    VideoHandle video;
    check(pano_video_load(prep_video.c_str(), &video.p), "load video");
    std::vector<ViewpointHandle> traces(prep_viewpoints.size());
    std::vector<const pano_viewpoint_trace*> trace_ptrs;
    for (size_t i = 0; i < prep_viewpoints.size(); ++i) {
      check(pano_viewpoint_load(prep_viewpoints[i].c_str(), &traces[i].p),
            "load viewpoint " + prep_viewpoints[i]);
      trace_ptrs.push_back(traces[i].p);
    }
    JndHandle jnd;
    check(prep_jnd.empty() ? pano_jnd_default(&jnd.p) : pano_jnd_load(prep_jnd.c_str(), &jnd.p),
          "load jnd config");

    std::filesystem::create_directories(prep_out);
    TilingHandle tiling;
    ManifestHandle manifest;
    check(pano_prepare(video.p, trace_ptrs.data(), trace_ptrs.size(), jnd.p, prep_n_tiles,
                       prep_table_n, &tiling.p, &manifest.p),
          "prepare");
    check(pano_tiling_save_csv(tiling.p, (prep_out + "/tiling.csv").c_str()), "save tiling");
    check(pano_manifest_save(manifest.p, (prep_out + "/manifest.pano").c_str()), "save manifest");
    if (g_verbosity >= 2)
      check(pano_manifest_dump_json(manifest.p, (prep_out + "/manifest.json").c_str()),
            "dump manifest json");
    info("tiles=%d manifest=%zu bytes (table section %zu bytes) -> %s",
         pano_tiling_num_tiles(tiling.p), pano_manifest_size_bytes(manifest.p),
         pano_manifest_table_bytes(manifest.p), prep_out.c_str());
    return 0;
  }

  if (simulate->parsed()) {
    VideoHandle video;
    check(pano_video_load(sim_video.c_str(), &video.p), "load video");
    std::vector<ViewpointHandle> vps(sim_viewpoints.size());
    std::vector<const pano_viewpoint_trace*> vp_ptrs;
    for (size_t i = 0; i < sim_viewpoints.size(); ++i) {
      check(pano_viewpoint_load(sim_viewpoints[i].c_str(), &vps[i].p),
            "load viewpoint " + sim_viewpoints[i]);
      vp_ptrs.push_back(vps[i].p);
    }
    std::vector<NetworkHandle> nets(sim_networks.size());
    std::vector<const pano_network_trace*> net_ptrs;
    for (size_t i = 0; i < sim_networks.size(); ++i) {
      check(pano_network_load(sim_networks[i].c_str(), &nets[i].p),
            "load network " + sim_networks[i]);
      net_ptrs.push_back(nets[i].p);
    }
    JndHandle jnd;
    check(sim_jnd.empty() ? pano_jnd_default(&jnd.p) : pano_jnd_load(sim_jnd.c_str(), &jnd.p),
          "load jnd config");
    ManifestHandle manifest;
    if (!sim_manifest.empty())
      check(pano_manifest_load(sim_manifest.c_str(), &manifest.p), "load manifest");

    auto schemes = parse_schemes(sim_schemes);
    pano_session_options opts;
    pano_session_options_init(&opts);
    opts.target_buffer_s = sim_target_buffer;
    opts.seed = sim_seed;

    std::filesystem::create_directories(sim_out);
    std::string results = sim_out + "/results.csv";
    check(pano_simulate_matrix(video.p, vp_ptrs.data(), vp_ptrs.size(), net_ptrs.data(),
                               net_ptrs.size(), manifest.p, jnd.p, schemes.data(),
                               schemes.size(), &opts, sim_workers, results.c_str(),
                               sim_decisions ? sim_out.c_str() : nullptr),
          "simulate");
    info("results -> %s", results.c_str());
    if (sim_compare) {
      std::string comparison = sim_out + "/comparison.csv";
      check(pano_compare(video.p, vp_ptrs.data(), vp_ptrs.size(), net_ptrs.data(),
                         net_ptrs.size(), manifest.p, jnd.p, schemes.data(), schemes.size(),
                         &opts, comparison.c_str()),
            "compare");
      info("comparison -> %s", comparison.c_str());
    }
    return 0;
  }

  if (report->parsed()) {
    std::filesystem::create_directories(rep_out);
    std::string summary = rep_out + "/summary.csv";
    check(pano_report(rep_results.c_str(), summary.c_str()), "report");
    info("summary -> %s", summary.c_str());
    return 0;
  }
  return 0;
}
