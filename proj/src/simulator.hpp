#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adaptation.hpp"
#include "jnd.hpp"
#include "manifest.hpp"
#include "trace_model.hpp"

namespace pano {

enum class Scheme {
  pano,              // manifest-driven perceptual allocation
  viewport_uniform,  // uniform-grid viewport-driven baseline
  whole_sphere,      // uniform quality over the full sphere
};

const char* scheme_name(Scheme s);
std::optional<Scheme> scheme_from_name(const std::string& name);

struct SessionConfig {
  double target_buffer_s = 2.0;
  double max_buffer_s = 10.0;
  double viewport_width_deg = 110.0;
  double viewport_height_deg = 90.0;
  double band_margin_deg = 15.0;  // viewport_uniform: ring around the viewport
  double stall_cap_s = 60.0;
  double quantum_s = 0.01;
  int mpc_horizon_chunks = 3;
  double pspnr_ceiling_db = kDefaultPspnrCeilingDb;
  uint64_t seed = 0;
};

struct ChunkRecord {
  int chunk = 0;
  double budget_bps = 0.0;     // MPC chunk bitrate r_k
  double delivered_bits = 0.0;
  std::vector<int> level;      // per scheme tile
  std::vector<double> est_ratio;  // estimated action ratio per tile (pano)
  double pspnr_viewport_db = 0.0;  // ground truth, realized viewpoint
  double pspnr_sphere_db = 0.0;
  double stall_s = 0.0;        // stall spent waiting for this chunk
  double pred_yaw = 0.0, pred_pitch = 0.0;
  double act_yaw = 0.0, act_pitch = 0.0;
  bool over_budget = false;
};

struct SessionResult {
  std::vector<ChunkRecord> chunks;
  double playback_s = 0.0;
  double stall_s = 0.0;
  double wall_s = 0.0;
  double total_bits = 0.0;
  double mean_pspnr_viewport_db = 0.0;
  double mean_pspnr_sphere_db = 0.0;
  double buffering_ratio = 0.0;
  double mean_bandwidth_bps = 0.0;
  int mos = 1;
  bool aborted = false;
};

// Table 3 map from session PSPNR to mean opinion score; dB values between
// the integer bands fall into the lower band.
int mos_from_pspnr(double pspnr_db);

// Replays one (video, viewpoint, network) triple under a scheme. The JND
// model drives the ground-truth evaluation for every scheme; pano
// additionally requires the manifest.
SessionResult run_session(const VideoDescriptor& video, const ViewpointTrace& viewpoint,
                          const NetworkTrace& network, Scheme scheme, const SessionConfig& cfg,
                          const JndModel& jnd, const Manifest* manifest);

// ---- workloads and comparison ----

struct SessionRow {
  int session_id = 0;
  Scheme scheme = Scheme::pano;
  uint64_t seed = 0;
  double target_buffer_s = 0.0;
  SessionResult result;
};

void write_results_csv(const std::vector<SessionRow>& rows, const std::string& path);

struct SchemeSummary {
  Scheme scheme;
  int sessions = 0;
  double mean_pspnr_viewport_db = 0.0;
  double mean_pspnr_sphere_db = 0.0;
  double mean_bandwidth_bps = 0.0;
  double mean_buffering_ratio = 0.0;
  double mean_mos = 0.0;
};

// Aggregates per-session rows (as written by write_results_csv).
std::vector<SchemeSummary> summarize_results_csv(const std::string& path);
void write_summary_csv(const std::vector<SchemeSummary>& summaries, const std::string& path);

struct WorkloadTriple {
  const ViewpointTrace* viewpoint;
  const NetworkTrace* network;
};

struct MatchedQualityDelta {
  Scheme scheme;
  Scheme reference;          // scheme whose PSPNR was matched
  double throughput_scale;   // link cap found by bisection
  double pspnr_db;           // scheme PSPNR at the matched point
  double reference_pspnr_db;
  double bandwidth_ratio;    // scheme bandwidth at match / reference bandwidth
};

struct ComparisonReport {
  std::vector<SchemeSummary> per_scheme;
  std::vector<MatchedQualityDelta> matched;
};

// Runs every scheme over the workload; the lowest-PSPNR scheme becomes the
// reference and every other scheme's link is bisected down until its PSPNR
// matches the reference within 0.5 dB.
ComparisonReport compare_schemes(const VideoDescriptor& video,
                                 const std::vector<WorkloadTriple>& workload,
                                 const std::vector<Scheme>& schemes, const SessionConfig& cfg,
                                 const JndModel& jnd, const Manifest* manifest);

NetworkTrace scale_network_trace(const NetworkTrace& t, double factor);

}  // namespace pano
