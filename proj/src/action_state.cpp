#include "action_state.hpp"

#include <algorithm>
#include <cmath>

namespace pano {

std::vector<HeadVelocitySample> head_velocity_samples(const ViewpointTrace& trace, double t0,
                                                      double t1) {
  std::vector<HeadVelocitySample> out;
  const auto& s = trace.samples;
  if (s.size() < 2) return out;
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    // step [i, i+1] overlaps [t0, t1]
    if (s[i + 1].time_s <= t0 || s[i].time_s >= t1) continue;
    double dt = s[i + 1].time_s - s[i].time_s;
    out.push_back({yaw_shorter_delta(s[i].yaw_deg, s[i + 1].yaw_deg) / dt,
                   (s[i + 1].pitch_deg - s[i].pitch_deg) / dt});
  }
  if (out.empty()) {
    // window outside the trace: hold the nearest step
    size_t i = t1 <= s.front().time_s ? 0 : s.size() - 2;
    double dt = s[i + 1].time_s - s[i].time_s;
    out.push_back({yaw_shorter_delta(s[i].yaw_deg, s[i + 1].yaw_deg) / dt,
                   (s[i + 1].pitch_deg - s[i].pitch_deg) / dt});
  }
  return out;
}

void focus_cell_at(const ViewpointTrace& trace, double t, int* row, int* col) {
  ViewpointSample vp = viewpoint_at_clamped(trace, t);
  *row = cell_row_of_pitch(vp.pitch_deg);
  *col = cell_col_of_yaw(vp.yaw_deg);
}

ActionState realized_action_state(const VideoDescriptor& video, const ViewpointTrace& trace,
                                  int chunk, int row, int col, double t0, double t1) {
  const CellFeatures& f = video.cell(chunk, row, col);

  ActionState a;
  auto vel = head_velocity_samples(trace, t0, t1);
  double sum = 0.0;
  for (const auto& v : vel)
    sum += std::sqrt((v.vel_yaw - f.vel_yaw) * (v.vel_yaw - f.vel_yaw) +
                     (v.vel_pitch - f.vel_pitch) * (v.vel_pitch - f.vel_pitch));
  a.rel_speed = vel.empty() ? 0.0 : sum / static_cast<double>(vel.size());

  // luminance relative to where the viewpoint focused 5 s ago
  int fr, fc;
  focus_cell_at(trace, std::max(t0 - kLuminanceWindowS, trace.start_s()), &fr, &fc);
  int past_chunk = std::max(
      chunk - static_cast<int>(std::ceil(kLuminanceWindowS / video.chunk_duration_s)), 0);
  a.luminance_change = std::abs(f.luminance - video.cell(past_chunk, fr, fc).luminance);

  // DoF relative to the currently focused cell
  focus_cell_at(trace, t0, &fr, &fc);
  a.dof_diff = std::abs(f.dof - video.cell(chunk, fr, fc).dof);
  return a;
}

}  // namespace pano
