#pragma once

#include <vector>

#include "jnd.hpp"
#include "trace_model.hpp"

namespace pano {

inline constexpr double kLuminanceWindowS = 5.0;

// Per-sample head angular velocity over [t0, t1] from finite differences
// (shorter-arc yaw). Returns one (vel_yaw, vel_pitch) pair per trace step
// that overlaps the window; at least one pair when the trace has >= 2 samples.
struct HeadVelocitySample {
  double vel_yaw;
  double vel_pitch;
};
std::vector<HeadVelocitySample> head_velocity_samples(const ViewpointTrace& trace, double t0,
                                                      double t1);

// Realized movement state of one unit cell over a chunk's playback window.
// rel_speed averages |head velocity - object velocity| over the window;
// luminance change compares the cell against the focus cell 5 s earlier;
// DoF difference compares against the current focus cell.
ActionState realized_action_state(const VideoDescriptor& video, const ViewpointTrace& trace,
                                  int chunk, int row, int col, double t0, double t1);

// Focus cell = unit cell containing the viewpoint at time t (clamped).
void focus_cell_at(const ViewpointTrace& trace, double t, int* row, int* col);

}  // namespace pano
