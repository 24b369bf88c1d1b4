#include <algorithm>
#include <cmath>

#include "trace_model.hpp"

namespace pano {

void SceneSpec::validate() const {
  if (archetype != "tracked-object" && archetype != "night-scene" && archetype != "mixed-dof")
    throw InvalidArgError("unknown scene archetype '" + archetype + "'");
  if (!(duration_s >= 0)) throw InvalidArgError("duration_s must be >= 0");
  if (!(chunk_duration_s > 0)) throw InvalidArgError("chunk_duration_s must be > 0");
  if (quality_qp.size() < 2) throw InvalidArgError("need at least two quality levels");
  if (!(base_rate_bps > 0)) throw InvalidArgError("base_rate_bps must be > 0");
  if (!(base_error > 0)) throw InvalidArgError("base_error must be > 0");
  if (!(viewpoint_period_s > 0)) throw InvalidArgError("viewpoint_period_s must be > 0");
  if (!(network_mean_bps > 0)) throw InvalidArgError("network_mean_bps must be > 0");
  if (!(network_step_s > 0)) throw InvalidArgError("network_step_s must be > 0");
  if (object_rows < 1 || object_cols < 1) throw InvalidArgError("object footprint must be >= 1x1");
  if (track_fraction < 0 || track_fraction > 1)
    throw InvalidArgError("track_fraction must be in [0,1]");
}

SceneSpec scene_spec_for(const std::string& archetype) {
  SceneSpec s;
  s.archetype = archetype;
  if (archetype == "night-scene") {
    s.object_speed_yaw = 0.0;
    s.track_fraction = 0.0;
  } else if (archetype == "mixed-dof") {
    s.object_speed_yaw = 0.0;
    s.track_fraction = 0.0;
  }
  s.validate();
  return s;
}

double default_error_law(double base_error, int qp) {
  return base_error * std::exp2((qp - 22) / 6.0);
}

double default_rate_law(double base_rate_bps, int qp) {
  return base_rate_bps * std::exp2(-(qp - 22) / 6.0);
}

namespace {

struct CellBase {
  double luminance;
  double dof;
  double texture;
  double e0_scale;
  double r0_scale;
};

// Object center path for the tracked-object scene; the footprint's top-left
// cell starts at the equator near yaw 0.
void object_cell_span(const SceneSpec& spec, double t, int* row0, int* col0) {
  double yaw = wrap_yaw(spec.object_speed_yaw * t);
  double pitch = std::clamp(spec.object_speed_pitch * t, -60.0, 60.0);
  *row0 = std::clamp(cell_row_of_pitch(pitch) - spec.object_rows / 2, 0,
                     kGridRows - spec.object_rows);
  *col0 = cell_col_of_yaw(yaw);
}

}  // namespace

VideoDescriptor generate_synthetic_video(const SceneSpec& spec, uint64_t seed) {
  spec.validate();
  Rng rng(seed ^ 0x7669646eull);  // independent stream per artifact kind

  VideoDescriptor v;
  v.chunk_duration_s = spec.chunk_duration_s;
  v.num_chunks = static_cast<int>(std::ceil(spec.duration_s / spec.chunk_duration_s));
  v.quality_qp = spec.quality_qp;

  // static per-cell background
  std::vector<CellBase> base(static_cast<size_t>(v.cells()));
  for (int r = 0; r < v.rows; ++r) {
    for (int c = 0; c < v.cols; ++c) {
      CellBase& b = base[static_cast<size_t>(r) * v.cols + c];
      if (spec.archetype == "night-scene") {
        bool bright = rng.uniform() < 0.12;
        b.luminance = bright ? rng.uniform(190, 240) : rng.uniform(8, 30);
        b.texture = bright ? rng.uniform(10, 30) : rng.uniform(2, 10);
        b.dof = rng.uniform(0.5, 1.6);
      } else if (spec.archetype == "mixed-dof") {
        b.luminance = rng.uniform(95, 145);
        b.texture = rng.uniform(6, 24);
        b.dof = r < 4 ? rng.uniform(1.7, 2.3) : (r < 8 ? rng.uniform(0.7, 1.3)
                                                       : rng.uniform(0.1, 0.4));
      } else {  // tracked-object background
        b.luminance = rng.uniform(95, 145);
        b.texture = rng.uniform(6, 24);
        b.dof = rng.uniform(1.1, 1.9);
      }
      b.e0_scale = rng.uniform(0.65, 1.15);
      b.r0_scale = rng.uniform(0.65, 1.15);
    }
  }

  size_t n_cells = static_cast<size_t>(v.num_chunks) * v.cells();
  v.features.assign(n_cells, CellFeatures{});
  v.rate_bps.assign(n_cells * v.levels(), 0.0);
  v.abs_error.assign(n_cells * v.levels(), 0.0);

  bool has_object = spec.archetype == "tracked-object";
  for (int k = 0; k < v.num_chunks; ++k) {
    int obj_row0 = -1, obj_col0 = -1;
    if (has_object)
      object_cell_span(spec, (k + 0.5) * v.chunk_duration_s, &obj_row0, &obj_col0);
    for (int r = 0; r < v.rows; ++r) {
      for (int c = 0; c < v.cols; ++c) {
        const CellBase& b = base[static_cast<size_t>(r) * v.cols + c];
        CellFeatures f;
        double e0 = spec.base_error * b.e0_scale;
        double r0 = spec.base_rate_bps * b.r0_scale;
        bool in_object = false;
        if (has_object) {
          // footprint wraps in yaw
          int dc = (c - obj_col0 + kGridCols) % kGridCols;
          in_object = r >= obj_row0 && r < obj_row0 + spec.object_rows && dc < spec.object_cols;
        }
        if (in_object) {
          f.vel_yaw = spec.object_speed_yaw;
          f.vel_pitch = spec.object_speed_pitch;
          f.luminance = 205.0;
          f.dof = 0.4;
          f.texture = 4.0;
          e0 = spec.base_error * 2.2;
          r0 = spec.base_rate_bps * 2.0;
        } else {
          f.luminance = std::clamp(b.luminance, 0.0, 255.0);
          f.dof = b.dof;
          f.texture = std::clamp(b.texture, 0.0, 255.0);
        }
        size_t idx = v.cell_index(k, r, c);
        v.features[idx] = f;
        for (int q = 0; q < v.levels(); ++q) {
          v.rate_bps[idx * v.levels() + q] = default_rate_law(r0, v.quality_qp[q]);
          v.abs_error[idx * v.levels() + q] =
              std::min(default_error_law(e0, v.quality_qp[q]), 255.0);
        }
      }
    }
  }
  v.validate();
  return v;
}

ViewpointTrace generate_viewpoint_trace(const SceneSpec& spec, uint64_t seed) {
  spec.validate();
  Rng rng(seed ^ 0x76696577ull);

  ViewpointTrace t;
  t.sample_period_s = spec.viewpoint_period_s;
  double duration = spec.duration_s + 10.0;  // slack past the video end
  size_t n = static_cast<size_t>(std::floor(duration / t.sample_period_s)) + 1;

  double yaw = 0.0, pitch = 0.0;
  bool tracking = spec.track_fraction > 0;
  double segment_end = 0.0;
  double target_yaw = 0.0, target_pitch = 0.0;
  const double max_free_speed = 45.0;  // deg/s toward a fixation target

  for (size_t i = 0; i < n; ++i) {
    double time = static_cast<double>(i) * t.sample_period_s;
    if (time >= segment_end) {
      tracking = rng.uniform() < spec.track_fraction;
      segment_end = time + rng.uniform(2.0, 4.0);
      if (!tracking) {
        target_yaw = rng.uniform(0.0, 360.0);
        target_pitch = rng.uniform(-35.0, 35.0);
      }
    }
    if (tracking) {
      // follow the object with a small tracking error
      double obj_yaw = wrap_yaw(spec.object_speed_yaw * time);
      double obj_pitch = std::clamp(spec.object_speed_pitch * time, -60.0, 60.0);
      yaw = wrap_yaw(obj_yaw + 1.5 * std::sin(time * 1.3));
      pitch = std::clamp(obj_pitch + 1.0 * std::sin(time * 0.9), -90.0, 90.0);
    } else {
      double step = max_free_speed * t.sample_period_s;
      double dy = yaw_shorter_delta(yaw, target_yaw);
      double dp = target_pitch - pitch;
      double dist = std::sqrt(dy * dy + dp * dp);
      if (dist > step && dist > 0) {
        yaw = wrap_yaw(yaw + dy / dist * step);
        pitch = std::clamp(pitch + dp / dist * step, -90.0, 90.0);
      } else {
        yaw = target_yaw;
        pitch = target_pitch;
      }
    }
    t.samples.push_back({time, yaw, pitch});
  }
  t.validate();
  return t;
}

NetworkTrace generate_network_trace(const SceneSpec& spec, uint64_t seed) {
  spec.validate();
  Rng rng(seed ^ 0x6e657477ull);
  NetworkTrace t;
  double duration = spec.duration_s + 120.0;  // slack for stalls
  for (double time = 0.0; time <= duration; time += spec.network_step_s)
    t.samples.push_back({time, spec.network_mean_bps * rng.uniform(0.7, 1.3)});
  t.validate();
  return t;
}

}  // namespace pano
