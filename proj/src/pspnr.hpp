#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "common.hpp"

namespace pano {

inline constexpr double kDefaultPspnrCeilingDb = 100.0;

// Gray-level image plane. Also used to carry per-pixel JND values.
struct PixelPlane {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major, width*height entries

  static PixelPlane constant(int width, int height, double value);
  size_t size() const { return values.size(); }
};

// Perceptible mean squared error: (1/S) * sum (|p - p_hat| - jnd)^2 over
// pixels whose absolute error reaches the local JND.
double pmse(const PixelPlane& original, const PixelPlane& distorted, const PixelPlane& jnd);

// 20*log10(255/sqrt(m)), clamped at the ceiling; m == 0 maps to the ceiling.
double pspnr_from_pmse(double m, double ceiling_db = kDefaultPspnrCeilingDb);

// Constant-plane specialization for a homogeneous tile with representative
// absolute error e, content JND c and action ratio a: max(e - c*a, 0)^2.
double tile_pmse(double mean_abs_error, double content_jnd, double action_ratio);

struct TileArea {
  double area;
  double pmse;
};

// Area-weighted mean PMSE over tiles, then converted to dB.
double chunk_pspnr(const std::vector<TileArea>& tiles,
                   double ceiling_db = kDefaultPspnrCeilingDb);

// Evaluates one frame in every `stride`, replicates its PMSE over the
// following stride-1 frames, and aggregates by mean PMSE. pmse_at is only
// invoked for sampled frame indices.
double sampled_sequence_pspnr(size_t frame_count, int stride,
                              const std::function<double(size_t)>& pmse_at,
                              double ceiling_db = kDefaultPspnrCeilingDb);

}  // namespace pano
