#include "pspnr.hpp"

#include <cmath>

namespace pano {

PixelPlane PixelPlane::constant(int width, int height, double value) {
  PixelPlane p;
  p.width = width;
  p.height = height;
  p.values.assign(static_cast<size_t>(width) * height, value);
  return p;
}

double pmse(const PixelPlane& original, const PixelPlane& distorted, const PixelPlane& jnd) {
  if (original.width != distorted.width || original.height != distorted.height ||
      original.width != jnd.width || original.height != jnd.height)
    throw InvalidArgError(strf("plane dimension mismatch: %dx%d vs %dx%d vs %dx%d",
                               original.width, original.height, distorted.width,
                               distorted.height, jnd.width, jnd.height));
  size_t s = original.size();
  if (s == 0) throw InvalidArgError("empty pixel plane");
  double sum = 0.0;
  for (size_t i = 0; i < s; ++i) {
    double err = std::abs(original.values[i] - distorted.values[i]);
    if (err >= jnd.values[i]) {
      double d = err - jnd.values[i];
      sum += d * d;
    }
  }
  return sum / static_cast<double>(s);
}

double pspnr_from_pmse(double m, double ceiling_db) {
  if (m < 0) throw InvalidArgError("pmse must be >= 0");
  if (m == 0.0) return ceiling_db;
  double db = 20.0 * std::log10(255.0 / std::sqrt(m));
  return std::min(db, ceiling_db);
}

double tile_pmse(double mean_abs_error, double content_jnd, double action_ratio) {
  if (mean_abs_error < 0) throw InvalidArgError("mean abs error must be >= 0");
  if (!(content_jnd > 0)) throw InvalidArgError("content JND must be > 0");
  if (action_ratio < 1.0) throw InvalidArgError("action ratio must be >= 1");
  double d = mean_abs_error - content_jnd * action_ratio;
  return d > 0 ? d * d : 0.0;
}

double chunk_pspnr(const std::vector<TileArea>& tiles, double ceiling_db) {
  if (tiles.empty()) throw InvalidArgError("chunk_pspnr: empty tile list");
  double num = 0.0, den = 0.0;
  for (const auto& t : tiles) {
    if (!(t.area > 0)) throw InvalidArgError("chunk_pspnr: tile area must be > 0");
    num += t.area * t.pmse;
    den += t.area;
  }
  return pspnr_from_pmse(num / den, ceiling_db);
}

double sampled_sequence_pspnr(size_t frame_count, int stride,
                              const std::function<double(size_t)>& pmse_at,
                              double ceiling_db) {
  if (stride < 1) throw InvalidArgError("stride must be >= 1");
  if (frame_count == 0) return ceiling_db;
  double sum = 0.0;
  for (size_t i = 0; i < frame_count; i += static_cast<size_t>(stride)) {
    size_t replicated = std::min(frame_count - i, static_cast<size_t>(stride));
    sum += pmse_at(i) * static_cast<double>(replicated);
  }
  return pspnr_from_pmse(sum / static_cast<double>(frame_count), ceiling_db);
}

}  // namespace pano
