#include "trace_model.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include <json.hpp>

namespace pano {

using nlohmann::json;

// ---- validation ----

void VideoDescriptor::validate() const {
  if (chunk_duration_s <= 0) throw InvariantError("chunk_duration_s must be > 0");
  if (num_chunks < 0) throw InvariantError("num_chunks must be >= 0");
  if (rows != kGridRows || cols != kGridCols)
    throw InvariantError(strf("unit grid must be %dx%d, got %dx%d", kGridRows, kGridCols, rows, cols));
  if (quality_qp.size() < 2) throw InvariantError("need at least two quality levels");
  for (size_t i = 1; i < quality_qp.size(); ++i)
    if (quality_qp[i] <= quality_qp[i - 1])
      throw InvariantError("quality_qp must be strictly increasing");
  size_t n_cells = static_cast<size_t>(num_chunks) * cells();
  if (features.size() != n_cells)
    throw InvariantError(strf("expected %zu cell records, got %zu", n_cells, features.size()));
  if (rate_bps.size() != n_cells * levels() || abs_error.size() != n_cells * levels())
    throw InvariantError("ladder arrays do not match chunk/cell/level counts");

  for (int k = 0; k < num_chunks; ++k) {
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const CellFeatures& f = cell(k, r, c);
        auto where = [&](const char* field) {
          return strf("chunk %d tile (%d,%d) field %s", k, r, c, field);
        };
        if (f.luminance < 0 || f.luminance > 255)
          throw InvariantError(where("luminance") + strf(": %g out of [0,255]", f.luminance));
        if (f.dof < 0) throw InvariantError(where("dof") + strf(": %g negative", f.dof));
        if (f.texture < 0 || f.texture > 255)
          throw InvariantError(where("texture") + strf(": %g out of [0,255]", f.texture));
        for (int q = 0; q < levels(); ++q) {
          double R = rate(k, r, c, q);
          double e = error(k, r, c, q);
          if (!(R > 0))
            throw InvariantError(where(strf("R_%d", quality_qp[q]).c_str()) +
                                 strf(": %g must be > 0", R));
          if (e < 0 || e > 255)
            throw InvariantError(where(strf("e_%d", quality_qp[q]).c_str()) +
                                 strf(": %g out of [0,255]", e));
          if (q > 0) {
            if (!(R < rate(k, r, c, q - 1)))
              throw InvariantError(where(strf("R_%d", quality_qp[q]).c_str()) +
                                   ": bitrate must strictly decrease with QP");
            if (!(e > error(k, r, c, q - 1)))
              throw InvariantError(where(strf("e_%d", quality_qp[q]).c_str()) +
                                   ": error must strictly increase with QP");
          }
        }
      }
    }
  }
}

void ViewpointTrace::validate() const {
  if (samples.size() < 2) throw InvariantError("viewpoint trace needs at least 2 samples");
  if (!(sample_period_s > 0)) throw InvariantError("sample_period_s must be > 0");
  double tol = 1e-6 * std::max(1.0, sample_period_s);
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.yaw_deg < 0 || s.yaw_deg >= 360)
      throw InvariantError(strf("sample %zu: yaw %g out of [0,360)", i, s.yaw_deg));
    if (s.pitch_deg < -90 || s.pitch_deg > 90)
      throw InvariantError(strf("sample %zu: pitch %g out of [-90,90]", i, s.pitch_deg));
    if (i > 0) {
      double dt = s.time_s - samples[i - 1].time_s;
      if (!(dt > 0)) throw InvariantError(strf("sample %zu: timestamps must strictly increase", i));
      if (std::abs(dt - sample_period_s) > tol)
        throw InvariantError(strf("sample %zu: spacing %g differs from period %g", i, dt,
                                  sample_period_s));
    }
  }
}

void NetworkTrace::validate() const {
  if (samples.empty()) throw InvariantError("network trace is empty");
  for (size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].throughput_bps > 0))
      throw InvariantError(strf("sample %zu: throughput must be > 0", i));
    if (i > 0 && !(samples[i].time_s > samples[i - 1].time_s))
      throw InvariantError(strf("sample %zu: timestamps must strictly increase", i));
  }
}

double NetworkTrace::throughput_at(double t) const {
  if (samples.empty()) throw InvalidArgError("empty network trace");
  if (t <= samples.front().time_s) return samples.front().throughput_bps;
  // last sample at or before t
  auto it = std::upper_bound(samples.begin(), samples.end(), t,
                             [](double v, const NetworkSample& s) { return v < s.time_s; });
  return std::prev(it)->throughput_bps;
}

void Viewport::validate() const {
  if (!(width_deg > 0 && width_deg <= 360))
    throw InvariantError(strf("viewport width %g out of (0,360]", width_deg));
  if (!(height_deg > 0 && height_deg <= 180))
    throw InvariantError(strf("viewport height %g out of (0,180]", height_deg));
}

// ---- video descriptor I/O ----

static std::string sidecar_path(const std::string& path) { return path + ".json"; }

void save_video_descriptor(const VideoDescriptor& v, const std::string& path) {
  v.validate();
  std::ostringstream out;
  out << "chunk,row,col,vel_yaw,vel_pitch,luminance,dof,texture";
  for (int qp : v.quality_qp) out << ",R_" << qp;
  for (int qp : v.quality_qp) out << ",e_" << qp;
  out << "\n";
  for (int k = 0; k < v.num_chunks; ++k) {
    for (int r = 0; r < v.rows; ++r) {
      for (int c = 0; c < v.cols; ++c) {
        const CellFeatures& f = v.cell(k, r, c);
        out << k << "," << r << "," << c << "," << format_double(f.vel_yaw) << ","
            << format_double(f.vel_pitch) << "," << format_double(f.luminance) << ","
            << format_double(f.dof) << "," << format_double(f.texture);
        for (int q = 0; q < v.levels(); ++q) out << "," << format_double(v.rate(k, r, c, q));
        for (int q = 0; q < v.levels(); ++q) out << "," << format_double(v.error(k, r, c, q));
        out << "\n";
      }
    }
  }
  write_text_file(path, out.str());

  json meta;
  meta["chunk_duration_s"] = v.chunk_duration_s;
  meta["num_chunks"] = v.num_chunks;
  meta["rows"] = v.rows;
  meta["cols"] = v.cols;
  meta["quality_levels"] = v.quality_qp;
  write_text_file(sidecar_path(path), meta.dump(2) + "\n");
}

VideoDescriptor load_video_descriptor(const std::string& path) {
  CsvTable t = read_csv(path);
  VideoDescriptor v;

  // scalar metadata from the sidecar when present
  std::string side = sidecar_path(path);
  if (std::filesystem::exists(side)) {
    json meta;
    try {
      meta = json::parse(read_text_file(side));
    } catch (const json::exception& e) {
      throw ParseError(strf("%s: %s", side.c_str(), e.what()));
    }
    if (meta.contains("chunk_duration_s")) v.chunk_duration_s = meta["chunk_duration_s"];
    if (meta.contains("quality_levels"))
      v.quality_qp = meta["quality_levels"].get<std::vector<int>>();
  } else {
    // infer the QP ladder from R_* columns
    std::vector<int> qps;
    for (const auto& h : t.header)
      if (h.rfind("R_", 0) == 0) qps.push_back(static_cast<int>(parse_long(h.substr(2), path)));
    if (!qps.empty()) v.quality_qp = qps;
  }

  int c_chunk = t.require_column("chunk", path);
  int c_row = t.require_column("row", path);
  int c_col = t.require_column("col", path);
  int c_vy = t.require_column("vel_yaw", path);
  int c_vp = t.require_column("vel_pitch", path);
  int c_lum = t.require_column("luminance", path);
  int c_dof = t.require_column("dof", path);
  int c_tex = t.require_column("texture", path);
  std::vector<int> c_rate, c_err;
  for (int qp : v.quality_qp) {
    c_rate.push_back(t.require_column(strf("R_%d", qp), path));
    c_err.push_back(t.require_column(strf("e_%d", qp), path));
  }

  int max_chunk = -1;
  for (const auto& row : t.rows) {
    max_chunk = std::max(max_chunk, static_cast<int>(parse_long(row[c_chunk], path)));
  }
  v.num_chunks = max_chunk + 1;
  size_t n_cells = static_cast<size_t>(v.num_chunks) * v.cells();
  v.features.assign(n_cells, CellFeatures{});
  v.rate_bps.assign(n_cells * v.levels(), 0.0);
  v.abs_error.assign(n_cells * v.levels(), 0.0);
  std::vector<char> seen(n_cells, 0);

  for (size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    std::string ctx = strf("%s:%zu", path.c_str(), t.line_numbers[i]);
    int k = static_cast<int>(parse_long(row[c_chunk], ctx));
    int r = static_cast<int>(parse_long(row[c_row], ctx));
    int c = static_cast<int>(parse_long(row[c_col], ctx));
    if (k < 0 || r < 0 || r >= v.rows || c < 0 || c >= v.cols)
      throw ParseError(ctx + strf(": cell (%d,%d,%d) out of range", k, r, c));
    size_t idx = v.cell_index(k, r, c);
    if (seen[idx]) throw ParseError(ctx + strf(": duplicate record for chunk %d tile (%d,%d)", k, r, c));
    seen[idx] = 1;
    CellFeatures f;
    f.vel_yaw = parse_double(row[c_vy], ctx);
    f.vel_pitch = parse_double(row[c_vp], ctx);
    f.luminance = parse_double(row[c_lum], ctx);
    f.dof = parse_double(row[c_dof], ctx);
    f.texture = parse_double(row[c_tex], ctx);
    v.features[idx] = f;
    for (int q = 0; q < v.levels(); ++q) {
      v.rate_bps[idx * v.levels() + q] = parse_double(row[c_rate[q]], ctx);
      v.abs_error[idx * v.levels() + q] = parse_double(row[c_err[q]], ctx);
    }
  }
  for (int k = 0; k < v.num_chunks; ++k)
    for (int r = 0; r < v.rows; ++r)
      for (int c = 0; c < v.cols; ++c)
        if (!seen[v.cell_index(k, r, c)])
          throw InvariantError(strf("%s: chunk %d is missing tile (%d,%d)", path.c_str(), k, r, c));

  v.validate();
  return v;
}

// ---- trace I/O ----

void save_viewpoint_trace(const ViewpointTrace& t, const std::string& path) {
  t.validate();
  std::ostringstream out;
  out << "time_s,yaw_deg,pitch_deg\n";
  for (const auto& s : t.samples)
    out << format_double(s.time_s) << "," << format_double(s.yaw_deg) << ","
        << format_double(s.pitch_deg) << "\n";
  write_text_file(path, out.str());
  json meta;
  meta["sample_period_s"] = t.sample_period_s;
  write_text_file(sidecar_path(path), meta.dump(2) + "\n");
}

ViewpointTrace load_viewpoint_trace(const std::string& path) {
  CsvTable csv = read_csv(path);
  int c_t = csv.require_column("time_s", path);
  int c_y = csv.require_column("yaw_deg", path);
  int c_p = csv.require_column("pitch_deg", path);
  ViewpointTrace t;
  for (size_t i = 0; i < csv.rows.size(); ++i) {
    std::string ctx = strf("%s:%zu", path.c_str(), csv.line_numbers[i]);
    ViewpointSample s;
    s.time_s = parse_double(csv.rows[i][c_t], ctx);
    s.yaw_deg = wrap_yaw(parse_double(csv.rows[i][c_y], ctx));
    s.pitch_deg = parse_double(csv.rows[i][c_p], ctx);
    t.samples.push_back(s);
  }
  std::string side = sidecar_path(path);
  if (std::filesystem::exists(side)) {
    json meta;
    try {
      meta = json::parse(read_text_file(side));
    } catch (const json::exception& e) {
      throw ParseError(strf("%s: %s", side.c_str(), e.what()));
    }
    if (meta.contains("sample_period_s")) t.sample_period_s = meta["sample_period_s"];
  } else if (t.samples.size() >= 2) {
    t.sample_period_s = t.samples[1].time_s - t.samples[0].time_s;
  }
  t.validate();
  return t;
}

void save_network_trace(const NetworkTrace& t, const std::string& path) {
  t.validate();
  std::ostringstream out;
  out << "time_s,throughput_bps\n";
  for (const auto& s : t.samples)
    out << format_double(s.time_s) << "," << format_double(s.throughput_bps) << "\n";
  write_text_file(path, out.str());
}

NetworkTrace load_network_trace(const std::string& path) {
  CsvTable csv = read_csv(path);
  int c_t = csv.require_column("time_s", path);
  int c_b = csv.require_column("throughput_bps", path);
  NetworkTrace t;
  for (size_t i = 0; i < csv.rows.size(); ++i) {
    std::string ctx = strf("%s:%zu", path.c_str(), csv.line_numbers[i]);
    t.samples.push_back({parse_double(csv.rows[i][c_t], ctx), parse_double(csv.rows[i][c_b], ctx)});
  }
  t.validate();
  return t;
}

// ---- geometry ----

ViewpointSample viewpoint_at(const ViewpointTrace& trace, double t) {
  if (trace.samples.empty()) throw InvalidArgError("empty viewpoint trace");
  if (t < trace.start_s() || t > trace.end_s())
    throw InvalidArgError(strf("time %g outside trace span [%g, %g]", t, trace.start_s(),
                               trace.end_s()));
  return viewpoint_at_clamped(trace, t);
}

ViewpointSample viewpoint_at_clamped(const ViewpointTrace& trace, double t) {
  const auto& s = trace.samples;
  if (s.empty()) throw InvalidArgError("empty viewpoint trace");
  if (t <= s.front().time_s) return {t, s.front().yaw_deg, s.front().pitch_deg};
  if (t >= s.back().time_s) return {t, s.back().yaw_deg, s.back().pitch_deg};
  auto it = std::upper_bound(s.begin(), s.end(), t,
                             [](double v, const ViewpointSample& x) { return v < x.time_s; });
  const ViewpointSample& b = *it;
  const ViewpointSample& a = *std::prev(it);
  if (t == a.time_s) return a;
  double u = (t - a.time_s) / (b.time_s - a.time_s);
  ViewpointSample out;
  out.time_s = t;
  out.yaw_deg = wrap_yaw(a.yaw_deg + u * yaw_shorter_delta(a.yaw_deg, b.yaw_deg));
  out.pitch_deg = a.pitch_deg + u * (b.pitch_deg - a.pitch_deg);
  return out;
}

int cell_row_of_pitch(double pitch_deg) {
  double p = std::clamp(pitch_deg, -90.0, 90.0);
  int row = static_cast<int>((90.0 - p) / kCellPitchDeg);
  return std::clamp(row, 0, kGridRows - 1);
}

int cell_col_of_yaw(double yaw_deg) {
  int col = static_cast<int>(wrap_yaw(yaw_deg) / kCellYawDeg);
  return std::clamp(col, 0, kGridCols - 1);
}

namespace {

// Strict overlap of cyclic yaw intervals (start, length); full-circle
// intervals overlap everything.
bool yaw_intervals_overlap(double start_a, double len_a, double start_b, double len_b) {
  if (len_a >= 360.0 || len_b >= 360.0) return true;
  double d_ab = wrap_yaw(start_b - start_a);
  double d_ba = wrap_yaw(start_a - start_b);
  return d_ab < len_a || d_ba < len_b;
}

}  // namespace

bool rect_intersects_viewport(const Viewport& vp, const GridRect& rect) {
  // pitch: rows count down from +90
  double rect_pitch_hi = 90.0 - rect.row0 * kCellPitchDeg;
  double rect_pitch_lo = rect_pitch_hi - rect.rows * kCellPitchDeg;
  double vp_pitch_hi = std::min(90.0, vp.pitch_deg + vp.height_deg / 2.0);
  double vp_pitch_lo = std::max(-90.0, vp.pitch_deg - vp.height_deg / 2.0);
  if (!(std::max(rect_pitch_lo, vp_pitch_lo) < std::min(rect_pitch_hi, vp_pitch_hi)))
    return false;

  double rect_yaw_start = rect.col0 * kCellYawDeg;
  double rect_yaw_len = rect.cols * kCellYawDeg;
  double vp_yaw_start = wrap_yaw(vp.yaw_deg - vp.width_deg / 2.0);
  return yaw_intervals_overlap(rect_yaw_start, rect_yaw_len, vp_yaw_start, vp.width_deg);
}

std::vector<int> tiles_in_viewport(const Viewport& vp, const std::vector<GridRect>& tiles) {
  vp.validate();
  std::vector<int> out;
  for (size_t i = 0; i < tiles.size(); ++i)
    if (rect_intersects_viewport(vp, tiles[i])) out.push_back(static_cast<int>(i));
  return out;
}

}  // namespace pano
