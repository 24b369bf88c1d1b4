#include "manifest.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <sstream>

#include <json.hpp>

namespace pano {

void Manifest::object_velocity(int chunk, int tile, double* vel_yaw, double* vel_pitch) const {
  size_t base = (static_cast<size_t>(chunk) * tiles.size() + tile) *
                static_cast<size_t>(traj_samples_per_chunk) * 2;
  *vel_yaw = traj_vel[base];
  *vel_pitch = traj_vel[base + 1];
}

// ---- raw table ----

RawLookupTable build_raw_table(const VideoDescriptor& video, const Tiling& tiling,
                               const JndModel& jnd, int n) {
  if (n < 2) throw InvalidArgError("lookup table needs n >= 2 representative values");
  RawLookupTable raw;
  raw.n = n;
  raw.chunks = video.num_chunks;
  raw.tiles = static_cast<int>(tiling.rects.size());
  raw.levels = video.levels();

  auto fill_reps = [n](std::vector<double>* reps, double max) {
    reps->resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) (*reps)[i] = max * i / (n - 1);
  };
  fill_reps(&raw.rep_v, raw.v_max);
  fill_reps(&raw.rep_l, raw.l_max);
  fill_reps(&raw.rep_d, raw.d_max);

  raw.ratio.resize(raw.cell_count());
  for (int iv = 0; iv < n; ++iv)
    for (int il = 0; il < n; ++il)
      for (int id = 0; id < n; ++id)
        raw.ratio[(static_cast<size_t>(iv) * n + il) * n + id] =
            jnd.action_ratio({raw.rep_v[iv], raw.rep_l[il], raw.rep_d[id]});

  raw.pspnr_db.resize(static_cast<size_t>(raw.chunks) * raw.tiles * raw.levels *
                      raw.cell_count());

  std::vector<double> cell_e, cell_c;
  for (int k = 0; k < raw.chunks; ++k) {
    for (int t = 0; t < raw.tiles; ++t) {
      const GridRect& g = tiling.rects[t];
      for (int q = 0; q < raw.levels; ++q) {
        cell_e.clear();
        cell_c.clear();
        for (int r = g.row0; r < g.row0 + g.rows; ++r) {
          for (int c = g.col0; c < g.col0 + g.cols; ++c) {
            const CellFeatures& f = video.cell(k, r, c);
            cell_e.push_back(video.error(k, r, c, q));
            cell_c.push_back(jnd.content_jnd(f.luminance, f.texture));
          }
        }
        for (size_t cell = 0; cell < raw.cell_count(); ++cell) {
          double A = raw.ratio[cell];
          double m = 0.0;
          for (size_t i = 0; i < cell_e.size(); ++i) m += tile_pmse(cell_e[i], cell_c[i], A);
          m /= static_cast<double>(cell_e.size());
          raw.pspnr_db[(((static_cast<size_t>(k) * raw.tiles + t) * raw.levels + q)) *
                           raw.cell_count() +
                       cell] = pspnr_from_pmse(m, raw.ceiling_db);
        }
      }
    }
  }
  return raw;
}

// ---- compression ----

namespace {

struct FitResult {
  double a;
  double b;
};

// Least squares of log P on log A over deduplicated (A, P) points.
FitResult power_fit(std::vector<std::pair<double, double>> points) {
  std::sort(points.begin(), points.end());
  std::vector<std::pair<double, double>> dedup;
  for (size_t i = 0; i < points.size();) {
    size_t j = i;
    double sum = 0.0;
    while (j < points.size() && points[j].first == points[i].first) sum += points[j++].second;
    dedup.emplace_back(points[i].first, sum / static_cast<double>(j - i));
    i = j;
  }
  if (dedup.size() == 1) return {dedup[0].second, 0.0};

  double mx = 0.0, my = 0.0;
  for (const auto& [A, P] : dedup) {
    mx += std::log(A);
    my += std::log(std::max(P, 1e-9));
  }
  mx /= static_cast<double>(dedup.size());
  my /= static_cast<double>(dedup.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [A, P] : dedup) {
    double dx = std::log(A) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(std::max(P, 1e-9)) - my);
  }
  double b = sxx > 0 ? sxy / sxx : 0.0;
  double a = std::exp(my - b * mx);
  return {a, b};
}

}  // namespace

CompressedLookupTable compress_table(const RawLookupTable& raw) {
  CompressedLookupTable out;
  out.chunks = raw.chunks;
  out.tiles = raw.tiles;
  out.levels = raw.levels;
  out.ceiling_db = raw.ceiling_db;
  out.a_min_fit = 1.0;
  out.a_max_fit = 1.0;
  for (double A : raw.ratio) out.a_max_fit = std::max(out.a_max_fit, A);

  size_t entries = static_cast<size_t>(raw.chunks) * raw.tiles * raw.levels;
  out.a_q.resize(entries);
  out.b_q.resize(entries);
  out.rmse_q.resize(entries);

  std::vector<std::pair<double, double>> points(raw.cell_count());
  for (size_t e = 0; e < entries; ++e) {
    for (size_t cell = 0; cell < raw.cell_count(); ++cell)
      points[cell] = {raw.ratio[cell], raw.pspnr_db[e * raw.cell_count() + cell]};
    FitResult fit = power_fit(points);

    long aq = std::lround(fit.a / CompressedLookupTable::kAStep);
    out.a_q[e] = static_cast<uint16_t>(std::clamp(aq, 1l, 65535l));
    long bq = std::lround(fit.b / CompressedLookupTable::kBStep);
    out.b_q[e] = static_cast<int16_t>(std::clamp(bq, -32768l, 32767l));

    // RMSE of the quantized, ceiling-clamped evaluation against the raw cells
    double a = out.a_q[e] * CompressedLookupTable::kAStep;
    double b = out.b_q[e] * CompressedLookupTable::kBStep;
    double se = 0.0;
    for (size_t cell = 0; cell < raw.cell_count(); ++cell) {
      double A = std::clamp(raw.ratio[cell], out.a_min_fit, out.a_max_fit);
      double est = std::min(a * std::pow(A, b), out.ceiling_db);
      double d = est - raw.pspnr_db[e * raw.cell_count() + cell];
      se += d * d;
    }
    double rmse = std::sqrt(se / static_cast<double>(raw.cell_count()));
    long rq = std::lround(rmse / CompressedLookupTable::kRmseStep);
    out.rmse_q[e] = static_cast<uint16_t>(std::clamp(rq, 0l, 65535l));
  }
  return out;
}

double eval_compressed(const CompressedLookupTable& t, int chunk, int tile, int level, double A) {
  if (chunk < 0 || chunk >= t.chunks || tile < 0 || tile >= t.tiles || level < 0 ||
      level >= t.levels)
    throw InvalidArgError(strf("unknown lookup entry (chunk %d, tile %d, level %d)", chunk, tile,
                               level));
  double clamped = std::clamp(A, t.a_min_fit, t.a_max_fit);
  return std::min(t.a(chunk, tile, level) * std::pow(clamped, t.b(chunk, tile, level)),
                  t.ceiling_db);
}

// ---- manifest build ----

Manifest build_manifest(const VideoDescriptor& video, const Tiling& tiling, const JndModel& jnd,
                        int n) {
  Manifest m;
  m.chunk_duration_s = video.chunk_duration_s;
  m.num_chunks = video.num_chunks;
  m.quality_qp = video.quality_qp;
  m.tiles = tiling.rects;
  m.jnd = jnd;
  m.traj_samples_per_chunk = std::max(1, static_cast<int>(std::ceil(video.chunk_duration_s * 3.0)));

  size_t n_tiles = m.tiles.size();
  m.tile_luminance.resize(static_cast<size_t>(m.num_chunks) * n_tiles);
  m.tile_dof_q.resize(m.tile_luminance.size());
  m.traj_vel.resize(m.tile_luminance.size() * static_cast<size_t>(m.traj_samples_per_chunk) * 2);
  m.tile_rate_bps.assign(n_tiles * video.levels(), 0.0f);

  for (int k = 0; k < m.num_chunks; ++k) {
    for (size_t t = 0; t < n_tiles; ++t) {
      const GridRect& g = m.tiles[t];
      double lum = 0.0, dof = 0.0;
      double dom_vy = 0.0, dom_vp = 0.0, dom_mag = -1.0;
      for (int r = g.row0; r < g.row0 + g.rows; ++r) {
        for (int c = g.col0; c < g.col0 + g.cols; ++c) {
          const CellFeatures& f = video.cell(k, r, c);
          lum += f.luminance;
          dof += f.dof;
          double mag = f.vel_yaw * f.vel_yaw + f.vel_pitch * f.vel_pitch;
          if (mag > dom_mag) {
            dom_mag = mag;
            dom_vy = f.vel_yaw;
            dom_vp = f.vel_pitch;
          }
        }
      }
      size_t idx = m.ct_index(k, static_cast<int>(t));
      m.tile_luminance[idx] = static_cast<uint8_t>(
          std::clamp(std::lround(lum / g.area()), 0l, 255l));
      m.tile_dof_q[idx] =
          static_cast<uint16_t>(std::clamp(std::lround(dof / g.area() * 256.0), 0l, 65535l));
      for (int s = 0; s < m.traj_samples_per_chunk; ++s) {
        size_t base = (idx * m.traj_samples_per_chunk + s) * 2;
        m.traj_vel[base] = static_cast<float>(dom_vy);
        m.traj_vel[base + 1] = static_cast<float>(dom_vp);
      }
      for (int q = 0; q < video.levels(); ++q) {
        double sum = 0.0;
        for (int r = g.row0; r < g.row0 + g.rows; ++r)
          for (int c = g.col0; c < g.col0 + g.cols; ++c) sum += video.rate(k, r, c, q);
        m.tile_rate_bps[t * video.levels() + q] += static_cast<float>(sum);
      }
    }
  }
  if (m.num_chunks > 0)
    for (auto& r : m.tile_rate_bps) r /= static_cast<float>(m.num_chunks);

  m.table = compress_table(build_raw_table(video, tiling, jnd, n));
  return m;
}

// ---- serialization ----

namespace {

constexpr char kMagic[5] = {'P', 'A', 'N', 'O', '1'};
constexpr uint16_t kVersion = 1;

struct Writer {
  std::vector<uint8_t> buf;

  void u8(uint8_t v) { buf.push_back(v); }
  void u16(uint16_t v) {
    buf.push_back(v & 0xff);
    buf.push_back(v >> 8);
  }
  void i16(int16_t v) { u16(static_cast<uint16_t>(v)); }
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back((v >> (8 * i)) & 0xff);
  }
  void f32(float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    u32(bits);
  }
  void f64(double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i) buf.push_back((bits >> (8 * i)) & 0xff);
  }
  void bytes(const std::vector<uint8_t>& b) { buf.insert(buf.end(), b.begin(), b.end()); }
};

struct Reader {
  const std::vector<uint8_t>& buf;
  size_t pos = 0;

  void need(size_t n) const {
    if (pos + n > buf.size()) throw ParseError("truncated manifest");
  }
  uint8_t u8() {
    need(1);
    return buf[pos++];
  }
  uint16_t u16() {
    need(2);
    uint16_t v = buf[pos] | (buf[pos + 1] << 8);
    pos += 2;
    return v;
  }
  int16_t i16() { return static_cast<int16_t>(u16()); }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(buf[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  float f32() {
    uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  double f64() {
    need(8);
    uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(buf[pos + i]) << (8 * i);
    pos += 8;
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
};

// Run-length encoding of (value block per chunk) sequences per tile.
template <typename EqualFn, typename EmitFn>
void rle_encode(int num_chunks, EqualFn equal, EmitFn emit) {
  int start = 0;
  while (start < num_chunks) {
    int end = start + 1;
    while (end < num_chunks && equal(end, start) && end - start < 65535) ++end;
    emit(start, end - start);
    start = end;
  }
}

std::vector<uint8_t> encode_table_section(const Manifest& m) {
  const CompressedLookupTable& t = m.table;
  Writer w;
  w.f64(t.a_min_fit);
  w.f64(t.a_max_fit);
  w.f64(t.ceiling_db);

  // shared dictionary of (a, b, rmse) triples
  std::map<std::tuple<uint16_t, int16_t, uint16_t>, uint32_t> dict;
  std::vector<std::tuple<uint16_t, int16_t, uint16_t>> entries;
  for (size_t i = 0; i < t.a_q.size(); ++i) {
    auto key = std::make_tuple(t.a_q[i], t.b_q[i], t.rmse_q[i]);
    if (dict.emplace(key, static_cast<uint32_t>(entries.size())).second) entries.push_back(key);
  }
  w.u32(static_cast<uint32_t>(entries.size()));
  for (const auto& [a, b, rmse] : entries) {
    w.u16(a);
    w.i16(b);
    w.u16(rmse);
  }

  // per (tile, level): runs of identical dictionary refs across chunks
  for (int tile = 0; tile < t.tiles; ++tile) {
    for (int q = 0; q < t.levels; ++q) {
      std::vector<std::pair<uint16_t, uint32_t>> runs;
      auto ref_at = [&](int chunk) {
        size_t i = t.index(chunk, tile, q);
        return dict.at(std::make_tuple(t.a_q[i], t.b_q[i], t.rmse_q[i]));
      };
      rle_encode(
          t.chunks, [&](int a, int b) { return ref_at(a) == ref_at(b); },
          [&](int start, int len) { runs.emplace_back(static_cast<uint16_t>(len), ref_at(start)); });
      w.u16(static_cast<uint16_t>(runs.size()));
      for (const auto& [len, ref] : runs) {
        w.u16(len);
        w.u32(ref);
      }
    }
  }
  return w.buf;
}

void decode_table_section(Reader& r, Manifest* m) {
  CompressedLookupTable& t = m->table;
  t.chunks = m->num_chunks;
  t.tiles = static_cast<int>(m->tiles.size());
  t.levels = static_cast<int>(m->quality_qp.size());
  t.a_min_fit = r.f64();
  t.a_max_fit = r.f64();
  t.ceiling_db = r.f64();

  uint32_t dict_size = r.u32();
  std::vector<std::tuple<uint16_t, int16_t, uint16_t>> entries(dict_size);
  for (auto& e : entries) {
    uint16_t a = r.u16();
    int16_t b = r.i16();
    uint16_t rmse = r.u16();
    e = {a, b, rmse};
  }

  size_t n = static_cast<size_t>(t.chunks) * t.tiles * t.levels;
  t.a_q.resize(n);
  t.b_q.resize(n);
  t.rmse_q.resize(n);
  for (int tile = 0; tile < t.tiles; ++tile) {
    for (int q = 0; q < t.levels; ++q) {
      uint16_t run_count = r.u16();
      int chunk = 0;
      for (int run = 0; run < run_count; ++run) {
        uint16_t len = r.u16();
        uint32_t ref = r.u32();
        if (ref >= entries.size()) throw ParseError("manifest table ref out of range");
        if (chunk + len > t.chunks) throw ParseError("manifest table run overflow");
        for (int i = 0; i < len; ++i, ++chunk) {
          size_t idx = t.index(chunk, tile, q);
          t.a_q[idx] = std::get<0>(entries[ref]);
          t.b_q[idx] = std::get<1>(entries[ref]);
          t.rmse_q[idx] = std::get<2>(entries[ref]);
        }
      }
      if (chunk != t.chunks) throw ParseError("manifest table runs do not cover all chunks");
    }
  }
}

}  // namespace

std::vector<uint8_t> serialize_manifest(const Manifest& m) {
  if (m.num_chunks > 65535) throw InvalidArgError("too many chunks for manifest encoding");
  Writer w;
  w.buf.insert(w.buf.end(), kMagic, kMagic + 5);
  w.u16(kVersion);
  w.f64(m.chunk_duration_s);
  w.u32(static_cast<uint32_t>(m.num_chunks));
  w.u8(static_cast<uint8_t>(m.quality_qp.size()));
  for (int qp : m.quality_qp) w.u8(static_cast<uint8_t>(qp));
  w.u16(static_cast<uint16_t>(m.tiles.size()));
  for (const auto& t : m.tiles) {
    w.u8(static_cast<uint8_t>(t.row0));
    w.u8(static_cast<uint8_t>(t.col0));
    w.u8(static_cast<uint8_t>(t.rows));
    w.u8(static_cast<uint8_t>(t.cols));
  }
  w.u8(static_cast<uint8_t>(m.traj_samples_per_chunk));

  // features, RLE per tile across chunks
  {
    Writer s;
    for (size_t tile = 0; tile < m.tiles.size(); ++tile) {
      std::vector<std::tuple<uint16_t, uint8_t, uint16_t>> runs;
      auto feat = [&](int chunk) {
        size_t i = m.ct_index(chunk, static_cast<int>(tile));
        return std::make_pair(m.tile_luminance[i], m.tile_dof_q[i]);
      };
      rle_encode(
          m.num_chunks, [&](int a, int b) { return feat(a) == feat(b); },
          [&](int start, int len) {
            auto [lum, dof] = feat(start);
            runs.emplace_back(static_cast<uint16_t>(len), lum, dof);
          });
      s.u16(static_cast<uint16_t>(runs.size()));
      for (const auto& [len, lum, dof] : runs) {
        s.u16(len);
        s.u8(lum);
        s.u16(dof);
      }
    }
    w.u32(static_cast<uint32_t>(s.buf.size()));
    w.bytes(s.buf);
  }

  // trajectories, RLE per tile across chunks over the whole sample block
  {
    Writer s;
    size_t block = static_cast<size_t>(m.traj_samples_per_chunk) * 2;
    for (size_t tile = 0; tile < m.tiles.size(); ++tile) {
      auto block_at = [&](int chunk) {
        return m.ct_index(chunk, static_cast<int>(tile)) * block;
      };
      auto equal = [&](int a, int b) {
        for (size_t i = 0; i < block; ++i)
          if (m.traj_vel[block_at(a) + i] != m.traj_vel[block_at(b) + i]) return false;
        return true;
      };
      std::vector<std::pair<uint16_t, int>> runs;
      rle_encode(m.num_chunks, equal,
                 [&](int start, int len) { runs.emplace_back(static_cast<uint16_t>(len), start); });
      s.u16(static_cast<uint16_t>(runs.size()));
      for (const auto& [len, start] : runs) {
        s.u16(len);
        for (size_t i = 0; i < block; ++i) s.f32(m.traj_vel[block_at(start) + i]);
      }
    }
    w.u32(static_cast<uint32_t>(s.buf.size()));
    w.bytes(s.buf);
  }

  // nominal rates
  {
    Writer s;
    for (float r : m.tile_rate_bps) s.f32(r);
    w.u32(static_cast<uint32_t>(s.buf.size()));
    w.bytes(s.buf);
  }

  // lookup table
  {
    std::vector<uint8_t> s = encode_table_section(m);
    w.u32(static_cast<uint32_t>(s.size()));
    w.bytes(s);
  }

  // jnd config
  {
    std::string cfg = jnd_config_to_text(m.jnd);
    w.u32(static_cast<uint32_t>(cfg.size()));
    w.buf.insert(w.buf.end(), cfg.begin(), cfg.end());
  }
  return w.buf;
}

Manifest parse_manifest(const std::vector<uint8_t>& bytes) {
  Reader r{bytes};
  r.need(5);
  if (std::memcmp(bytes.data(), kMagic, 5) != 0) throw ParseError("bad manifest magic");
  r.pos = 5;
  uint16_t version = r.u16();
  if (version != kVersion)
    throw ParseError(strf("unsupported manifest version %u (expected %u)", version, kVersion));

  Manifest m;
  m.chunk_duration_s = r.f64();
  m.num_chunks = static_cast<int>(r.u32());
  uint8_t n_q = r.u8();
  m.quality_qp.resize(n_q);
  for (auto& qp : m.quality_qp) qp = r.u8();
  uint16_t n_tiles = r.u16();
  m.tiles.resize(n_tiles);
  for (auto& t : m.tiles) {
    t.row0 = r.u8();
    t.col0 = r.u8();
    t.rows = r.u8();
    t.cols = r.u8();
  }
  m.traj_samples_per_chunk = r.u8();

  size_t ct = static_cast<size_t>(m.num_chunks) * n_tiles;

  // features
  {
    uint32_t len = r.u32();
    size_t end = r.pos + len;
    m.tile_luminance.resize(ct);
    m.tile_dof_q.resize(ct);
    for (int tile = 0; tile < n_tiles; ++tile) {
      uint16_t run_count = r.u16();
      int chunk = 0;
      for (int run = 0; run < run_count; ++run) {
        uint16_t rl = r.u16();
        uint8_t lum = r.u8();
        uint16_t dof = r.u16();
        if (chunk + rl > m.num_chunks) throw ParseError("manifest feature run overflow");
        for (int i = 0; i < rl; ++i, ++chunk) {
          m.tile_luminance[m.ct_index(chunk, tile)] = lum;
          m.tile_dof_q[m.ct_index(chunk, tile)] = dof;
        }
      }
      if (chunk != m.num_chunks) throw ParseError("manifest feature runs incomplete");
    }
    if (r.pos != end) throw ParseError("manifest feature section length mismatch");
  }

  // trajectories
  {
    uint32_t len = r.u32();
    size_t end = r.pos + len;
    size_t block = static_cast<size_t>(m.traj_samples_per_chunk) * 2;
    m.traj_vel.resize(ct * block);
    for (int tile = 0; tile < n_tiles; ++tile) {
      uint16_t run_count = r.u16();
      int chunk = 0;
      for (int run = 0; run < run_count; ++run) {
        uint16_t rl = r.u16();
        std::vector<float> vals(block);
        for (auto& v : vals) v = r.f32();
        if (chunk + rl > m.num_chunks) throw ParseError("manifest trajectory run overflow");
        for (int i = 0; i < rl; ++i, ++chunk)
          std::copy(vals.begin(), vals.end(),
                    m.traj_vel.begin() + static_cast<long>(m.ct_index(chunk, tile) * block));
      }
      if (chunk != m.num_chunks) throw ParseError("manifest trajectory runs incomplete");
    }
    if (r.pos != end) throw ParseError("manifest trajectory section length mismatch");
  }

  // rates
  {
    uint32_t len = r.u32();
    if (len != n_tiles * m.quality_qp.size() * 4)
      throw ParseError("manifest rate section length mismatch");
    m.tile_rate_bps.resize(n_tiles * m.quality_qp.size());
    for (auto& v : m.tile_rate_bps) v = r.f32();
  }

  // table
  {
    uint32_t len = r.u32();
    size_t end = r.pos + len;
    decode_table_section(r, &m);
    if (r.pos != end) throw ParseError("manifest table section length mismatch");
  }

  // jnd config
  {
    uint32_t len = r.u32();
    r.need(len);
    std::string cfg(bytes.begin() + static_cast<long>(r.pos),
                    bytes.begin() + static_cast<long>(r.pos + len));
    r.pos += len;
    m.jnd = parse_jnd_config(cfg, "<manifest>");
  }
  if (r.pos != bytes.size()) throw ParseError("trailing bytes after manifest");
  return m;
}

void save_manifest(const Manifest& m, const std::string& path) {
  auto bytes = serialize_manifest(m);
  std::string s(bytes.begin(), bytes.end());
  write_text_file(path, s);
}

Manifest load_manifest(const std::string& path) {
  std::string s = read_text_file(path);
  return parse_manifest(std::vector<uint8_t>(s.begin(), s.end()));
}

size_t manifest_table_section_bytes(const Manifest& m) {
  return encode_table_section(m).size();
}

std::string manifest_to_json(const Manifest& m) {
  nlohmann::json j;
  j["chunk_duration_s"] = m.chunk_duration_s;
  j["num_chunks"] = m.num_chunks;
  j["quality_qp"] = m.quality_qp;
  j["fit_domain"] = {m.table.a_min_fit, m.table.a_max_fit};
  j["ceiling_db"] = m.table.ceiling_db;
  j["table_section_bytes"] = manifest_table_section_bytes(m);
  auto& tiles = j["tiles"] = nlohmann::json::array();
  for (size_t t = 0; t < m.tiles.size(); ++t) {
    nlohmann::json tj;
    tj["rect"] = {m.tiles[t].row0, m.tiles[t].col0, m.tiles[t].rows, m.tiles[t].cols};
    if (m.num_chunks > 0) {
      tj["luminance_c0"] = m.luminance(0, static_cast<int>(t));
      tj["dof_c0"] = m.dof(0, static_cast<int>(t));
      auto& fits = tj["fit_c0"] = nlohmann::json::array();
      for (size_t q = 0; q < m.quality_qp.size(); ++q)
        fits.push_back({m.table.a(0, static_cast<int>(t), static_cast<int>(q)),
                        m.table.b(0, static_cast<int>(t), static_cast<int>(q))});
    }
    std::vector<double> rates;
    for (size_t q = 0; q < m.quality_qp.size(); ++q)
      rates.push_back(m.rate(static_cast<int>(t), static_cast<int>(q)));
    tj["rate_bps"] = rates;
    tiles.push_back(std::move(tj));
  }
  return j.dump(2) + "\n";
}

}  // namespace pano
