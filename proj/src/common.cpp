#include "common.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pano {

std::string strf(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  va_list copy;
  va_copy(copy, args);
  int n = std::vsnprintf(nullptr, 0, fmt, copy);
  va_end(copy);
  std::string out(n > 0 ? static_cast<size_t>(n) : 0, '\0');
  if (n > 0) std::vsnprintf(out.data(), out.size() + 1, fmt, args);
  va_end(args);
  return out;
}

double wrap_yaw(double yaw_deg) {
  double y = std::fmod(yaw_deg, 360.0);
  if (y < 0) y += 360.0;
  // fmod can return 360.0 - eps rounding back to 360.0 after the add
  if (y >= 360.0) y -= 360.0;
  return y;
}

double yaw_shorter_delta(double from_deg, double to_deg) {
  double d = wrap_yaw(to_deg) - wrap_yaw(from_deg);
  if (d > 180.0) d -= 360.0;
  if (d <= -180.0) d += 360.0;  // tie at 180 stays +180
  return d;
}

double angular_distance(double yaw_a, double pitch_a, double yaw_b, double pitch_b) {
  double dy = yaw_shorter_delta(yaw_a, yaw_b);
  double dp = pitch_b - pitch_a;
  return std::sqrt(dy * dy + dp * dp);
}

uint64_t Rng::next_u64() {
  // splitmix64; small state, fully portable
  state_ += 0x9e3779b97f4a7c15ull;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

int Rng::uniform_int(int lo, int hi) {
  if (hi <= lo) return lo;
  uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

int CsvTable::require_column(const std::string& name, const std::string& path) const {
  int c = column(name);
  if (c < 0) throw ParseError(strf("%s: missing column '%s'", path.c_str(), name.c_str()));
  return c;
}

static std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(strf("cannot open %s", path.c_str()));
  CsvTable t;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_line(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
    } else {
      if (fields.size() != t.header.size())
        throw ParseError(strf("%s:%zu: expected %zu fields, got %zu", path.c_str(), lineno,
                              t.header.size(), fields.size()));
      t.rows.push_back(std::move(fields));
      t.line_numbers.push_back(lineno);
    }
  }
  if (t.header.empty()) throw ParseError(strf("%s: empty file", path.c_str()));
  return t;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(strf("cannot write %s", path.c_str()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError(strf("short write to %s", path.c_str()));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(strf("cannot open %s", path.c_str()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ParseError(strf("%s: not a number: '%s'", context.c_str(), s.c_str()));
  }
}

long parse_long(const std::string& s, const std::string& context) {
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ParseError(strf("%s: not an integer: '%s'", context.c_str(), s.c_str()));
  }
}

std::string format_double(double v) {
  // shortest representation that round-trips
  for (int prec = 1; prec <= 17; ++prec) {
    std::string s = strf("%.*g", prec, v);
    if (std::stod(s) == v) return s;
  }
  return strf("%.17g", v);
}

}  // namespace pano
