#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pano {

// Error hierarchy. Loaders throw ParseError/InvariantError with file/line
// context; everything maps to a status code at the C API boundary.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct InvariantError : Error {
  using Error::Error;
};
struct InvalidArgError : Error {
  using Error::Error;
};

// printf-style formatting into std::string.
std::string strf(const char* fmt, ...) __attribute__((format(printf, 1, 2)));

// ---- angle helpers (degrees) ----

// Wrap yaw into [0, 360).
double wrap_yaw(double yaw_deg);

// Signed shorter-arc delta from -> to, in (-180, 180]. A tie at exactly
// 180 resolves toward increasing yaw (+180).
double yaw_shorter_delta(double from_deg, double to_deg);

// Distance between two orientations under the shorter-arc yaw metric.
double angular_distance(double yaw_a, double pitch_a, double yaw_b, double pitch_b);

// ---- deterministic RNG ----
// Thin wrapper over mt19937_64 that avoids std::*_distribution so streams
// are reproducible independent of the standard library build.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  uint64_t next_u64();
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  int uniform_int(int lo, int hi);       // [lo, hi] inclusive

 private:
  uint64_t state_;
};

// ---- CSV helpers ----

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // Original 1-based line number per row, for error messages.
  std::vector<size_t> line_numbers;

  int column(const std::string& name) const;  // -1 if absent
  int require_column(const std::string& name, const std::string& path) const;
};

CsvTable read_csv(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

double parse_double(const std::string& s, const std::string& context);
long parse_long(const std::string& s, const std::string& context);

// Shortest round-trippable decimal representation of a double.
std::string format_double(double v);

}  // namespace pano
