#include "jnd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pano {

double MultiplierCurve::eval(double x) const {
  if (x < 0) throw InvalidArgError("multiplier factor must be >= 0");
  double y;
  if (knots.size() == 1) {
    y = knots[0].second;
  } else if (x >= knots.back().first) {
    // extrapolate along the last segment
    const auto& a = knots[knots.size() - 2];
    const auto& b = knots.back();
    double slope = (b.second - a.second) / (b.first - a.first);
    y = b.second + slope * (x - b.first);
  } else {
    size_t hi = 1;
    while (knots[hi].first < x) ++hi;
    const auto& a = knots[hi - 1];
    const auto& b = knots[hi];
    double t = (x - a.first) / (b.first - a.first);
    y = a.second + t * (b.second - a.second);
  }
  return std::clamp(y, 1.0, cap);
}

void MultiplierCurve::validate(const std::string& name) const {
  if (knots.empty()) throw InvariantError(name + ": curve has no knots");
  if (knots[0].first != 0.0 || knots[0].second != 1.0)
    throw InvariantError(name + ": first knot must be (0, 1)");
  for (size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first))
      throw InvariantError(name + ": knot x values must be strictly increasing");
    if (knots[i].second < knots[i - 1].second)
      throw InvariantError(name + ": multipliers must be non-decreasing");
  }
  if (!(cap >= 1.0)) throw InvariantError(name + ": cap must be >= 1");
}

void ContentJndParams::validate() const {
  if (!(t0 > 0) || !(t1 > 0) || !(slope > 0) || !(texture_weight > 0))
    throw InvariantError("content JND constants must be positive");
}

double JndModel::content_jnd(double luminance_gray, double texture) const {
  if (luminance_gray < 0 || luminance_gray > 255)
    throw InvalidArgError(strf("luminance %g out of [0,255]", luminance_gray));
  if (texture < 0 || texture > 255)
    throw InvalidArgError(strf("texture %g out of [0,255]", texture));
  double t_lum;
  if (luminance_gray <= 127.0)
    t_lum = content.t0 * (1.0 - std::sqrt(luminance_gray / 127.0)) + content.t1;
  else
    t_lum = content.slope * (luminance_gray - 127.0) + content.t1;
  return t_lum + content.texture_weight * texture;
}

double JndModel::action_ratio(const ActionState& a) const {
  return speed.eval(a.rel_speed) * dof.eval(a.dof_diff) * luminance.eval(a.luminance_change);
}

double JndModel::jnd360(double content_jnd_value, const ActionState& a) const {
  if (!(content_jnd_value > 0)) throw InvalidArgError("content JND must be > 0");
  return content_jnd_value * action_ratio(a);
}

void JndModel::validate() const {
  content.validate();
  speed.validate("speed");
  luminance.validate("luminance");
  dof.validate("dof");
}

JndModel default_jnd_model() {
  JndModel m;
  m.speed.knots = {{0.0, 1.0}, {10.0, 1.5}};
  m.luminance.knots = {{0.0, 1.0}, {200.0, 1.5}};
  m.dof.knots = {{0.0, 1.0}, {0.7, 1.5}};
  return m;
}

// ---- config parsing ----

namespace {

struct ConfigLine {
  std::string section;
  std::string key;
  std::string value;
};

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::pair<double, double>> parse_knot_list(const std::string& value,
                                                       const std::string& ctx) {
  // expects [[x, m], [x, m], ...]
  std::vector<std::pair<double, double>> out;
  std::vector<double> nums;
  std::string cur;
  int depth = 0;
  for (char ch : value) {
    if (ch == '[') {
      ++depth;
    } else if (ch == ']' || ch == ',') {
      if (!trim(cur).empty()) nums.push_back(parse_double(trim(cur), ctx));
      cur.clear();
      if (ch == ']') --depth;
    } else {
      cur.push_back(ch);
    }
  }
  if (depth != 0) throw ParseError(ctx + ": unbalanced brackets in knot list");
  if (nums.empty() || nums.size() % 2 != 0)
    throw ParseError(ctx + ": knot list must contain [x, multiplier] pairs");
  for (size_t i = 0; i < nums.size(); i += 2) out.emplace_back(nums[i], nums[i + 1]);
  return out;
}

}  // namespace

JndModel parse_jnd_config(const std::string& text, const std::string& origin) {
  JndModel m = default_jnd_model();
  std::istringstream in(text);
  std::string line, section;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::string ctx = strf("%s:%zu", origin.c_str(), lineno);
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError(ctx + ": malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(ctx + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));

    if (section == "content") {
      if (key == "t0")
        m.content.t0 = parse_double(value, ctx);
      else if (key == "t1")
        m.content.t1 = parse_double(value, ctx);
      else if (key == "slope")
        m.content.slope = parse_double(value, ctx);
      else if (key == "texture_weight")
        m.content.texture_weight = parse_double(value, ctx);
      else
        throw ParseError(ctx + ": unknown content key '" + key + "'");
    } else if (section == "speed" || section == "luminance" || section == "dof") {
      MultiplierCurve& c =
          section == "speed" ? m.speed : (section == "luminance" ? m.luminance : m.dof);
      if (key == "knots")
        c.knots = parse_knot_list(value, ctx);
      else if (key == "cap")
        c.cap = parse_double(value, ctx);
      else
        throw ParseError(ctx + ": unknown curve key '" + key + "'");
    } else {
      throw ParseError(ctx + ": unknown section '" + section + "'");
    }
  }
  m.validate();
  return m;
}

JndModel load_jnd_config(const std::string& path) {
  return parse_jnd_config(read_text_file(path), path);
}

std::string jnd_config_to_text(const JndModel& m) {
  std::ostringstream out;
  out << "[content]\n";
  out << "t0 = " << format_double(m.content.t0) << "\n";
  out << "t1 = " << format_double(m.content.t1) << "\n";
  out << "slope = " << format_double(m.content.slope) << "\n";
  out << "texture_weight = " << format_double(m.content.texture_weight) << "\n";
  auto dump_curve = [&out](const char* name, const MultiplierCurve& c) {
    out << "\n[" << name << "]\n";
    out << "knots = [";
    for (size_t i = 0; i < c.knots.size(); ++i) {
      if (i) out << ", ";
      out << "[" << format_double(c.knots[i].first) << ", " << format_double(c.knots[i].second)
          << "]";
    }
    out << "]\n";
    out << "cap = " << format_double(c.cap) << "\n";
  };
  dump_curve("speed", m.speed);
  dump_curve("luminance", m.luminance);
  dump_curve("dof", m.dof);
  return out.str();
}

}  // namespace pano
