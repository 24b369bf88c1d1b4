#pragma once

#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace pano {

// Piecewise-linear multiplier curve over a non-negative factor value.
// First knot is pinned at (0, 1); the last segment's slope extends past the
// last knot; output is clamped into [1, cap].
struct MultiplierCurve {
  std::vector<std::pair<double, double>> knots{{0.0, 1.0}};
  double cap = 3.0;

  double eval(double x) const;
  void validate(const std::string& name) const;

  bool operator==(const MultiplierCurve&) const = default;
};

// Viewpoint-movement state feeding the action-dependent ratio: relative
// speed in deg/s, luminance change in gray levels over the trailing 5 s
// window, and depth-of-field difference in diopters.
struct ActionState {
  double rel_speed = 0.0;
  double luminance_change = 0.0;
  double dof_diff = 0.0;
};

// Constants of the content-dependent JND: luminance-masking curve
// (parabolic-root below mid-gray, linear above) plus a linear texture term.
struct ContentJndParams {
  double t0 = 17.0;
  double t1 = 3.0;
  double slope = 3.0 / 128.0;
  double texture_weight = 0.1;

  void validate() const;
  bool operator==(const ContentJndParams&) const = default;
};

struct JndModel {
  ContentJndParams content;
  MultiplierCurve speed;      // F_v, deg/s
  MultiplierCurve luminance;  // F_l, gray levels
  MultiplierCurve dof;        // F_d, diopters

  double content_jnd(double luminance_gray, double texture) const;
  double action_ratio(const ActionState& a) const;
  double jnd360(double content_jnd_value, const ActionState& a) const;

  void validate() const;
  bool operator==(const JndModel&) const = default;
};

// Default model: each curve has knots (0,1) and (threshold,1.5) with the
// calibrated thresholds 10 deg/s, 200 gray levels, 0.7 diopters.
JndModel default_jnd_model();

// Plain-text config in a small TOML subset: [section], key = value,
// knots = [[x,m],...]. Sections: content, speed, luminance, dof.
JndModel parse_jnd_config(const std::string& text, const std::string& origin);
JndModel load_jnd_config(const std::string& path);
std::string jnd_config_to_text(const JndModel& m);

}  // namespace pano
