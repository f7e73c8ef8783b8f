// Copyright 2026 The tonekit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>

namespace tonekit::color {

// Rec. 709 luma.
inline double luma(double r, double g, double b) { return 0.2126 * r + 0.7152 * g + 0.0722 * b; }

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

inline double smoothstep(double edge0, double edge1, double x) {
  const double t = clamp01((x - edge0) / (edge1 - edge0));
  return t * t * (3.0 - 2.0 * t);
}

struct Hsl {
  double h;  // degrees in [0, 360); 0 for achromatic pixels
  double s;  // [0, 1]
  double l;  // [0, 1]
  bool achromatic;
};

inline Hsl rgb_to_hsl(double r, double g, double b) {
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double l = 0.5 * (mx + mn);
  if (mx == mn) return {0.0, 0.0, l, true};
  const double d = mx - mn;
  const double s = l > 0.5 ? d / (2.0 - mx - mn) : d / (mx + mn);
  double h;
  if (mx == r) {
    h = (g - b) / d + (g < b ? 6.0 : 0.0);
  } else if (mx == g) {
    h = (b - r) / d + 2.0;
  } else {
    h = (r - g) / d + 4.0;
  }
  h *= 60.0;
  if (h >= 360.0) h -= 360.0;
  return {h, s, l, false};
}

inline double hue_channel(double p, double q, double t) {
  if (t < 0.0) t += 1.0;
  if (t > 1.0) t -= 1.0;
  if (t < 1.0 / 6.0) return p + (q - p) * 6.0 * t;
  if (t < 0.5) return q;
  if (t < 2.0 / 3.0) return p + (q - p) * (2.0 / 3.0 - t) * 6.0;
  return p;
}

inline void hsl_to_rgb(double h, double s, double l, double& r, double& g, double& b) {
  if (s == 0.0) {
    r = g = b = l;
    return;
  }
  const double q = l < 0.5 ? l * (1.0 + s) : l + s - l * s;
  const double p = 2.0 * l - q;
  const double hk = h / 360.0;
  r = hue_channel(p, q, hk + 1.0 / 3.0);
  g = hue_channel(p, q, hk);
  b = hue_channel(p, q, hk - 1.0 / 3.0);
}

// Shortest angular distance in degrees.
inline double hue_distance(double a, double b) {
  const double d = std::fabs(a - b);
  return d > 180.0 ? 360.0 - d : d;
}

inline constexpr double kBandCenters[6] = {0.0, 30.0, 60.0, 120.0, 180.0, 240.0};
inline constexpr double kBandFullWeight = 15.0;
inline constexpr double kBandCutoff = 45.0;

// Triangular membership: 1 within +-15 degrees of the band center, linear
// falloff to 0 at +-45 degrees.
inline double band_weight(double hue, int band) {
  const double d = hue_distance(hue, kBandCenters[band]);
  if (d <= kBandFullWeight) return 1.0;
  if (d >= kBandCutoff) return 0.0;
  return (kBandCutoff - d) / (kBandCutoff - kBandFullWeight);
}

}  // namespace tonekit::color
