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

// Serial reference for the grading kernels: one full-image pass per
// sub-operation, direct 2-D box sums, no fusion and no threading.

#include <cmath>
#include <functional>

#include "tonekit/color.hpp"
#include "tonekit/grading.hpp"

namespace tonekit::reference {
namespace {

using color::clamp01;
using PixelFn = std::function<void(double& r, double& g, double& b)>;

void map_pixels(Image& img, const PixelFn& fn) {
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    double& r = img.rgb[3 * i];
    double& g = img.rgb[3 * i + 1];
    double& b = img.rgb[3 * i + 2];
    fn(r, g, b);
    r = clamp01(r);
    g = clamp01(g);
    b = clamp01(b);
  }
}

std::vector<double> naive_box_blur(const std::vector<double>& src, int w, int h, int radius) {
  std::vector<double> out(src.size());
  const double area = static_cast<double>((2 * radius + 1) * (2 * radius + 1));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        double s = 0;
        for (int dy = -radius; dy <= radius; ++dy) {
          const int yy = std::clamp(y + dy, 0, h - 1);
          for (int dx = -radius; dx <= radius; ++dx) {
            const int xx = std::clamp(x + dx, 0, w - 1);
            s += src[3 * (static_cast<std::size_t>(yy) * w + xx) + c];
          }
        }
        out[3 * (static_cast<std::size_t>(y) * w + x) + c] = s / area;
      }
    }
  }
  return out;
}

void adjust(Image& img, const AdjustParams& p) {
  if (p.linear_offset) {
    const double v = p.linear_offset / 100.0;
    map_pixels(img, [v](double& r, double& g, double& b) { r += 0.25 * v; g += 0.25 * v; b += 0.25 * v; });
  }
  if (p.exposure) {
    const double v = p.exposure / 100.0;
    map_pixels(img, [v](double& r, double& g, double& b) {
      r *= std::pow(2.0, v);
      g *= std::pow(2.0, v);
      b *= std::pow(2.0, v);
    });
  }
  if (p.contrast) {
    const double v = p.contrast / 100.0;
    map_pixels(img, [v](double& r, double& g, double& b) {
      r = 0.5 + (r - 0.5) * (1 + v);
      g = 0.5 + (g - 0.5) * (1 + v);
      b = 0.5 + (b - 0.5) * (1 + v);
    });
  }
  if (p.brightness) {
    const double v = p.brightness / 100.0;
    map_pixels(img, [v](double& r, double& g, double& b) { r += 0.5 * v; g += 0.5 * v; b += 0.5 * v; });
  }
  if (p.highlights) {
    const double v = p.highlights / 100.0;
    map_pixels(img, [v](double& r, double& g, double& b) {
      const double d = 0.25 * v * color::smoothstep(0.5, 1.0, color::luma(r, g, b));
      r += d;
      g += d;
      b += d;
    });
  }
  if (p.shadows) {
    const double v = p.shadows / 100.0;
    map_pixels(img, [v](double& r, double& g, double& b) {
      const double d = 0.25 * v * (1.0 - color::smoothstep(0.0, 0.5, color::luma(r, g, b)));
      r += d;
      g += d;
      b += d;
    });
  }
  if (p.temperature) {
    const double v = p.temperature / 100.0;
    map_pixels(img, [v](double& r, double&, double& b) { r += 0.1 * v; b -= 0.1 * v; });
  }
  if (p.tint) {
    const double v = p.tint / 100.0;
    map_pixels(img, [v](double& r, double& g, double& b) { g -= 0.1 * v; r += 0.05 * v; b += 0.05 * v; });
  }
  if (p.hue % 360 != 0) {
    const double rot = p.hue % 360;
    map_pixels(img, [rot](double& r, double& g, double& b) {
      const auto hsl = color::rgb_to_hsl(r, g, b);
      if (hsl.achromatic) return;
      color::hsl_to_rgb(std::fmod(hsl.h + rot, 360.0), hsl.s, hsl.l, r, g, b);
    });
  }
  if (p.saturation) {
    const double v = p.saturation / 100.0;
    map_pixels(img, [v](double& r, double& g, double& b) {
      const double l = color::luma(r, g, b);
      r = l + (r - l) * (1 + v);
      g = l + (g - l) * (1 + v);
      b = l + (b - l) * (1 + v);
    });
  }
  if (p.vibrance) {
    const double v = p.vibrance / 100.0;
    map_pixels(img, [v](double& r, double& g, double& b) {
      const double k = 1 + v * (1 - color::rgb_to_hsl(r, g, b).s);
      const double l = color::luma(r, g, b);
      r = l + (r - l) * k;
      g = l + (g - l) * k;
      b = l + (b - l) * k;
    });
  }
  if (p.bloom) {
    const double v = p.bloom / 100.0;
    std::vector<double> bright(img.rgb.size());
    for (std::size_t i = 0; i < bright.size(); ++i) bright[i] = std::max(img.rgb[i] - 0.8, 0.0) * 5;
    const auto glow = naive_box_blur(bright, img.width, img.height, 2);
    for (std::size_t i = 0; i < bright.size(); ++i) img.rgb[i] = clamp01(img.rgb[i] + v * glow[i]);
  }
  for (auto [amount, radius] : {std::pair{p.sharpen, 1}, std::pair{p.structure, 4}}) {
    if (!amount) continue;
    const double v = amount / 100.0;
    const auto blurred = naive_box_blur(img.rgb, img.width, img.height, radius);
    for (std::size_t i = 0; i < blurred.size(); ++i) {
      img.rgb[i] = clamp01(img.rgb[i] + v * (img.rgb[i] - blurred[i]));
    }
  }
}

void selective(Image& img, const SelectiveAdjustParams& p) {
  map_pixels(img, [&p](double& r, double& g, double& b) {
    const auto hsl = color::rgb_to_hsl(r, g, b);
    if (hsl.achromatic) return;
    double sat = 0, lum = 0;
    for (int band = 0; band < 6; ++band) {
      sat += color::band_weight(hsl.h, band) * p.bands[band].saturation / 100.0;
      lum += color::band_weight(hsl.h, band) * p.bands[band].luminance / 100.0;
    }
    sat = std::clamp(sat, -1.0, 1.0);
    lum = std::clamp(lum, -1.0, 1.0);
    const double l = color::luma(r, g, b);
    r = clamp01(l + (r - l) * (1 + sat)) + 0.5 * lum;
    g = clamp01(l + (g - l) * (1 + sat)) + 0.5 * lum;
    b = clamp01(l + (b - l) * (1 + sat)) + 0.5 * lum;
  });
}

void preset(Image& img, const PresetDefinition& def) {
  for (const auto& op : def.ops) {
    switch (op.kind) {
      case PresetOp::Kind::kAdjust: adjust(img, op.adjust); break;
      case PresetOp::Kind::kBand: selective(img, op.selective); break;
      case PresetOp::Kind::kInvert:
        map_pixels(img, [](double& r, double& g, double& b) { r = 1 - r; g = 1 - g; b = 1 - b; });
        break;
      case PresetOp::Kind::kDuotone:
        map_pixels(img, [&op](double& r, double& g, double& b) {
          const double l = color::luma(r, g, b);
          r = op.a[0] + l * (op.b[0] - op.a[0]);
          g = op.a[1] + l * (op.b[1] - op.a[1]);
          b = op.a[2] + l * (op.b[2] - op.a[2]);
        });
        break;
      case PresetOp::Kind::kGain:
        map_pixels(img, [&op](double& r, double& g, double& b) { r *= op.a[0]; g *= op.a[1]; b *= op.a[2]; });
        break;
      case PresetOp::Kind::kOffset:
        map_pixels(img, [&op](double& r, double& g, double& b) { r += op.a[0]; g += op.a[1]; b += op.a[2]; });
        break;
    }
  }
}

}  // namespace

Image apply_adjust(const Image& image, const AdjustParams& params) {
  Image out = image;
  adjust(out, params);
  return out;
}

Image apply_selective(const Image& image, const SelectiveAdjustParams& params) {
  Image out = image;
  if (is_used(params)) selective(out, params);
  return out;
}

Image apply_filter(const Image& image, const FilterParams& params, const PresetRegistry& registry) {
  const PresetDefinition* def = registry.find(params.name);
  if (!def || params.intensity == 0) return image;
  Image look = image;
  preset(look, *def);
  Image out = image;
  const double a = params.intensity / 100.0;
  for (std::size_t i = 0; i < out.rgb.size(); ++i) {
    out.rgb[i] = clamp01((1 - a) * image.rgb[i] + a * look.rgb[i]);
  }
  return out;
}

Image apply_plan(const Image& image, const EditPlan& plan, const PresetRegistry& registry) {
  Image out = image;
  if (is_used(plan.adjust)) out = reference::apply_adjust(out, *plan.adjust);
  if (is_used(plan.selective)) out = reference::apply_selective(out, *plan.selective);
  if (is_used(plan.filter)) out = reference::apply_filter(out, *plan.filter, registry);
  return out;
}

}  // namespace tonekit::reference
