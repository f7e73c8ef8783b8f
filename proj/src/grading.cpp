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

#include "tonekit/grading.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "tonekit/color.hpp"
#include "tonekit/error.hpp"

namespace tonekit {
namespace {

using color::clamp01;

int thread_count(const EngineOptions& o) { return o.threads > 0 ? o.threads : omp_get_max_threads(); }

void check_size(const Image& image, const EngineOptions& o) {
  if (image.pixel_count() > o.max_pixels) {
    throw Error(ErrorKind::kImageTooLarge,
                std::to_string(image.width) + "x" + std::to_string(image.height) +
                    " exceeds the " + std::to_string(o.max_pixels) + " pixel cap");
  }
}

// Applies `fn(double* px)` to every pixel, parallel over rows.
template <typename Fn>
void for_each_pixel(Image& img, const EngineOptions& o, Fn fn) {
  const int h = img.height;
  const int w = img.width;
  double* data = img.rgb.data();
#pragma omp parallel for num_threads(thread_count(o)) schedule(static)
  for (int y = 0; y < h; ++y) {
    double* row = data + 3 * static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) fn(row + 3 * x);
  }
}

// Uninitialized buffer for the horizontal pass of a blur.
using Scratch = std::unique_ptr<double[]>;

// Separable clamp-to-edge box blur of src(c) fused with a per-sample update:
// c <- combine(c, blur). The horizontal pass keeps a running sum along each
// row; the vertical pass adds whole rows so it vectorizes.
template <typename Src, typename Combine>
void blur_pass(Image& img, int radius, const EngineOptions& o, Scratch& tmp, Src src, Combine combine) {
  const int w = img.width;
  const int h = img.height;
  const std::size_t stride = 3 * static_cast<std::size_t>(w);
  if (!tmp) tmp.reset(new double[img.rgb.size()]);
  double* data = img.rgb.data();
  double* hsum = tmp.get();
  const double norm = 1.0 / (2 * radius + 1);
  const int threads = thread_count(o);
#pragma omp parallel for num_threads(threads) schedule(static)
  for (int y = 0; y < h; ++y) {
    const double* row = data + stride * y;
    double* dst = hsum + stride * y;
    for (int c = 0; c < 3; ++c) {
      double s = 0;
      for (int dx = -radius; dx <= radius; ++dx) s += src(row[3 * std::clamp(dx, 0, w - 1) + c]);
      dst[c] = s;
      for (int x = 1; x < w; ++x) {
        s += src(row[3 * std::min(x + radius, w - 1) + c]) - src(row[3 * std::max(x - radius - 1, 0) + c]);
        dst[3 * x + c] = s;
      }
    }
  }
#pragma omp parallel num_threads(threads)
  {
    std::vector<double> acc(stride);
#pragma omp for schedule(static)
    for (int y = 0; y < h; ++y) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int dy = -radius; dy <= radius; ++dy) {
        const double* p = hsum + stride * std::clamp(y + dy, 0, h - 1);
        for (std::size_t i = 0; i < stride; ++i) acc[i] += p[i];
      }
      double* row = data + stride * y;
      const double k = norm * norm;
      for (std::size_t i = 0; i < stride; ++i) row[i] = combine(row[i], acc[i] * k);
    }
  }
}

// Fused linearOffset..vibrance. Each step is skipped at zero and clamps.
struct PointwiseAdjust {
  explicit PointwiseAdjust(const AdjustParams& p) : p(p) {}

  void operator()(double* px) const {
    double& r = px[0];
    double& g = px[1];
    double& b = px[2];
    auto each = [&](auto f) {
      r = clamp01(f(r));
      g = clamp01(f(g));
      b = clamp01(f(b));
    };
    if (p.linear_offset != 0) {
      const double v = p.linear_offset / 100.0;
      each([&](double c) { return c + 0.25 * v; });
    }
    if (p.exposure != 0) {
      const double gain = std::exp2(p.exposure / 100.0);
      each([&](double c) { return c * gain; });
    }
    if (p.contrast != 0) {
      const double k = 1.0 + p.contrast / 100.0;
      each([&](double c) { return 0.5 + (c - 0.5) * k; });
    }
    if (p.brightness != 0) {
      const double v = p.brightness / 100.0;
      each([&](double c) { return c + 0.5 * v; });
    }
    if (p.highlights != 0) {
      const double d = 0.25 * (p.highlights / 100.0) * color::smoothstep(0.5, 1.0, color::luma(r, g, b));
      each([&](double c) { return c + d; });
    }
    if (p.shadows != 0) {
      const double d =
          0.25 * (p.shadows / 100.0) * (1.0 - color::smoothstep(0.0, 0.5, color::luma(r, g, b)));
      each([&](double c) { return c + d; });
    }
    if (p.temperature != 0) {
      const double v = p.temperature / 100.0;
      r = clamp01(r + 0.1 * v);
      b = clamp01(b - 0.1 * v);
    }
    if (p.tint != 0) {
      const double v = p.tint / 100.0;
      g = clamp01(g - 0.1 * v);
      r = clamp01(r + 0.05 * v);
      b = clamp01(b + 0.05 * v);
    }
    if (const double rot = std::fmod(static_cast<double>(p.hue), 360.0); rot != 0.0) {
      const auto hsl = color::rgb_to_hsl(r, g, b);
      if (!hsl.achromatic) {
        double h = hsl.h + rot;
        if (h >= 360.0) h -= 360.0;
        color::hsl_to_rgb(h, hsl.s, hsl.l, r, g, b);
        r = clamp01(r);
        g = clamp01(g);
        b = clamp01(b);
      }
    }
    if (p.saturation != 0) {
      const double k = 1.0 + p.saturation / 100.0;
      const double l = color::luma(r, g, b);
      each([&](double c) { return l + (c - l) * k; });
    }
    if (p.vibrance != 0) {
      const double s = color::rgb_to_hsl(r, g, b).s;
      const double k = 1.0 + (p.vibrance / 100.0) * (1.0 - s);
      const double l = color::luma(r, g, b);
      each([&](double c) { return l + (c - l) * k; });
    }
  }

  AdjustParams p;
};

struct PointwiseSelective {
  explicit PointwiseSelective(const SelectiveAdjustParams& p) : p(p) {}

  void operator()(double* px) const {
    const auto hsl = color::rgb_to_hsl(px[0], px[1], px[2]);
    if (hsl.achromatic) return;
    double sat = 0.0;
    double lum = 0.0;
    for (int band = 0; band < 6; ++band) {
      const double w = color::band_weight(hsl.h, band);
      if (w == 0.0) continue;
      sat += w * p.bands[band].saturation / 100.0;
      lum += w * p.bands[band].luminance / 100.0;
    }
    sat = std::clamp(sat, -1.0, 1.0);
    lum = std::clamp(lum, -1.0, 1.0);
    if (sat != 0.0) {
      const double l = color::luma(px[0], px[1], px[2]);
      for (int c = 0; c < 3; ++c) px[c] = clamp01(l + (px[c] - l) * (1.0 + sat));
    }
    if (lum != 0.0) {
      for (int c = 0; c < 3; ++c) px[c] = clamp01(px[c] + 0.5 * lum);
    }
  }

  SelectiveAdjustParams p;
};

// c + v * (c - box(c)) with the blur taken from the current image.
void detail_pass(Image& img, int amount, int radius, const EngineOptions& o, Scratch& tmp) {
  const double v = amount / 100.0;
  blur_pass(
      img, radius, o, tmp, [](double c) { return c; },
      [v](double c, double blur) { return clamp01(c + v * (c - blur)); });
}

void bloom_pass(Image& img, int amount, const EngineOptions& o, Scratch& tmp) {
  const double v = amount / 100.0;
  blur_pass(
      img, 2, o, tmp, [](double c) { return std::max(c - 0.8, 0.0) * 5.0; },
      [v](double c, double glow) { return clamp01(c + v * glow); });
}

void adjust_in_place(Image& img, const AdjustParams& p, const EngineOptions& o) {
  AdjustParams pointwise = p;
  pointwise.bloom = pointwise.sharpen = pointwise.structure = 0;
  if (is_used(pointwise)) for_each_pixel(img, o, PointwiseAdjust(pointwise));
  Scratch tmp;
  if (p.bloom != 0) bloom_pass(img, p.bloom, o, tmp);
  if (p.sharpen != 0) detail_pass(img, p.sharpen, 1, o, tmp);
  if (p.structure != 0) detail_pass(img, p.structure, 4, o, tmp);
}

void preset_in_place(Image& img, const PresetDefinition& preset, const EngineOptions& o) {
  for (const auto& op : preset.ops) {
    switch (op.kind) {
      case PresetOp::Kind::kAdjust:
        adjust_in_place(img, op.adjust, o);
        break;
      case PresetOp::Kind::kBand:
        for_each_pixel(img, o, PointwiseSelective(op.selective));
        break;
      case PresetOp::Kind::kInvert:
        for_each_pixel(img, o, [](double* px) {
          for (int c = 0; c < 3; ++c) px[c] = 1.0 - px[c];
        });
        break;
      case PresetOp::Kind::kDuotone:
        for_each_pixel(img, o, [&op](double* px) {
          const double l = color::luma(px[0], px[1], px[2]);
          for (int c = 0; c < 3; ++c) px[c] = clamp01(op.a[c] + l * (op.b[c] - op.a[c]));
        });
        break;
      case PresetOp::Kind::kGain:
        for_each_pixel(img, o, [&op](double* px) {
          for (int c = 0; c < 3; ++c) px[c] = clamp01(px[c] * op.a[c]);
        });
        break;
      case PresetOp::Kind::kOffset:
        for_each_pixel(img, o, [&op](double* px) {
          for (int c = 0; c < 3; ++c) px[c] = clamp01(px[c] + op.a[c]);
        });
        break;
    }
  }
}

void filter_in_place(Image& img, const FilterParams& p, const PresetRegistry& registry,
                     const EngineOptions& o) {
  const PresetDefinition* preset = registry.find(p.name);
  if (!preset || p.intensity == 0) return;
  Image look = img;
  preset_in_place(look, *preset, o);
  const double a = p.intensity / 100.0;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(img.rgb.size());
  double* data = img.rgb.data();
  const double* fx = look.rgb.data();
#pragma omp parallel for num_threads(thread_count(o)) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) data[i] = clamp01((1.0 - a) * data[i] + a * fx[i]);
}

}  // namespace

Image apply_adjust(const Image& image, const AdjustParams& params, const EngineOptions& options) {
  check_size(image, options);
  Image out = image;
  adjust_in_place(out, params, options);
  return out;
}

Image apply_selective(const Image& image, const SelectiveAdjustParams& params,
                      const EngineOptions& options) {
  check_size(image, options);
  Image out = image;
  if (is_used(params)) for_each_pixel(out, options, PointwiseSelective(params));
  return out;
}

Image apply_filter(const Image& image, const FilterParams& params, const PresetRegistry& registry,
                   const EngineOptions& options) {
  check_size(image, options);
  Image out = image;
  filter_in_place(out, params, registry, options);
  return out;
}

Image apply_preset(const Image& image, const PresetDefinition& preset, const EngineOptions& options) {
  check_size(image, options);
  Image out = image;
  preset_in_place(out, preset, options);
  return out;
}

Image apply_plan(const Image& image, const EditPlan& plan, const PresetRegistry& registry,
                 const EngineOptions& options) {
  check_size(image, options);
  Image out = image;
  const auto enabled = [&](Tool t) { return options.tools[static_cast<std::size_t>(t)]; };
  if (enabled(Tool::kAdjust) && is_used(plan.adjust)) adjust_in_place(out, *plan.adjust, options);
  if (enabled(Tool::kSelective) && is_used(plan.selective)) {
    for_each_pixel(out, options, PointwiseSelective(*plan.selective));
  }
  if (enabled(Tool::kFilter) && is_used(plan.filter)) {
    filter_in_place(out, *plan.filter, registry, options);
  }
  return out;
}

}  // namespace tonekit
