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

#include "tonekit/presets.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "tonekit/assets.hpp"
#include "tonekit/error.hpp"

namespace tonekit {
namespace {

class LineError {
 public:
  LineError(std::string_view source, int line) : where_(std::string(source) + ":" + std::to_string(line)) {}

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::kInvalidInput, where_ + ": " + why, {where_});
  }

 private:
  std::string where_;
};

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_real(const std::string& tok, const LineError& err) {
  double v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) err.fail("bad number '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok, const LineError& err) {
  int v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) err.fail("bad integer '" + tok + "'");
  return v;
}

std::pair<std::string, int> key_value(const std::string& tok, const LineError& err) {
  const auto eq = tok.find('=');
  if (eq == std::string::npos || eq == 0) err.fail("expected key=value, got '" + tok + "'");
  return {tok.substr(0, eq), parse_int(tok.substr(eq + 1), err)};
}

void check_range(int v, ParamRange r, const std::string& what, const LineError& err) {
  if (v < r.lo || v > r.hi) {
    err.fail(what + "=" + std::to_string(v) + " outside [" + std::to_string(r.lo) + ", " +
             std::to_string(r.hi) + "]");
  }
}

std::array<double, 3> triple(const std::vector<std::string>& toks, std::size_t first, double lo,
                             double hi, const LineError& err) {
  std::array<double, 3> v{};
  for (int i = 0; i < 3; ++i) {
    v[i] = parse_real(toks[first + i], err);
    if (v[i] < lo || v[i] > hi) err.fail("value " + toks[first + i] + " out of range");
  }
  return v;
}

PresetOp parse_op(const std::vector<std::string>& toks, const LineError& err) {
  PresetOp op;
  const std::string& verb = toks[0];
  if (verb == "adjust") {
    op.kind = PresetOp::Kind::kAdjust;
    if (toks.size() < 2) err.fail("adjust needs at least one parameter");
    for (std::size_t i = 1; i < toks.size(); ++i) {
      const auto [key, value] = key_value(toks[i], err);
      auto it = std::find_if(kAdjustFields.begin(), kAdjustFields.end(),
                             [&](const AdjustField& f) { return f.name == key; });
      if (it == kAdjustFields.end()) err.fail("unknown adjust parameter '" + key + "'");
      check_range(value, it->range, key, err);
      op.adjust.*(it->member) = value;
    }
  } else if (verb == "band") {
    op.kind = PresetOp::Kind::kBand;
    if (toks.size() < 3) err.fail("band needs a color and at least one parameter");
    auto it = std::find(kBandNames.begin(), kBandNames.end(), toks[1]);
    if (it == kBandNames.end()) err.fail("unknown band '" + toks[1] + "'");
    BandParams& bp = op.selective.bands[static_cast<std::size_t>(it - kBandNames.begin())];
    for (std::size_t i = 2; i < toks.size(); ++i) {
      const auto [key, value] = key_value(toks[i], err);
      check_range(value, kBandRange, key, err);
      if (key == "saturation") bp.saturation = value;
      else if (key == "luminance") bp.luminance = value;
      else err.fail("unknown band parameter '" + key + "'");
    }
  } else if (verb == "invert") {
    if (toks.size() != 1) err.fail("invert takes no arguments");
    op.kind = PresetOp::Kind::kInvert;
  } else if (verb == "duotone") {
    if (toks.size() != 7) err.fail("duotone takes six channel values");
    op.kind = PresetOp::Kind::kDuotone;
    op.a = triple(toks, 1, 0, 255, err);
    op.b = triple(toks, 4, 0, 255, err);
    for (int i = 0; i < 3; ++i) {
      op.a[i] /= 255.0;
      op.b[i] /= 255.0;
    }
  } else if (verb == "gain") {
    if (toks.size() != 4) err.fail("gain takes three values");
    op.kind = PresetOp::Kind::kGain;
    op.a = triple(toks, 1, 0.0, 4.0, err);
  } else if (verb == "offset") {
    if (toks.size() != 4) err.fail("offset takes three values");
    op.kind = PresetOp::Kind::kOffset;
    op.a = triple(toks, 1, -1.0, 1.0, err);
  } else {
    err.fail("unknown directive '" + verb + "'");
  }
  return op;
}

}  // namespace

PresetRegistry PresetRegistry::parse(std::string_view text, std::string_view source) {
  PresetRegistry reg;
  PresetDefinition* current = nullptr;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const LineError err(source, line_no);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto toks = split_ws(line);
    if (toks.empty()) continue;

    if (toks[0] == "preset") {
      if (current) err.fail("nested preset (missing 'end')");
      if (toks.size() != 2) err.fail("preset takes exactly one name");
      const std::string& name = toks[1];
      if (name == kNoPreset) err.fail("'none' is the identity and cannot be defined");
      if (!is_known_preset(name)) err.fail("'" + name + "' is not a known preset name");
      if (reg.presets_.count(name)) err.fail("duplicate preset '" + name + "'");
      current = &reg.presets_[name];
      current->name = name;
    } else if (toks[0] == "end") {
      if (!current) err.fail("'end' without 'preset'");
      if (toks.size() != 1) err.fail("'end' takes no arguments");
      if (current->ops.empty()) err.fail("preset '" + current->name + "' has no operations");
      current = nullptr;
    } else {
      if (!current) err.fail("directive outside a preset block");
      current->ops.push_back(parse_op(toks, err));
    }
  }
  if (current) {
    throw Error(ErrorKind::kInvalidInput,
                std::string(source) + ": preset '" + current->name + "' is missing 'end'");
  }
  std::vector<std::string> missing;
  for (auto name : kFilterPresets) {
    if (name != kNoPreset && !reg.presets_.count(name)) missing.emplace_back(name);
  }
  if (!missing.empty()) {
    std::string msg = std::string(source) + ": missing preset definition(s):";
    for (const auto& m : missing) msg += " " + m;
    throw Error(ErrorKind::kInvalidInput, msg, missing);
  }
  return reg;
}

PresetRegistry PresetRegistry::load(const std::string& path) { return parse(read_file(path), path); }

const PresetRegistry& PresetRegistry::builtin() {
  static const PresetRegistry reg = parse(embedded_asset("presets.txt"), "presets.txt");
  return reg;
}

const PresetDefinition* PresetRegistry::find(std::string_view name) const {
  if (name == kNoPreset) return nullptr;
  const auto it = presets_.find(name);
  if (it == presets_.end()) {
    throw Error(ErrorKind::kUnknownPreset, "preset '" + std::string(name) + "' not in registry",
                {std::string(name)});
  }
  return &it->second;
}

}  // namespace tonekit
