// Copyright 2026 The emtest Authors
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

#include "emtest/focusing.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <system_error>

#include "emtest/beamform.hpp"
#include "atomic_file.hpp"
#include "emtest/error.hpp"
#include "emtest/metrology.hpp"

namespace emtest {

namespace {

namespace fs = std::filesystem;


void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

double angle_between(const Vec3& a, const Vec3& b) {
  // atan2 form stays accurate near 0 and pi.
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

// Per-mic delays and gains for focusing a record on setting.target.
std::vector<FocusParams> mic_focus(const AcousticRecord& rec, const FocusSetting& s, double c) {
  std::vector<FocusParams> out;
  out.reserve(rec.channel_count());
  for (const auto& mic : rec.mics()) {
    const double psi = s.eta > 0.0 ? angle_between(mic.pos - rec.center(), s.axis) : 0.0;
    out.push_back(focus_params(psi, s.eta, rec.radius(), c, s.tau0));
  }
  return out;
}

std::size_t settle_begin(double max_delay_samples) {
  return static_cast<std::size_t>(std::ceil(max_delay_samples)) + kDelayTaps / 2;
}

}  // namespace

FocusSetting make_focus_setting(const Vec3& center, double radius, const Vec3& target, const Medium& m) {
  validate(m);
  const Vec3 offset = target - center;
  const double eta = offset.norm();
  if (!(eta < radius)) fail(ErrorCode::kFocusOutsideSphere, "focus target must lie strictly inside the array sphere");
  FocusSetting s;
  s.target = target;
  s.eta = eta;
  s.axis = eta > 0.0 ? Vec3(offset / eta) : Vec3::UnitZ();
  s.tau0 = eta / m.c;
  return s;
}

FocusParams focus_params(double psi, double eta, double r, double c, double tau0) {
  if (!(c > 0.0)) fail(ErrorCode::kBadArgument, "sound speed must be > 0");
  if (!(r > 0.0)) fail(ErrorCode::kBadRadius, "radius must be > 0");
  if (!(psi >= 0.0 && psi <= kPi)) fail(ErrorCode::kBadArgument, "psi must be in [0, pi]");
  if (!(eta >= 0.0)) fail(ErrorCode::kBadArgument, "eta must be >= 0");
  if (!(eta < r)) fail(ErrorCode::kFocusOutsideSphere, "virtual focus must lie strictly inside the sphere");
  if (!(tau0 >= eta / c * (1.0 - 1e-12))) fail(ErrorCode::kBadTau0, "tau0 must be >= eta / c");
  const double dist = std::sqrt(r * r + eta * eta - 2.0 * r * eta * std::cos(psi));
  return {(r - dist) / c + tau0, r / dist};
}

FocusedSeries virtual_focus(const AcousticRecord& rec, const Vec3& target, const Medium& m) {
  const FocusSetting setting = make_focus_setting(rec.center(), rec.radius(), target, m);
  const auto params = mic_focus(rec, setting, m.c);
  const double fs_hz = rec.sample_rate();

  FocusedSeries out;
  out.samples.assign(rec.num_samples(), 0.0);
  double max_delay = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double delay_samples = params[i].tau * fs_hz;
    max_delay = std::max(max_delay, delay_samples);
    accumulate_delayed(rec.channel(i), delay_samples, params[i].gain, out.samples);
  }
  const std::size_t n = out.samples.size();
  out.settled_begin = std::min(n, settle_begin(max_delay));
  out.settled_end = std::max(out.settled_begin, n > kDelayTaps / 2 ? n - (kDelayTaps / 2 - 1) : 0);
  return out;
}

FocusedSeries mechanical_refocus_oracle(const ArrayGeometry& g, std::span<const WaveSource> sources,
                                        const Vec3& target, double sample_rate, double duration, const Medium& m) {
  const FocusSetting setting = make_focus_setting(g.center(), g.radius(), target, m);
  const ArrayGeometry shifted = g.moved(Mat3::Identity(), target - g.center());
  const AcousticRecord rec = synth_record(shifted, sources, sample_rate, duration, m);
  const std::vector<double> uniform(g.mic_count(), setting.tau0);

  FocusedSeries out;
  out.samples = time_output(shifted.with_delays(uniform), rec);
  const std::size_t n = out.samples.size();
  out.settled_begin = std::min(n, settle_begin(setting.tau0 * sample_rate));
  out.settled_end = std::max(out.settled_begin, n > kDelayTaps / 2 ? n - (kDelayTaps / 2 - 1) : 0);
  return out;
}

namespace {

std::vector<Complex> channel_phasors(const AcousticRecord& rec, double freq) {
  std::vector<Complex> out;
  out.reserve(rec.channel_count());
  for (std::size_t i = 0; i < rec.channel_count(); ++i) {
    const ToneEstimate t = tone_estimate(rec.channel(i), rec.sample_rate(), freq);
    out.push_back(std::polar(t.amplitude, t.phase));
  }
  return out;
}

Complex focus_phasors(const AcousticRecord& rec, std::span<const Complex> phasors, const Vec3& target, double freq,
                      const Medium& m) {
  const FocusSetting setting = make_focus_setting(rec.center(), rec.radius(), target, m);
  const auto params = mic_focus(rec, setting, m.c);
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < params.size(); ++i) {
    sum += params[i].gain * phasors[i] * std::polar(1.0, -2.0 * kPi * freq * params[i].tau);
  }
  return sum;
}

}  // namespace

Complex focused_tone(const AcousticRecord& rec, const Vec3& target, double freq, const Medium& m) {
  const auto phasors = channel_phasors(rec, freq);
  return focus_phasors(rec, phasors, target, freq, m);
}

ImageMap image(const AcousticRecord& rec, std::span<const Vec3> grid, double analysis_freq, const Medium& m) {
  if (grid.empty()) fail(ErrorCode::kEmptyGrid, "image grid is empty");
  for (const auto& p : grid) {
    if (!((p - rec.center()).norm() < rec.radius())) {
      fail(ErrorCode::kFocusOutsideSphere, "every image grid point must lie strictly inside the array sphere");
    }
  }
  const auto phasors = channel_phasors(rec, analysis_freq);

  ImageMap map;
  map.grid_points.assign(grid.begin(), grid.end());
  map.analysis_freq = analysis_freq;
  map.values.reserve(grid.size());
  for (const auto& p : grid) map.values.push_back(std::abs(focus_phasors(rec, phasors, p, analysis_freq, m)));

  const double peak = *std::max_element(map.values.begin(), map.values.end());
  if (!(peak > 1e-300)) fail(ErrorCode::kZeroField, "record carries no energy at the analysis frequency");
  for (auto& v : map.values) v /= peak;
  return map;
}

PlanarGrid planar_grid(const Vec3& center, PlaneAxis axis, double offset, double extent, double step) {
  if (!(extent >= 0.0) || !std::isfinite(extent)) fail(ErrorCode::kBadArgument, "grid extent must be >= 0");
  if (!(step > 0.0) || !std::isfinite(step)) fail(ErrorCode::kBadArgument, "grid step must be > 0");
  const auto half = static_cast<long long>(std::floor(extent / step + 1e-9));
  const auto side = static_cast<std::size_t>(2 * half + 1);

  int normal = 2;
  int first = 0;
  int second = 1;
  if (axis == PlaneAxis::kX) {
    normal = 0;
    first = 1;
    second = 2;
  } else if (axis == PlaneAxis::kY) {
    normal = 1;
    first = 0;
    second = 2;
  }
  PlanarGrid grid;
  grid.width = side;
  grid.height = side;
  grid.points.reserve(side * side);
  for (long long row = -half; row <= half; ++row) {
    for (long long col = -half; col <= half; ++col) {
      Vec3 p;
      p[normal] = offset;
      p[first] = center[first] + static_cast<double>(col) * step;
      p[second] = center[second] + static_cast<double>(row) * step;
      grid.points.push_back(p);
    }
  }
  return grid;
}

void write_pgm(const ImageMap& map, std::size_t width, std::size_t height, const fs::path& path) {
  if (width * height != map.values.size() || width == 0) {
    fail(ErrorCode::kBadArgument, "PGM dimensions do not match the image map");
  }
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.reserve(out.size() + map.values.size());
  for (double v : map.values) {
    const double scaled = std::round(std::clamp(v, 0.0, 1.0) * 255.0);
    out.push_back(static_cast<char>(static_cast<unsigned char>(scaled)));
  }
  write_file_atomic(path, out);
}

void write_image_csv(const ImageMap& map, const fs::path& path) {
  std::string out = "x_m,y_m,z_m,value\n";
  for (std::size_t i = 0; i < map.values.size(); ++i) {
    const Vec3& p = map.grid_points[i];
    append_number(out, p.x());
    out.push_back(',');
    append_number(out, p.y());
    out.push_back(',');
    append_number(out, p.z());
    out.push_back(',');
    append_number(out, map.values[i]);
    out.push_back('\n');
  }
  write_file_atomic(path, out);
}

}  // namespace emtest
