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

#include "emtest/beamform.hpp"

#include <array>
#include <cmath>
#include <string>

#include "emtest/error.hpp"

namespace emtest {

namespace {

WaveSource unit_source(const Stimulus& stim, double f) {
  if (const auto* p = std::get_if<PlaneStimulus>(&stim)) {
    if (std::abs(p->direction.norm() - 1.0) > 1e-12) fail(ErrorCode::kBadArgument, "stimulus direction must be a unit vector");
    return PlaneWave{1.0, f, p->direction, 0.0};
  }
  return SphericalWave{std::get<PointStimulus>(stim).position, 1.0, 1.0, f, 0.0};
}

// Blackman-windowed sinc taps for fractional part mu in [0, 1). Tap t
// (t = -7..8) multiplies x[n - m - t] where m is the integer delay.
std::array<double, kDelayTaps> delay_taps(double mu) {
  constexpr int kHalf = kDelayTaps / 2;
  std::array<double, kDelayTaps> h{};
  double sum = 0.0;
  for (int j = 0; j < kDelayTaps; ++j) {
    const int t = j - (kHalf - 1);
    const double u = t - mu;
    const double window = 0.42 + 0.5 * std::cos(kPi * u / kHalf) + 0.08 * std::cos(2.0 * kPi * u / kHalf);
    h[j] = sinc(kPi * u) * window;
    sum += h[j];
  }
  for (auto& v : h) v /= sum;
  return h;
}

}  // namespace

Complex steady_response(const ArrayGeometry& g, const WaveSource& s, double f, const Medium& m) {
  validate(m);
  if (g.active_count() == 0) fail(ErrorCode::kNoActiveMics, "geometry has no active microphones");
  Complex sum{0.0, 0.0};
  for (const auto& mic : g.mics()) {
    if (!mic.active) continue;
    const Complex rot = std::polar(1.0, -2.0 * kPi * f * mic.delay);
    sum += mic.weight * mic.sensitivity * phasor_at(s, mic.pos, f, m) * rot;
  }
  return sum;
}

double numeric_transfer_at(const ArrayGeometry& g, const Stimulus& stim, double f, const Medium& m) {
  validate(m);
  if (g.active_count() == 0) fail(ErrorCode::kNoActiveMics, "geometry has no active microphones");
  if (!(f >= 0.0) || !std::isfinite(f)) fail(ErrorCode::kBadFrequency, "grid frequency must be >= 0");
  const WaveSource src = unit_source(stim, f > 0.0 ? f : 1.0);

  double dc = 0.0;
  double weighted_time = 0.0;
  for (const auto& mic : g.mics()) {
    if (!mic.active) continue;
    const Arrival a = arrival(src, mic.pos, m);
    const double gain = mic.weight * mic.sensitivity * a.amplitude;
    dc += gain;
    weighted_time += gain * (a.delay + mic.delay);
  }
  if (dc == 0.0) fail(ErrorCode::kBadArgument, "array has zero DC gain; transfer normalization undefined");
  const double tbar = weighted_time / dc;

  double re = 0.0;
  for (const auto& mic : g.mics()) {
    if (!mic.active) continue;
    const Arrival a = arrival(src, mic.pos, m);
    const double gain = mic.weight * mic.sensitivity * a.amplitude;
    re += gain * std::cos(2.0 * kPi * f * (a.delay + mic.delay - tbar));
  }
  return re / dc;
}

TransferCurve numeric_transfer(const ArrayGeometry& g, const Stimulus& stim, std::span<const double> f_grid,
                               const Medium& m) {
  if (f_grid.empty()) fail(ErrorCode::kEmptyGrid, "frequency grid is empty");
  for (std::size_t i = 1; i < f_grid.size(); ++i) {
    if (!(f_grid[i] > f_grid[i - 1])) fail(ErrorCode::kBadArgument, "frequency grid must be strictly ascending");
  }
  TransferCurve curve;
  curve.freqs.assign(f_grid.begin(), f_grid.end());
  curve.values.reserve(f_grid.size());
  for (double f : f_grid) curve.values.push_back(numeric_transfer_at(g, stim, f, m));
  return curve;
}

void accumulate_delayed(std::span<const double> x, double delay_samples, double gain, std::span<double> out) {
  if (out.size() != x.size()) fail(ErrorCode::kChannelMismatch, "delay output length differs from input length");
  if (!std::isfinite(delay_samples)) fail(ErrorCode::kBadArgument, "delay must be finite");
  if (gain == 0.0) return;
  const double whole = std::floor(delay_samples);
  const double mu = delay_samples - whole;
  const auto shift = static_cast<long long>(whole);
  const auto n = static_cast<long long>(x.size());

  if (mu == 0.0) {
    for (long long i = 0; i < n; ++i) {
      const long long src = i - shift;
      if (src >= 0 && src < n) out[i] += gain * x[src];
    }
    return;
  }
  const auto h = delay_taps(mu);
  constexpr int kFirst = -(kDelayTaps / 2 - 1);
  for (long long i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < kDelayTaps; ++j) {
      const long long src = i - shift - (kFirst + j);
      if (src >= 0 && src < n) acc += h[j] * x[src];
    }
    out[i] += gain * acc;
  }
}

std::vector<double> delay_series(std::span<const double> x, double delay_samples) {
  std::vector<double> out(x.size(), 0.0);
  accumulate_delayed(x, delay_samples, 1.0, out);
  return out;
}

std::vector<double> time_output(const ArrayGeometry& g, const AcousticRecord& rec) {
  if (rec.channel_count() != g.mic_count()) {
    fail(ErrorCode::kChannelMismatch, "record has " + std::to_string(rec.channel_count()) + " channels but geometry has " +
                                          std::to_string(g.mic_count()) + " microphones");
  }
  std::vector<double> out(rec.num_samples(), 0.0);
  const auto mics = g.mics();
  for (std::size_t i = 0; i < mics.size(); ++i) {
    if (!mics[i].active) continue;
    accumulate_delayed(rec.channel(i), mics[i].delay * rec.sample_rate(), mics[i].weight, out);
  }
  return out;
}

}  // namespace emtest
