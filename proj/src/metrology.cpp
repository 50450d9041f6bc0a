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

#include "emtest/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "atomic_file.hpp"
#include "emtest/analytic.hpp"
#include "emtest/beamform.hpp"
#include "emtest/error.hpp"
#include "emtest/geometry.hpp"
#include "emtest/record.hpp"

namespace emtest {

namespace {

void check_tone_frequency(double sample_rate, double f) {
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) fail(ErrorCode::kBadArgument, "sample rate must be > 0");
  if (!(f > 0.0) || !std::isfinite(f)) fail(ErrorCode::kBadFrequency, "tone frequency must be > 0");
  if (!(f < sample_rate / 2.0)) fail(ErrorCode::kNyquistViolation, "tone frequency must be below Nyquist");
}

ToneEstimate project(std::span<const double> window, double sample_rate, double f) {
  const double cycles_per_sample = f / sample_rate;
  double re = 0.0;
  double im = 0.0;
  for (std::size_t n = 0; n < window.size(); ++n) {
    // Reduce the phase to one turn before scaling so long windows stay exact.
    const double turns = cycles_per_sample * static_cast<double>(n);
    const double arg = 2.0 * kPi * (turns - std::floor(turns));
    re += window[n] * std::cos(arg);
    im -= window[n] * std::sin(arg);
  }
  const double scale = 2.0 / static_cast<double>(window.size());
  re *= scale;
  im *= scale;
  return {f, std::hypot(re, im), std::atan2(im, re)};
}

double thd_ratio(const ToneEstimate& fundamental, std::span<const ToneEstimate> harmonics) {
  double power = 0.0;
  for (const auto& h : harmonics) power += h.amplitude * h.amplitude;
  return std::sqrt(power) / fundamental.amplitude;
}

}  // namespace

std::size_t tone_window_length(std::size_t n, double sample_rate, double f) {
  check_tone_frequency(sample_rate, f);
  const double samples_per_period = sample_rate / f;
  const auto max_periods = static_cast<long long>(std::floor(static_cast<double>(n) / samples_per_period + 1e-9));
  if (max_periods < kMinWindowPeriods) {
    fail(ErrorCode::kWindowTooShort, "series holds " + std::to_string(max_periods) + " periods of " + std::to_string(f) +
                                         " Hz; at least " + std::to_string(kMinWindowPeriods) + " required");
  }
  for (long long p = max_periods; p >= kMinWindowPeriods; --p) {
    const double exact = static_cast<double>(p) * samples_per_period;
    const double rounded = std::round(exact);
    if (std::abs(exact - rounded) <= 1e-9 * exact && rounded <= static_cast<double>(n)) {
      return static_cast<std::size_t>(rounded);
    }
  }
  // No integer-period length exists; accept a little leakage.
  return std::min(n, static_cast<std::size_t>(std::floor(static_cast<double>(max_periods) * samples_per_period)));
}

ToneEstimate tone_estimate(std::span<const double> series, double sample_rate, double f) {
  const std::size_t len = tone_window_length(series.size(), sample_rate, f);
  return project(series.first(len), sample_rate, f);
}

ThdReport thd(std::span<const double> series, double sample_rate, double f0, int k_max) {
  if (k_max < 2) fail(ErrorCode::kBadArgument, "k_max must be >= 2");
  check_tone_frequency(sample_rate, f0);
  if (!(k_max * f0 < sample_rate / 2.0)) {
    fail(ErrorCode::kNyquistViolation, "harmonic " + std::to_string(k_max) + " of " + std::to_string(f0) +
                                           " Hz is at or above Nyquist");
  }
  const auto window = series.first(tone_window_length(series.size(), sample_rate, f0));

  ThdReport report;
  report.fundamental = project(window, sample_rate, f0);
  if (report.fundamental.amplitude < 1e-12) fail(ErrorCode::kZeroFundamental, "fundamental amplitude is zero");
  for (int k = 2; k <= k_max; ++k) report.harmonics.push_back(project(window, sample_rate, k * f0));
  report.thd = thd_ratio(report.fundamental, report.harmonics);
  return report;
}

DistortionReport distortion_experiment(const DistortionSetup& setup) {
  validate(setup.medium);
  if (!(setup.interferer_ratio >= 0.0)) fail(ErrorCode::kBadArgument, "interferer ratio must be >= 0");
  for (double level : setup.harmonic_levels) {
    if (!(level >= 0.0)) fail(ErrorCode::kBadArgument, "harmonic levels must be >= 0");
  }
  const double c = setup.medium.c;
  const double f0 = fundamental_for_radius(setup.r, c);
  const int k_max = std::max(kDefaultMaxHarmonic, static_cast<int>(setup.harmonic_levels.size()) + 1);
  const double sample_rate = 64.0 * f0;
  const double duration = 32.0 / f0;
  const Vec3 interferer_dir = Vec3(1.0, 0.3, 0.2).normalized();

  const ArrayGeometry g = spherical_em(setup.r, setup.n_mics);

  // PUT: unit pressure on the array surface at the fundamental.
  std::vector<WaveSource> sources;
  sources.push_back(SphericalWave{g.center(), 1.0, setup.r, f0, 0.0});
  for (std::size_t i = 0; i < setup.harmonic_levels.size(); ++i) {
    const double order = static_cast<double>(i + 2);
    if (setup.harmonic_levels[i] > 0.0) {
      sources.push_back(SphericalWave{g.center(), setup.harmonic_levels[i], setup.r, order * f0, 0.0});
    }
  }
  if (setup.interferer_ratio > 0.0) {
    sources.push_back(PlaneWave{setup.interferer_ratio, f0, interferer_dir, 0.0});
    if (setup.interferer_odd_harmonics) {
      for (int k = 3; k <= k_max; k += 2) {
        sources.push_back(PlaneWave{setup.interferer_ratio, k * f0, interferer_dir, 0.0});
      }
    }
  }

  const AcousticRecord rec = synth_record(g, sources, sample_rate, duration, setup.medium);
  const std::vector<double> em = time_output(g, rec);

  DistortionReport report;
  report.f0_hz = f0;
  report.n_mics = setup.n_mics;
  double truth_power = 0.0;
  for (double level : setup.harmonic_levels) truth_power += level * level;
  report.thd_truth = std::sqrt(truth_power);
  report.thd_single_mic = thd(rec.channel(0), sample_rate, f0, k_max).thd;
  report.thd_em = thd(em, sample_rate, f0, k_max).thd;

  // Suppression is a property of the array, so it is measured with a unit
  // interferer alone regardless of interferer_ratio.
  const std::vector<WaveSource> probe{PlaneWave{1.0, f0, interferer_dir, 0.0}};
  const AcousticRecord probe_rec = synth_record(g, probe, sample_rate, duration, setup.medium);
  const double single = tone_estimate(probe_rec.channel(0), sample_rate, f0).amplitude;
  double dc_gain = 0.0;
  for (const auto& mic : g.mics()) dc_gain += mic.weight * mic.sensitivity;
  const double residual = tone_estimate(time_output(g, probe_rec), sample_rate, f0).amplitude / dc_gain;
  report.suppression_db = 20.0 * std::log10(single / std::max(residual, 1e-16 * single));
  return report;
}

std::string to_json(const DistortionReport& report) {
  const nlohmann::ordered_json j = {
      {"thd_truth", report.thd_truth},           {"thd_single_mic", report.thd_single_mic},
      {"thd_em", report.thd_em},                 {"suppression_db", report.suppression_db},
      {"f0_hz", report.f0_hz},                   {"n_mics", report.n_mics},
  };
  return j.dump(2) + "\n";
}

void write_report_json(const DistortionReport& report, const std::filesystem::path& path) {
  write_file_atomic(path, to_json(report));
}

}  // namespace emtest
