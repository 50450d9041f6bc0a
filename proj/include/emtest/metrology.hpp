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

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "emtest/wavefield.hpp"

namespace emtest {

struct ToneEstimate {
  double freq = 0.0;       // Hz
  double amplitude = 0.0;  // same unit as the series
  double phase = 0.0;      // rad, for amplitude*cos(2 pi f n/fs + phase)
};

struct ThdReport {
  ToneEstimate fundamental;
  std::vector<ToneEstimate> harmonics;  // orders 2..k_max
  double thd = 0.0;
};

inline constexpr int kMinWindowPeriods = 8;
inline constexpr int kDefaultMaxHarmonic = 5;

// Largest window length <= n holding an integer number of periods of f.
// Throws WindowTooShort when fewer than 8 periods fit.
std::size_t tone_window_length(std::size_t n, double sample_rate, double f);

// Single-bin DFT projection at f over the integer-period rectangular window
// starting at series[0]. Exact for tones on the window's bins.
ToneEstimate tone_estimate(std::span<const double> series, double sample_rate, double f);

// thd = sqrt(sum_{k=2..k_max} A_k^2) / A_1, all orders measured on the
// window chosen for f0.
ThdReport thd(std::span<const double> series, double sample_rate, double f0, int k_max = kDefaultMaxHarmonic);

struct DistortionSetup {
  double r = 0.1;                       // sphere radius, m
  int n_mics = 4096;
  std::vector<double> harmonic_levels;  // amplitudes of orders 2, 3, ... relative to the fundamental
  double interferer_ratio = 0.0;        // external plane-wave pressure / PUT pressure at the surface
  bool interferer_odd_harmonics = false;
  Medium medium{};
};

struct DistortionReport {
  double f0_hz = 0.0;
  int n_mics = 0;
  double thd_truth = 0.0;
  double thd_single_mic = 0.0;
  double thd_em = 0.0;
  double suppression_db = 0.0;
};

// PUT at the sphere center radiating f0 = c/2r plus harmonics, with an
// external plane-wave interferer at f0. Compares THD from one mic against
// the summed array, and reports how far the array pushes the interferer
// down relative to a single mic.
DistortionReport distortion_experiment(const DistortionSetup& setup);

// {"thd_truth":..., "thd_single_mic":..., "thd_em":..., "suppression_db":..., "f0_hz":..., "n_mics":...}
std::string to_json(const DistortionReport& report);
void write_report_json(const DistortionReport& report, const std::filesystem::path& path);

}  // namespace emtest
