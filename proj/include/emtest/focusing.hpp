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
#include <vector>

#include "emtest/geometry.hpp"
#include "emtest/record.hpp"
#include "emtest/wavefield.hpp"

namespace emtest {

struct FocusSetting {
  Vec3 target = Vec3::Zero();  // O'
  double eta = 0.0;            // |O O'|, m
  Vec3 axis = Vec3::UnitZ();   // unit vector O -> O' (UnitZ when eta == 0)
  double tau0 = 0.0;           // s, >= eta / c
};

// Uses the minimal tau0 = eta / c. Throws FocusOutsideSphere unless
// |target - center| < radius.
FocusSetting make_focus_setting(const Vec3& center, double radius, const Vec3& target, const Medium& m);

struct FocusParams {
  double tau = 0.0;   // s
  double gain = 1.0;  // dimensionless
};

// With D = sqrt(r^2 + eta^2 - 2 r eta cos psi), the distance from the mic to
// the virtual focus: tau = (r - D)/c + tau0, gain = r / D.
FocusParams focus_params(double psi, double eta, double r, double c, double tau0);

// A refocused tester output. Samples in [settled_begin, settled_end) see no
// zero padding from any channel's delay filter.
struct FocusedSeries {
  std::vector<double> samples;
  std::size_t settled_begin = 0;
  std::size_t settled_end = 0;

  std::span<const double> settled() const {
    return std::span<const double>(samples).subspan(settled_begin, settled_end - settled_begin);
  }
};

// Per-mic rule: psi_i = angle(pos_i - O, target - O), then delay channel i by
// tau_i, scale by gain_i and sum in channel order.
FocusedSeries virtual_focus(const AcousticRecord& rec, const Vec3& target, const Medium& m);

// Ground truth: translate the whole array so its center sits on target,
// record the same sources afresh and sum with a uniform delay tau0 = eta/c.
FocusedSeries mechanical_refocus_oracle(const ArrayGeometry& g, std::span<const WaveSource> sources,
                                        const Vec3& target, double sample_rate, double duration, const Medium& m);

// Steady-state complex tone of virtual_focus(rec, target) at freq, computed
// from per-channel phasors rotated by exp(-i 2 pi f tau_i).
Complex focused_tone(const AcousticRecord& rec, const Vec3& target, double freq, const Medium& m);

struct ImageMap {
  std::vector<Vec3> grid_points;
  std::vector<double> values;  // normalized to max 1
  double analysis_freq = 0.0;
};

ImageMap image(const AcousticRecord& rec, std::span<const Vec3> grid, double analysis_freq, const Medium& m);

enum class PlaneAxis { kX, kY, kZ };

// Square grid in the plane <axis> = offset, centered on the projection of
// center, spanning [-extent, extent] along both in-plane axes with the given
// step. Points are row-major: columns follow the first in-plane axis (x, or y
// for an x-plane), rows the second, both ascending.
struct PlanarGrid {
  std::vector<Vec3> points;
  std::size_t width = 0;
  std::size_t height = 0;
};

PlanarGrid planar_grid(const Vec3& center, PlaneAxis axis, double offset, double extent, double step);

// Binary PGM (P5), 8-bit, values scaled by 255 and rounded.
void write_pgm(const ImageMap& map, std::size_t width, std::size_t height, const std::filesystem::path& path);

// CSV with header x_m,y_m,z_m,value.
void write_image_csv(const ImageMap& map, const std::filesystem::path& path);

}  // namespace emtest
