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
#include <span>
#include <vector>

#include "emtest/wavefield.hpp"

namespace emtest {

struct Microphone {
  int id = 0;
  Vec3 pos = Vec3::Zero();
  double weight = 1.0;
  double delay = 0.0;        // s, >= 0
  double sensitivity = 1.0;  // V/Pa, > 0
  bool active = true;
};

enum class ArrayKind { kCube, kSphere };

// An enclosing-microphone array. Immutable once built; the with_*/moved
// helpers return modified copies and re-check the invariants.
class ArrayGeometry {
 public:
  // size is the cube edge d or the sphere radius r.
  ArrayGeometry(ArrayKind kind, double size, const Vec3& center, const Mat3& orientation,
                std::vector<Microphone> mics);

  ArrayKind kind() const noexcept { return kind_; }
  double size() const noexcept { return size_; }
  // Distance from the center to every microphone.
  double radius() const noexcept;
  const Vec3& center() const noexcept { return center_; }
  const Mat3& orientation() const noexcept { return orientation_; }
  std::span<const Microphone> mics() const noexcept { return mics_; }
  std::size_t mic_count() const noexcept { return mics_.size(); }
  std::size_t active_count() const noexcept;

  ArrayGeometry with_weights(std::span<const double> weights) const;
  ArrayGeometry with_delays(std::span<const double> delays) const;
  ArrayGeometry with_sensitivities(std::span<const double> sensitivities) const;
  // Rigid motion x -> rotation*x + translation.
  ArrayGeometry moved(const Mat3& rotation, const Vec3& translation) const;

 private:
  void check() const;

  ArrayKind kind_;
  double size_;
  Vec3 center_;
  Mat3 orientation_;
  std::vector<Microphone> mics_;
};

struct Aperture {
  enum class Mode { kFull, kHemisphere, kCap };

  Mode mode = Mode::kFull;
  Vec3 toward = Vec3::UnitZ();
  double half_angle = kPi;

  static Aperture full() { return {}; }
  static Aperture hemisphere(const Vec3& u) { return {Mode::kHemisphere, u, kPi / 2.0}; }
  static Aperture cap(const Vec3& u, double phi0) { return {Mode::kCap, u, phi0}; }
};

// Local frame: M4 at the origin, M1/M3/M8 on +X/+Y/+Z. Mic index k carries
// label M(k+1):
//   M1 (d,0,0)  M2 (d,d,0)  M3 (0,d,0)  M4 (0,0,0)
//   M5 (d,0,d)  M6 (d,d,d)  M7 (0,d,d)  M8 (0,0,d)
// The cube center (d/2,d/2,d/2) is mapped to center, then rotated by
// orientation about it.
ArrayGeometry cubic_em(double d, const Vec3& center = Vec3::Zero(), const Mat3& orientation = Mat3::Identity());

// Cube vertex in the local frame above (index 0..7).
Vec3 cube_local_vertex(int index, double d);

// Fibonacci lattice: z_k = 1 - (2k+1)/N, azimuth_k = 2*pi*k*(1 - 1/golden).
ArrayGeometry spherical_em(double r, int n_mics, const Vec3& center = Vec3::Zero());

ArrayGeometry apply_aperture(const ArrayGeometry& g, const Aperture& a);

}  // namespace emtest
