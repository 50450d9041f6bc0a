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

#include "emtest/geometry.hpp"

#include <cmath>
#include <string>

#include "emtest/error.hpp"

namespace emtest {

namespace {

template <typename T, typename Setter>
ArrayGeometry with_field(const ArrayGeometry& g, std::span<const T> values, Setter set) {
  if (values.size() != g.mic_count()) {
    fail(ErrorCode::kChannelMismatch,
         "expected " + std::to_string(g.mic_count()) + " values, got " + std::to_string(values.size()));
  }
  std::vector<Microphone> mics(g.mics().begin(), g.mics().end());
  for (std::size_t i = 0; i < mics.size(); ++i) set(mics[i], values[i]);
  return ArrayGeometry(g.kind(), g.size(), g.center(), g.orientation(), std::move(mics));
}

}  // namespace

ArrayGeometry::ArrayGeometry(ArrayKind kind, double size, const Vec3& center, const Mat3& orientation,
                             std::vector<Microphone> mics)
    : kind_(kind), size_(size), center_(center), orientation_(orientation), mics_(std::move(mics)) {
  check();
}

double ArrayGeometry::radius() const noexcept {
  return kind_ == ArrayKind::kCube ? size_ * std::sqrt(3.0) / 2.0 : size_;
}

std::size_t ArrayGeometry::active_count() const noexcept {
  std::size_t n = 0;
  for (const auto& m : mics_) n += m.active ? 1 : 0;
  return n;
}

void ArrayGeometry::check() const {
  if (kind_ == ArrayKind::kCube) {
    if (!(size_ > 0.0)) fail(ErrorCode::kBadEdge, "cube edge must be > 0");
    if (mics_.size() != 8) fail(ErrorCode::kBadGeometry, "a cubic array has exactly 8 microphones");
  } else if (!(size_ > 0.0)) {
    fail(ErrorCode::kBadRadius, "sphere radius must be > 0");
  }
  const double tol = kind_ == ArrayKind::kCube ? 1e-12 * std::max(1.0, size_) : 1e-9;
  const double r = radius();
  for (const auto& m : mics_) {
    if (std::abs((m.pos - center_).norm() - r) > tol) {
      fail(ErrorCode::kBadGeometry, "microphone " + std::to_string(m.id) + " is off the array surface");
    }
    if (!(m.sensitivity > 0.0)) fail(ErrorCode::kBadArgument, "sensitivity must be > 0");
    if (!std::isfinite(m.weight)) fail(ErrorCode::kBadArgument, "weight must be finite");
    if (!(m.delay >= 0.0) || !std::isfinite(m.delay)) fail(ErrorCode::kBadArgument, "delay must be >= 0");
  }
  if (active_count() == 0) fail(ErrorCode::kNoActiveMics, "geometry has no active microphones");
}

ArrayGeometry ArrayGeometry::with_weights(std::span<const double> weights) const {
  return with_field(*this, weights, [](Microphone& m, double v) { m.weight = v; });
}

ArrayGeometry ArrayGeometry::with_delays(std::span<const double> delays) const {
  return with_field(*this, delays, [](Microphone& m, double v) { m.delay = v; });
}

ArrayGeometry ArrayGeometry::with_sensitivities(std::span<const double> sensitivities) const {
  return with_field(*this, sensitivities, [](Microphone& m, double v) { m.sensitivity = v; });
}

ArrayGeometry ArrayGeometry::moved(const Mat3& rotation, const Vec3& translation) const {
  std::vector<Microphone> mics = mics_;
  for (auto& m : mics) m.pos = rotation * m.pos + translation;
  return ArrayGeometry(kind_, size_, rotation * center_ + translation, rotation * orientation_, std::move(mics));
}

Vec3 cube_local_vertex(int index, double d) {
  static constexpr int kCorners[8][3] = {
      {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 0},
      {1, 0, 1}, {1, 1, 1}, {0, 1, 1}, {0, 0, 1},
  };
  if (index < 0 || index > 7) fail(ErrorCode::kBadArgument, "cube vertex index must be in 0..7");
  const auto& c = kCorners[index];
  return Vec3(c[0] * d, c[1] * d, c[2] * d);
}

ArrayGeometry cubic_em(double d, const Vec3& center, const Mat3& orientation) {
  if (!(d > 0.0) || !std::isfinite(d)) fail(ErrorCode::kBadEdge, "cube edge must be > 0, got " + std::to_string(d));
  const Vec3 half = Vec3::Constant(d / 2.0);
  std::vector<Microphone> mics(8);
  for (int k = 0; k < 8; ++k) {
    mics[k].id = k;
    mics[k].pos = center + orientation * (cube_local_vertex(k, d) - half);
  }
  return ArrayGeometry(ArrayKind::kCube, d, center, orientation, std::move(mics));
}

ArrayGeometry spherical_em(double r, int n_mics, const Vec3& center) {
  if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorCode::kBadRadius, "sphere radius must be > 0, got " + std::to_string(r));
  if (n_mics < 4) fail(ErrorCode::kTooFewMics, "a spherical array needs at least 4 microphones, got " + std::to_string(n_mics));
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  const double turn = 1.0 - 1.0 / golden;
  std::vector<Microphone> mics(static_cast<std::size_t>(n_mics));
  for (int k = 0; k < n_mics; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / n_mics;
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    // Reduce k*turn to [0,1) before scaling; keeps large k accurate.
    const double frac = k * turn - std::floor(k * turn);
    const double az = 2.0 * kPi * frac;
    mics[k].id = k;
    mics[k].pos = center + r * Vec3(s * std::cos(az), s * std::sin(az), z);
  }
  return ArrayGeometry(ArrayKind::kSphere, r, center, Mat3::Identity(), std::move(mics));
}

ArrayGeometry apply_aperture(const ArrayGeometry& g, const Aperture& a) {
  if (a.mode == Aperture::Mode::kFull) {
    std::vector<Microphone> mics(g.mics().begin(), g.mics().end());
    for (auto& m : mics) m.active = true;
    return ArrayGeometry(g.kind(), g.size(), g.center(), g.orientation(), std::move(mics));
  }
  if (g.kind() == ArrayKind::kCube) fail(ErrorCode::kApertureOnCube, "hemisphere/cap apertures apply to spherical arrays only");
  if (std::abs(a.toward.norm() - 1.0) > 1e-12) fail(ErrorCode::kBadArgument, "aperture direction must be a unit vector");
  const double phi0 = a.mode == Aperture::Mode::kHemisphere ? kPi / 2.0 : a.half_angle;
  if (!(phi0 > 0.0) || phi0 > kPi) fail(ErrorCode::kBadArgument, "cap half-angle must be in (0, pi]");

  const double cos_rim = std::cos(phi0);
  std::vector<Microphone> mics(g.mics().begin(), g.mics().end());
  for (auto& m : mics) {
    const Vec3 rel = m.pos - g.center();
    const double cos_angle = rel.dot(a.toward) / rel.norm();
    m.active = phi0 >= kPi || cos_angle >= cos_rim - 1e-12;
  }
  return ArrayGeometry(g.kind(), g.size(), g.center(), g.orientation(), std::move(mics));
}

}  // namespace emtest
