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

#include "emtest/wavefield.hpp"

#include <cmath>
#include <string>

#include "emtest/error.hpp"

namespace emtest {

namespace {

constexpr double kSourceExclusion = 1e-12;

void check_frequency(double f) {
  if (!(f > 0.0) || !std::isfinite(f)) fail(ErrorCode::kBadFrequency, "source frequency must be > 0, got " + std::to_string(f));
}

}  // namespace

void validate(const Medium& m) {
  if (!(m.c > 0.0) || !std::isfinite(m.c)) fail(ErrorCode::kBadArgument, "sound speed must be > 0");
}

void validate(const PlaneWave& w) {
  check_frequency(w.f);
  if (!(w.p0 >= 0.0)) fail(ErrorCode::kBadArgument, "plane wave amplitude must be >= 0");
  if (std::abs(w.direction.norm() - 1.0) > 1e-12) fail(ErrorCode::kBadArgument, "plane wave direction must be a unit vector");
}

void validate(const SphericalWave& w) {
  check_frequency(w.f);
  if (!(w.ref_dist > 0.0)) fail(ErrorCode::kBadArgument, "spherical wave reference distance must be > 0");
  if (!std::isfinite(w.p_ref)) fail(ErrorCode::kBadArgument, "spherical wave amplitude must be finite");
}

void validate(const WaveSource& s) {
  std::visit([](const auto& w) { validate(w); }, s);
}

double frequency(const WaveSource& s) noexcept {
  return std::visit([](const auto& w) { return w.f; }, s);
}

double phase_at_origin(const WaveSource& s) noexcept {
  return std::visit([](const auto& w) { return w.phase0; }, s);
}

Arrival arrival(const WaveSource& s, const Vec3& x, const Medium& m) {
  if (const auto* pw = std::get_if<PlaneWave>(&s)) {
    return {pw->p0, pw->direction.dot(x) / m.c};
  }
  const auto& sw = std::get<SphericalWave>(s);
  const double d = (x - sw.source_pos).norm();
  if (d < kSourceExclusion) fail(ErrorCode::kEvaluationAtSource, "pressure evaluated at the spherical source position");
  return {sw.p_ref * sw.ref_dist / d, d / m.c};
}

double plane_pressure(const PlaneWave& w, const Vec3& x, double t, const Medium& m) {
  return w.p0 * std::cos(2.0 * kPi * w.f * (t - w.direction.dot(x) / m.c) + w.phase0);
}

double spherical_pressure(const SphericalWave& w, const Vec3& x, double t, const Medium& m) {
  const double d = (x - w.source_pos).norm();
  if (d < kSourceExclusion) fail(ErrorCode::kEvaluationAtSource, "pressure evaluated at the spherical source position");
  return (w.p_ref * w.ref_dist / d) * std::cos(2.0 * kPi * w.f * (t - d / m.c) + w.phase0);
}

double pressure(const WaveSource& s, const Vec3& x, double t, const Medium& m) {
  if (const auto* pw = std::get_if<PlaneWave>(&s)) return plane_pressure(*pw, x, t, m);
  return spherical_pressure(std::get<SphericalWave>(s), x, t, m);
}

Complex phasor_at(const WaveSource& s, const Vec3& x, double f_expected, const Medium& m) {
  const double f = frequency(s);
  if (std::abs(f - f_expected) > 1e-12 * std::max(1.0, std::abs(f))) {
    fail(ErrorCode::kFrequencyMismatch,
         "source frequency " + std::to_string(f) + " Hz does not match " + std::to_string(f_expected) + " Hz");
  }
  const Arrival a = arrival(s, x, m);
  return std::polar(a.amplitude, phase_at_origin(s) - 2.0 * kPi * f * a.delay);
}

double superpose(std::span<const WaveSource> sources, const Vec3& x, double t, const Medium& m) {
  double sum = 0.0;
  for (const auto& s : sources) sum += pressure(s, x, t, m);
  return sum;
}

WaveSource transformed(const WaveSource& s, const Mat3& rotation, const Vec3& translation, const Medium& m) {
  if (const auto* pw = std::get_if<PlaneWave>(&s)) {
    PlaneWave out = *pw;
    out.direction = (rotation * pw->direction).normalized();
    out.phase0 = pw->phase0 + 2.0 * kPi * pw->f * out.direction.dot(translation) / m.c;
    return out;
  }
  SphericalWave out = std::get<SphericalWave>(s);
  out.source_pos = rotation * out.source_pos + translation;
  return out;
}

}  // namespace emtest
