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

#include <complex>
#include <span>
#include <variant>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace emtest {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct Medium {
  double c = 343.0;  // m/s
};

// Harmonic plane wave p0*cos(2*pi*f*(t - direction.x/c) + phase0).
struct PlaneWave {
  double p0 = 1.0;
  double f = 1000.0;
  Vec3 direction = Vec3::UnitX();
  double phase0 = 0.0;
};

// Point ("spot") source with 1/d spreading; p_ref is the amplitude at ref_dist.
struct SphericalWave {
  Vec3 source_pos = Vec3::Zero();
  double p_ref = 1.0;
  double ref_dist = 1.0;
  double f = 1000.0;
  double phase0 = 0.0;
};

using WaveSource = std::variant<PlaneWave, SphericalWave>;

// Amplitude and propagation delay of a source at a point: the pressure there
// is amplitude*cos(2*pi*f*(t - delay) + phase0). Delay may be negative for
// plane waves (points upstream of the origin).
struct Arrival {
  double amplitude;
  double delay;
};

void validate(const Medium& m);
void validate(const PlaneWave& w);
void validate(const SphericalWave& w);
void validate(const WaveSource& s);

double frequency(const WaveSource& s) noexcept;
double phase_at_origin(const WaveSource& s) noexcept;

Arrival arrival(const WaveSource& s, const Vec3& x, const Medium& m);

double plane_pressure(const PlaneWave& w, const Vec3& x, double t, const Medium& m);

// Throws EvaluationAtSource when x is within 1e-12 m of the source.
double spherical_pressure(const SphericalWave& w, const Vec3& x, double t, const Medium& m);

double pressure(const WaveSource& s, const Vec3& x, double t, const Medium& m);

// Steady-state phasor: pressure(x, t) == Re{phasor * exp(i*2*pi*f*t)}.
Complex phasor_at(const WaveSource& s, const Vec3& x, double f_expected, const Medium& m);

double superpose(std::span<const WaveSource> sources, const Vec3& x, double t, const Medium& m);

// Rigid motion x -> rotation*x + translation applied to a source. Plane waves
// get a phase offset so co-moving points see the same pressure history.
WaveSource transformed(const WaveSource& s, const Mat3& rotation, const Vec3& translation, const Medium& m);

}  // namespace emtest
