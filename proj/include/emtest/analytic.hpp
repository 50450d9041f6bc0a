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

#include <vector>

#include "emtest/wavefield.hpp"

namespace emtest {

struct TransferCurve {
  std::vector<double> freqs;   // Hz
  std::vector<double> values;  // signed, dimensionless
};

// sin(x)/x with the removable singularity filled in (1 - x^2/6 for x^2 < 1e-12).
double sinc(double x) noexcept;

// Notches of an 8-mic cube for a plane wave along a cube axis: c*n/(2d),
// n = 1, 3, 5, ... <= n_max.
std::vector<double> reject_freqs_cube_axis(double d, double c, int n_max);

// Same for a wavefront parallel to a diagonal plane (M1, M3, M7, M5): c*n/(sqrt(2)*d).
std::vector<double> reject_freqs_cube_diagonal(double d, double c, int n_max);

// Full sphere: sinc(2*pi*f*r/c).
double transfer_sphere(double f, double r, double c);

// Illuminated hemisphere only: sinc(pi*f*r/c).
double transfer_hemisphere(double f, double r, double c);

// Spherical cap of half-angle phi0 facing a point source at distance r_src:
//   const * sin[(pi f r_src / c) * (sqrt(1 + a^2 - 2 a cos phi0) - 1 + a)] / (pi f r / c),
// a = r / r_src, with const fixed so the DC value equals the active area
// fraction (1 - cos phi0) / 2.
double transfer_cap(double f, double r, double r_src, double phi0, double c);

// Eight-vertex cube, plane wave with unit direction given in the cube's own
// frame: the vertex sum factorizes into prod_j cos(pi f d u_j / c). Zero at
// c n/(2d) for axis incidence and c n/(sqrt(2) d) for the diagonal plane.
double transfer_cube(double f, double d, const Vec3& direction_local, double c);

// Point-source offset response: sinc(2*pi*f*e0/c).
double resolution(double e0, double f, double c);

// Offset of the first zero of resolution(): c / (2f).
double resolution_radius(double f, double c);

// Frequency whose first sphere notch sits at radius r: c / (2r).
double fundamental_for_radius(double r, double c);

// (A_h / A_put) * transfer_sphere(f, r, c).
double noise_to_signal(double a_h_over_a_put, double f, double r, double c);

}  // namespace emtest
