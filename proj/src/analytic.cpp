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

#include "emtest/analytic.hpp"

#include <cmath>
#include <string>

#include "emtest/error.hpp"
#include "emtest/wavefield.hpp"

namespace emtest {

namespace {

void check_speed(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) fail(ErrorCode::kBadArgument, "sound speed must be > 0");
}

void check_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorCode::kBadRadius, "radius must be > 0, got " + std::to_string(r));
}

std::vector<double> odd_multiples(double base, int n_max) {
  if (n_max < 1) fail(ErrorCode::kBadArgument, "n_max must be >= 1, got " + std::to_string(n_max));
  std::vector<double> out;
  for (int n = 1; n <= n_max; n += 2) out.push_back(base * n);
  return out;
}

void check_edge(double d) {
  if (!(d > 0.0) || !std::isfinite(d)) fail(ErrorCode::kBadEdge, "cube edge must be > 0, got " + std::to_string(d));
}

}  // namespace

double sinc(double x) noexcept {
  const double x2 = x * x;
  if (x2 < 1e-12) return 1.0 - x2 / 6.0;
  return std::sin(x) / x;
}

std::vector<double> reject_freqs_cube_axis(double d, double c, int n_max) {
  check_edge(d);
  check_speed(c);
  return odd_multiples(c / (2.0 * d), n_max);
}

std::vector<double> reject_freqs_cube_diagonal(double d, double c, int n_max) {
  check_edge(d);
  check_speed(c);
  return odd_multiples(c / (std::sqrt(2.0) * d), n_max);
}

double transfer_sphere(double f, double r, double c) {
  check_radius(r);
  check_speed(c);
  return sinc(2.0 * kPi * f * r / c);
}

double transfer_hemisphere(double f, double r, double c) {
  check_radius(r);
  check_speed(c);
  return sinc(kPi * f * r / c);
}

double transfer_cap(double f, double r, double r_src, double phi0, double c) {
  check_radius(r);
  check_speed(c);
  if (!(r_src > r)) fail(ErrorCode::kBadGeometry, "source distance must exceed the sphere radius");
  if (!(phi0 > 0.0) || phi0 > kPi) fail(ErrorCode::kBadArgument, "cap half-angle must be in (0, pi]");

  const double alpha = r / r_src;
  const double cos_rim = std::cos(phi0);
  // Path-length spread across the cap, r_src*(sqrt(1 + a^2 - 2a cos phi0) - 1 + a),
  // with sqrt(q) - 1 rewritten as (q - 1)/(sqrt(q) + 1) so large r_src keeps
  // full precision.
  const double root = std::sqrt(1.0 + alpha * alpha - 2.0 * alpha * cos_rim);
  const double spread = r * ((alpha - 2.0 * cos_rim) / (root + 1.0) + 1.0);
  const double area_fraction = (1.0 - cos_rim) / 2.0;
  // const*sin(A)/B with const = area_fraction*alpha/(spread/r_src) and
  // A/B = (spread/r_src)/alpha collapses to area_fraction*sinc(A).
  return area_fraction * sinc(kPi * f * spread / c);
}

double transfer_cube(double f, double d, const Vec3& direction_local, double c) {
  check_edge(d);
  check_speed(c);
  if (std::abs(direction_local.norm() - 1.0) > 1e-12) fail(ErrorCode::kBadArgument, "direction must be a unit vector");
  double value = 1.0;
  for (int j = 0; j < 3; ++j) value *= std::cos(kPi * f * d * direction_local[j] / c);
  return value;
}

double resolution(double e0, double f, double c) {
  check_speed(c);
  return sinc(2.0 * kPi * f * e0 / c);
}

double resolution_radius(double f, double c) {
  check_speed(c);
  if (!(f > 0.0) || !std::isfinite(f)) fail(ErrorCode::kBadFrequency, "frequency must be > 0, got " + std::to_string(f));
  return c / (2.0 * f);
}

double fundamental_for_radius(double r, double c) {
  check_radius(r);
  check_speed(c);
  return c / (2.0 * r);
}

double noise_to_signal(double a_h_over_a_put, double f, double r, double c) {
  if (!(a_h_over_a_put >= 0.0)) fail(ErrorCode::kBadArgument, "pressure ratio must be >= 0");
  return a_h_over_a_put * transfer_sphere(f, r, c);
}

}  // namespace emtest
