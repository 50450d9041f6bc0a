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

// Randomized invariants. Seeds are fixed so failures reproduce.

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "emtest/analytic.hpp"
#include "emtest/beamform.hpp"
#include "emtest/focusing.hpp"
#include "emtest/metrology.hpp"
#include "emtest/record.hpp"
#include "oracles.hpp"

using emtest::Medium;
using emtest::PlaneWave;
using emtest::SphericalWave;
using emtest::Vec3;
using emtest::WaveSource;
using oracle::kPi;

namespace {

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  Vec3 unit() {
    std::normal_distribution<double> n;
    return Vec3(n(rng), n(rng), n(rng)).normalized();
  }
  Vec3 point(double scale) { return unit() * uniform(0.0, scale); }
  WaveSource source(double f) {
    if (uniform(0, 1) < 0.5) return PlaneWave{uniform(0.1, 2.0), f, unit(), uniform(-kPi, kPi)};
    return SphericalWave{unit() * uniform(1.0, 3.0), uniform(0.1, 2.0), uniform(0.2, 1.0), f, uniform(-kPi, kPi)};
  }
};

}  // namespace

TEST_CASE("superposition is linear") {
  Gen g(1);
  const Medium m{};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<WaveSource> a{g.source(g.uniform(50, 5000)), g.source(g.uniform(50, 5000))};
    std::vector<WaveSource> b{g.source(g.uniform(50, 5000))};
    std::vector<WaveSource> both = a;
    both.insert(both.end(), b.begin(), b.end());
    const Vec3 x = g.point(0.5);
    const double t = g.uniform(0, 0.01);
    CHECK(std::abs(emtest::superpose(both, x, t, m) - emtest::superpose(a, x, t, m) - emtest::superpose(b, x, t, m)) <
          1e-12);
  }
}

TEST_CASE("phasor and time-domain pressure agree over a period") {
  Gen g(2);
  const Medium m{};
  for (int trial = 0; trial < 30; ++trial) {
    const double f = g.uniform(20, 8000);
    const auto s = g.source(f);
    const Vec3 x = g.point(0.5);
    const auto z = emtest::phasor_at(s, x, f, m);
    const double amp = emtest::arrival(s, x, m).amplitude;
    for (int k = 0; k < 64; ++k) {
      const double t = k / (64.0 * f);
      const double from_phasor = (z * std::polar(1.0, 2.0 * kPi * f * t)).real();
      CHECK(std::abs(from_phasor - emtest::pressure(s, x, t, m)) < 1e-9 * amp);
    }
  }
}

TEST_CASE("spherical amplitude decays as 1/d") {
  Gen g(3);
  const Medium m{};
  for (int trial = 0; trial < 20; ++trial) {
    const SphericalWave s{g.point(1.0), g.uniform(0.1, 3), g.uniform(0.1, 2), 500.0, 0.0};
    const double k0 = s.p_ref * s.ref_dist;
    for (int i = 0; i < 10; ++i) {
      const Vec3 x = s.source_pos + g.unit() * g.uniform(0.01, 10.0);
      const double d = (x - s.source_pos).norm();
      CHECK(emtest::arrival(s, x, m).amplitude * d == doctest::Approx(k0).epsilon(1e-12));
    }
  }
}

TEST_CASE("rigid motion of array and sources leaves responses unchanged") {
  Gen g(4);
  const Medium m{340.0};
  const auto base = emtest::spherical_em(0.1, 256);
  const auto cube = emtest::cubic_em(0.1);
  for (int trial = 0; trial < 10; ++trial) {
    const emtest::Mat3 rot = Eigen::AngleAxisd(g.uniform(0, kPi), g.unit()).toRotationMatrix();
    const Vec3 shift = g.point(2.0);
    const double f = g.uniform(100, 4000);
    const auto s = g.source(f);
    const auto s2 = emtest::transformed(s, rot, shift, m);
    for (const auto* geo : {&base, &cube}) {
      const auto moved = geo->moved(rot, shift);
      const auto a = emtest::steady_response(*geo, s, f, m);
      const auto b = emtest::steady_response(moved, s2, f, m);
      CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)));
    }
    const Vec3 dir = g.unit();
    const double ta = emtest::numeric_transfer_at(base, emtest::PlaneStimulus{dir}, f, m);
    const double tb = emtest::numeric_transfer_at(base.moved(rot, shift), emtest::PlaneStimulus{rot * dir}, f, m);
    CHECK(std::abs(ta - tb) < 1e-9);
  }
}

TEST_CASE("DC normalization of numeric transfer") {
  Gen g(5);
  const Medium m{};
  const auto sphere = emtest::spherical_em(0.1, 300);
  const auto hemi = emtest::apply_aperture(sphere, emtest::Aperture::hemisphere(g.unit()));
  for (const auto* geo : {&sphere, &hemi}) {
    for (int trial = 0; trial < 5; ++trial) {
      CHECK(emtest::numeric_transfer_at(*geo, emtest::PlaneStimulus{g.unit()}, 0.0, m) == doctest::Approx(1.0));
      CHECK(emtest::numeric_transfer_at(*geo, emtest::PointStimulus{g.unit() * 0.5}, 0.0, m) == doctest::Approx(1.0));
    }
  }
  CHECK(emtest::transfer_sphere(0.0, 0.3, 343) == 1.0);
  CHECK(emtest::transfer_hemisphere(0.0, 0.3, 343) == 1.0);
  CHECK(emtest::resolution(0.0, 1000.0, 343) == 1.0);
}

TEST_CASE("sinc forms: bounds, evenness and sign changes at n*pi") {
  Gen g(6);
  const double r = 0.1;
  const double c = 340.0;
  for (int i = 0; i < 2000; ++i) {
    const double f = g.uniform(0, 20000);
    const double e = g.uniform(0, 0.2);
    for (double v : {emtest::transfer_sphere(f, r, c), emtest::transfer_hemisphere(f, r, c),
                     emtest::resolution(e, f, c), emtest::transfer_cap(f, r, 10.0, g.uniform(0.1, kPi), c)}) {
      CHECK(v >= -0.2173);
      CHECK(v <= 1.0);
    }
    CHECK(emtest::resolution(-e, f, c) == emtest::resolution(e, f, c));
    CHECK(emtest::transfer_sphere(-f, r, c) == emtest::transfer_sphere(f, r, c));
    CHECK(emtest::transfer_hemisphere(-f, r, c) == emtest::transfer_hemisphere(f, r, c));
    const double x = g.uniform(-30, 30);
    CHECK(emtest::sinc(-x) == emtest::sinc(x));
  }
  for (int n = 1; n <= 3; ++n) {
    const double fz = c * n / (2 * r);
    CHECK(emtest::transfer_sphere(fz * 0.99, r, c) * emtest::transfer_sphere(fz * 1.01, r, c) < 0);
    const double ez = c * n / (2 * 10000.0);
    CHECK(emtest::resolution(ez * 0.99, 10000.0, c) * emtest::resolution(ez * 1.01, 10000.0, c) < 0);
  }
}

TEST_CASE("focus delays stay non-negative and gains stay bounded") {
  Gen g(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const double r = g.uniform(0.01, 2.0);
    const double eta = g.uniform(0, 0.999) * r;
    const double c = g.uniform(300, 1500);
    const double psi = g.uniform(0, kPi);
    const auto p = emtest::focus_params(psi, eta, r, c, eta / c);
    CHECK(p.tau >= -1e-18);
    CHECK(p.gain >= r / (r + eta) * (1 - 1e-12));
    CHECK(p.gain <= r / (r - eta) * (1 + 1e-12));
  }
  const auto at_pi = emtest::focus_params(kPi, 0.05, 0.1, 340.0, 0.05 / 340.0);
  CHECK(std::abs(at_pi.tau) < 1e-18);
}

TEST_CASE("THD is scale invariant") {
  Gen g(8);
  const double fs = 48000.0;
  const double f0 = 1200.0;
  std::vector<double> x(4000);
  const double h2 = g.uniform(0, 0.1);
  const double h3 = g.uniform(0, 0.1);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double t = k / fs;
    x[k] = std::cos(2 * kPi * f0 * t) + h2 * std::cos(4 * kPi * f0 * t + 0.3) + h3 * std::sin(6 * kPi * f0 * t);
  }
  const auto base = emtest::thd(x, fs, f0);
  for (int trial = 0; trial < 10; ++trial) {
    const double s = std::exp(g.uniform(-10, 10));
    std::vector<double> y(x);
    for (auto& v : y) v *= s;
    const auto scaled = emtest::thd(y, fs, f0);
    CHECK(std::abs(scaled.thd - base.thd) <= 1e-12 * std::max(1.0, base.thd));
    CHECK(scaled.fundamental.amplitude == doctest::Approx(s * base.fundamental.amplitude).epsilon(1e-12));
    for (std::size_t k = 0; k < base.harmonics.size(); ++k) {
      CHECK(std::abs(scaled.harmonics[k].amplitude - s * base.harmonics[k].amplitude) <=
            1e-12 * s * base.fundamental.amplitude);
    }
  }
}

TEST_CASE("interferer suppression deepens with microphone count") {
  double previous = -1e9;
  for (int n : {256, 1024, 4096}) {
    emtest::DistortionSetup setup;
    setup.n_mics = n;
    setup.harmonic_levels = {0.01, 0.01};
    setup.interferer_ratio = 10.0;
    setup.medium = Medium{340.0};
    const double db = emtest::distortion_experiment(setup).suppression_db;
    MESSAGE("n=" << n << " suppression_db=" << db);
    CHECK(db >= previous * 0.9);
    previous = db;
  }
}
