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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "emtest/analytic.hpp"
#include "emtest/beamform.hpp"
#include "emtest/error.hpp"
#include "emtest/focusing.hpp"
#include "emtest/metrology.hpp"
#include "emtest/record.hpp"

namespace fs = std::filesystem;
using namespace emtest;

namespace {

constexpr double kC = 340.0;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

// 1. Axis-incident cube: exact nulls at odd multiples of c/2d.
Outcome cube_axis_null() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto g = cubic_em(0.1);
  const Medium m{kC};
  double worst_null = 0.0;
  for (double f : {1700.0, 5100.0, 8500.0}) {
    worst_null = std::max(worst_null, std::abs(steady_response(g, PlaneWave{1.0, f, Vec3::UnitX(), 0.0}, f, m)) / 8.0);
  }
  const double off = std::abs(steady_response(g, PlaneWave{1.0, 850.0, Vec3::UnitX(), 0.0}, 850.0, m)) / 8.0;
  const double secs = seconds_since(t0);
  return {worst_null < 1e-12 && off > 0.1 && secs < 1.0,
          fmt("max|R|/8p0 at 1700/5100/8500 Hz = %.2e (<1e-12), at 850 Hz = %.4f (>0.1), %.3f s (<1 s)", worst_null,
              off, secs)};
}

// 2. Wavefront parallel to the M1-M3-M7-M5 plane.
Outcome cube_diagonal_null() {
  const double d = 0.1;
  const auto g = cubic_em(d);
  const auto& mics = g.mics();
  // Normal of the plane through M1, M3, M7 (M5 is coplanar).
  const Vec3 normal = (mics[2].pos - mics[0].pos).cross(mics[6].pos - mics[0].pos).normalized();
  const double coplanar = std::abs((mics[4].pos - mics[0].pos).dot(normal));
  const double f = reject_freqs_cube_diagonal(d, kC, 1).front();
  const double rel = std::abs(steady_response(g, PlaneWave{1.0, f, normal, 0.0}, f, Medium{kC})) / 8.0;
  return {rel < 1e-9 && coplanar < 1e-15 && std::abs(f - kC / (std::sqrt(2.0) * d)) < 1e-9,
          fmt("f = %.4f Hz, |R|/8p0 = %.2e (<1e-9)", f, rel)};
}

std::vector<double> kr_grid(double r, double kr_max, int steps) {
  std::vector<double> f;
  for (int i = 0; i <= steps; ++i) f.push_back(kr_max * i / steps * kC / (2.0 * kPi * r));
  return f;
}

// 3. Full-sphere numeric transfer converges to the sinc.
Outcome sphere_convergence() {
  const auto t0 = std::chrono::steady_clock::now();
  const double r = 0.1;
  const auto g = spherical_em(r, 2048);
  const auto grid = kr_grid(r, 4.0 * kPi, 800);
  const auto curve = numeric_transfer(g, PlaneStimulus{Vec3(0.3, -0.4, 0.866).normalized()}, grid, Medium{kC});
  double sup = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    sup = std::max(sup, std::abs(curve.values[i] - transfer_sphere(grid[i], r, kC)));
  }
  const double at_zero = std::abs(numeric_transfer_at(g, PlaneStimulus{Vec3(0.3, -0.4, 0.866).normalized()}, 1700.0,
                                                      Medium{kC}));
  const double secs = seconds_since(t0);
  return {sup < 2e-3 && at_zero < 1e-3 && secs < 10.0,
          fmt("sup|num-sinc| = %.2e (<2e-3), |num(1700 Hz)| = %.2e (<1e-3), %.2f s (<10 s)", sup, at_zero, secs)};
}

// 4. Two orthogonal plane-wave directions give the same curve.
Outcome direction_independence() {
  const double r = 0.1;
  const auto g = spherical_em(r, 2048);
  const auto grid = kr_grid(r, 4.0 * kPi, 400);
  const Vec3 a = Vec3(1.0, 2.0, 0.5).normalized();
  const Vec3 b = a.cross(Vec3::UnitZ()).normalized();
  const auto ca = numeric_transfer(g, PlaneStimulus{a}, grid, Medium{kC});
  const auto cb = numeric_transfer(g, PlaneStimulus{b}, grid, Medium{kC});
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::abs(ca.values[i] - cb.values[i]));
  return {worst < 2e-3 && std::abs(a.dot(b)) < 1e-12, fmt("max pointwise difference = %.2e (<2e-3)", worst)};
}

// First frequency at which the curve changes sign; linear interpolation between grid points.
double first_zero(const std::vector<double>& x, const std::vector<double>& y) {
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (y[i - 1] > 0.0 && y[i] <= 0.0) return x[i - 1] + (x[i] - x[i - 1]) * y[i - 1] / (y[i - 1] - y[i]);
  }
  return NAN;
}

// 5. Hemisphere aperture doubles the first rejection frequency.
Outcome hemisphere_zero() {
  const double r = 0.1;
  const Vec3 dir = -Vec3::UnitZ();
  const auto g = apply_aperture(spherical_em(r, 4096), Aperture::hemisphere(-dir));
  const double step = 10.0;
  std::vector<double> grid;
  for (double f = 0.0; f <= 6800.0 + 1e-9; f += step) grid.push_back(f);
  const auto curve = numeric_transfer(g, PlaneStimulus{dir}, grid, Medium{kC});
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::abs(curve.values[i] - transfer_hemisphere(grid[i], r, kC)));
  }
  const double zero = first_zero(grid, curve.values);
  return {worst < 1e-2 && std::abs(zero - 3400.0) <= step,
          fmt("max|num-analytic| = %.2e (<1e-2), first zero %.1f Hz (3400 +/- %.0f)", worst, zero, step)};
}

// 6. Cap formula limits against numeric aperture integration.
Outcome cap_limits() {
  const double r = 0.1;
  const Vec3 dir = -Vec3::UnitZ();
  const auto sphere = spherical_em(r, 4096);
  const auto hemi = apply_aperture(sphere, Aperture::hemisphere(-dir));
  const auto grid = kr_grid(r, 4.0 * kPi, 400);
  const auto full_curve = numeric_transfer(sphere, PlaneStimulus{dir}, grid, Medium{kC});
  const auto hemi_curve = numeric_transfer(hemi, PlaneStimulus{dir}, grid, Medium{kC});
  double worst_full = 0.0;
  double worst_hemi = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    // Numeric curves are DC-normalized; the cap formula carries the area fraction.
    worst_full = std::max(worst_full, std::abs(transfer_cap(grid[i], r, 1000 * r, kPi, kC) - full_curve.values[i]));
    worst_hemi = std::max(worst_hemi,
                          std::abs(transfer_cap(grid[i], r, 1000 * r, kPi / 2, kC) / 0.5 - hemi_curve.values[i]));
  }
  return {worst_full < 1e-2 && worst_hemi < 1e-2,
          fmt("phi0=pi: %.2e, phi0=pi/2: %.2e (both <1e-2, alpha=1e-3)", worst_full, worst_hemi)};
}

// 7. Resolution function from a numeric offset sweep of a point source.
Outcome resolution_sweep() {
  const double r = 0.1;
  const double f = 10000.0;
  const auto g = spherical_em(r, 4096);
  const Medium m{kC};
  const Vec3 dir = Vec3(0.2, 0.5, -0.8).normalized();
  auto respond = [&](double e0) { return steady_response(g, SphericalWave{e0 * dir, 1.0, r, f, 0.0}, f, m); };
  const Complex ref = respond(0.0);
  const double step = 0.0005;
  std::vector<double> e;
  std::vector<double> w;
  double worst = 0.0;
  for (double e0 = 0.0; e0 <= 0.05 + 1e-12; e0 += step) {
    const Complex z = respond(e0);
    // Signed response: the projection onto the centered-source phasor.
    const double v = (z * std::conj(ref)).real() / std::norm(ref);
    e.push_back(e0);
    w.push_back(v);
    worst = std::max(worst, std::abs(v - resolution(e0, f, kC)));
  }
  const double zero = first_zero(e, w);
  const double radius = resolution_radius(f, kC);
  // Phase on either side of the zero: 0 before, pi after.
  const double before = std::arg(respond(radius - 0.002) / ref);
  const double after = std::abs(std::arg(respond(radius + 0.002) / ref));
  const bool flips = std::abs(before) < 0.1 && std::abs(after - kPi) < 0.1;
  return {worst < 1e-2 && std::abs(zero - 0.017) <= step && flips,
          fmt("max|num-sinc| = %.2e (<1e-2), first zero %.5f m (0.017 +/- %.4f),", worst, zero, step) +
              fmt(" phase %.3f -> %.3f rad across it", std::abs(before), after)};
}

// 8. Virtual focusing vs mechanically moving the array.
double focus_deviation(double eta_over_r) {
  const double r = 0.1;
  const double f = 5000.0;
  const double fs = 160000.0;
  const double dur = 0.004;
  const Medium m{kC};
  const auto g = spherical_em(r, 4096);
  const Vec3 target = eta_over_r * r * Vec3(0.36, 0.48, 0.8);
  const std::vector<WaveSource> src{SphericalWave{target, 1.0, r, f, 0.0}};
  const auto rec = synth_record(g, src, fs, dur, m);
  const auto virt = virtual_focus(rec, target, m);
  const auto mech = mechanical_refocus_oracle(g, src, target, fs, dur, m);
  const double a = tone_estimate(virt.settled(), fs, f).amplitude;
  const double b = tone_estimate(mech.settled(), fs, f).amplitude;
  return std::abs(a / b - 1.0);
}

Outcome virtual_vs_mechanical() {
  const double small = focus_deviation(0.05);
  const double large = focus_deviation(0.5);
  return {small < 0.02 && large > small,
          fmt("relative deviation %.4f at eta/r=0.05 (<0.02), %.4f at eta/r=0.5 (> previous)", small, large)};
}

struct Peak {
  std::size_t index;
  double value;
};

std::vector<Peak> local_maxima(const std::vector<double>& v, std::size_t w, std::size_t h) {
  std::vector<Peak> out;
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double c = v[y * w + x];
      bool top = true;
      for (int dy = -1; dy <= 1 && top; ++dy) {
        for (int dx = -1; dx <= 1 && top; ++dx) {
          const long yy = static_cast<long>(y) + dy;
          const long xx = static_cast<long>(x) + dx;
          if ((dx || dy) && yy >= 0 && xx >= 0 && yy < static_cast<long>(h) && xx < static_cast<long>(w)) {
            top = c >= v[yy * w + xx];
          }
        }
      }
      if (top) out.push_back({y * w + x, c});
    }
  }
  std::sort(out.begin(), out.end(), [](const Peak& a, const Peak& b) { return a.value > b.value; });
  return out;
}

// 9. Imaging: one source localized, two sources resolved.
Outcome imaging() {
  const double r = 0.1;
  const double f = 10000.0;
  const double fs = 160000.0;
  const double step = 0.002;
  const Medium m{kC};
  const auto g = spherical_em(r, 4096);
  const auto grid = planar_grid(Vec3::Zero(), PlaneAxis::kZ, 0.0, 0.05, step);
  const double radius = resolution_radius(f, kC);

  const Vec3 single(0.02 * 0.6, 0.02 * 0.8, 0.0);
  const auto rec1 = synth_record(g, std::vector<WaveSource>{SphericalWave{single, 1.0, r, f, 0.0}}, fs, 0.002, m);
  const auto map1 = image(rec1, grid.points, f, m);
  const auto best = std::max_element(map1.values.begin(), map1.values.end()) - map1.values.begin();
  const double err1 = (grid.points[best] - single).norm();

  const Vec3 a(-1.5 * radius, 0.0, 0.0);
  const Vec3 b(1.5 * radius, 0.0, 0.0);
  const auto rec2 = synth_record(
      g, std::vector<WaveSource>{SphericalWave{a, 1.0, r, f, 0.0}, SphericalWave{b, 1.0, r, f, 0.0}}, fs, 0.002, m);
  const auto map2 = image(rec2, grid.points, f, m);
  const auto peaks = local_maxima(map2.values, grid.width, grid.height);
  bool resolved = peaks.size() >= 2;
  double err2 = 0.0;
  if (resolved) {
    const Vec3 p = grid.points[peaks[0].index];
    const Vec3 q = grid.points[peaks[1].index];
    const double direct = std::max((p - a).norm(), (q - b).norm());
    const double swapped = std::max((p - b).norm(), (q - a).norm());
    err2 = std::min(direct, swapped);
    resolved = err2 <= step * std::sqrt(2.0) + 1e-12;
  }
  return {err1 <= radius && resolved,
          fmt("single-source error %.4f m (<=%.3f), two sources %.3f m apart: peak error %.4f m (<= one grid step)",
              err1, radius, 3 * radius, err2)};
}

// 10. THD measured through a strong external interferer.
Outcome thd_in_noise() {
  DistortionSetup s;
  s.r = 0.1;
  s.n_mics = 4096;
  s.harmonic_levels = {0.01, 0.01};
  s.interferer_ratio = 10.0;
  s.medium = Medium{kC};
  const auto rep = distortion_experiment(s);
  const double em_err = std::abs(rep.thd_em / rep.thd_truth - 1.0);
  const double single_err = std::abs(rep.thd_single_mic / rep.thd_truth - 1.0);
  return {std::abs(rep.f0_hz - 1700.0) < 1e-9 && em_err < 0.05 && single_err > 0.5 && rep.suppression_db >= 40.0,
          fmt("EM error %.2e (<0.05), single-mic error %.3f (>0.5), suppression %.1f dB (>=40)", em_err, single_err,
              rep.suppression_db)};
}

// 11. Record persistence.
Outcome record_round_trip() {
  const fs::path dir = fs::temp_directory_path() / ("emtest_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  const auto g = spherical_em(0.1, 64);
  const std::vector<WaveSource> src{SphericalWave{Vec3(0.01, 0.02, 0), 1.0, 0.1, 3000.0, 0.3},
                                    PlaneWave{2.0, 1000.0, Vec3::UnitY(), 0.0}};
  const auto rec = synth_record(g, src, 96000.0, 0.01, Medium{kC});
  save_record(rec, dir);
  const auto back = load_record(dir);
  bool same = back.samples().size() == rec.samples().size() && back.channel_count() == rec.channel_count() &&
              back.sample_rate() == rec.sample_rate() && back.c() == rec.c() && back.radius() == rec.radius() &&
              back.center() == rec.center();
  for (std::size_t i = 0; same && i < rec.samples().size(); ++i) {
    same = std::bit_cast<std::uint64_t>(rec.samples()[i]) == std::bit_cast<std::uint64_t>(back.samples()[i]);
  }
  for (std::size_t i = 0; same && i < rec.channel_count(); ++i) {
    same = rec.mics()[i].pos == back.mics()[i].pos && rec.mics()[i].id == back.mics()[i].id &&
           rec.mics()[i].sensitivity == back.mics()[i].sensitivity;
  }

  std::string manifest;
  {
    std::ifstream in(dir / "manifest.json");
    std::stringstream ss;
    ss << in.rdbuf();
    manifest = ss.str();
  }
  std::string bad = manifest;
  bad.replace(bad.find("f64le"), 5, "i16le");
  std::ofstream(dir / "manifest.json", std::ios::trunc) << bad;
  const bool bad_format = code_of([&] { load_record(dir); }) == ErrorCode::kFormatViolation;
  std::ofstream(dir / "manifest.json", std::ios::trunc) << manifest.substr(0, manifest.size() / 3);
  const bool bad_json = code_of([&] { load_record(dir); }) == ErrorCode::kFormatViolation;
  std::ofstream(dir / "manifest.json", std::ios::trunc) << manifest;
  fs::resize_file(dir / "samples.bin", fs::file_size(dir / "samples.bin") - 1);
  const bool truncated = code_of([&] { load_record(dir); }) == ErrorCode::kFormatViolation;
  fs::remove_all(dir);
  return {same && bad_format && bad_json && truncated,
          std::string("bit-identical: ") + (same ? "yes" : "no") + ", bad sample_format: " +
              (bad_format ? "FormatViolation" : "accepted") + ", corrupt manifest: " +
              (bad_json ? "FormatViolation" : "accepted") + ", truncated samples: " +
              (truncated ? "FormatViolation" : "accepted")};
}

// 12. Module invariants on randomized inputs.
Outcome properties() {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Medium m{kC};
  int failures = 0;
  int checks = 0;
  auto expect = [&](bool ok) {
    ++checks;
    failures += ok ? 0 : 1;
  };
  auto unit = [&] {
    std::normal_distribution<double> n;
    return Vec3(n(rng), n(rng), n(rng)).normalized();
  };

  // Linearity of superposition.
  for (int i = 0; i < 200; ++i) {
    const WaveSource s1 = PlaneWave{u(rng) * 2, 100 + 5000 * u(rng), unit(), u(rng) * 6};
    const WaveSource s2 = SphericalWave{unit() * (1 + u(rng)), u(rng) * 2, 0.5, 100 + 5000 * u(rng), u(rng) * 6};
    const Vec3 x = unit() * 0.3 * u(rng);
    const double t = 0.01 * u(rng);
    const std::vector<WaveSource> both{s1, s2};
    expect(std::abs(superpose(both, x, t, m) - pressure(s1, x, t, m) - pressure(s2, x, t, m)) < 1e-12);
  }
  // THD scale invariance.
  const double fs = 48000.0;
  std::vector<double> x(4800);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double t = k / fs;
    x[k] = std::cos(2 * kPi * 1000 * t) + 0.03 * std::cos(2 * kPi * 2000 * t + 1) + 0.02 * std::cos(2 * kPi * 4000 * t);
  }
  const double base = thd(x, fs, 1000.0).thd;
  for (int i = 0; i < 20; ++i) {
    const double s = std::exp(20 * u(rng) - 10);
    std::vector<double> y(x);
    for (auto& v : y) v *= s;
    expect(std::abs(thd(y, fs, 1000.0).thd - base) <= 1e-12 * base);
  }
  // Focus delay positivity and gain bounds.
  for (int i = 0; i < 2000; ++i) {
    const double r = 0.01 + u(rng);
    const double eta = 0.999 * u(rng) * r;
    const auto p = focus_params(kPi * u(rng), eta, r, kC, eta / kC);
    expect(p.tau >= -1e-18 && p.gain >= r / (r + eta) * (1 - 1e-12) && p.gain <= r / (r - eta) * (1 + 1e-12));
  }
  // DC normalization.
  const auto sphere = spherical_em(0.1, 512);
  const auto cap = apply_aperture(sphere, Aperture::cap(unit(), 1.0));
  for (int i = 0; i < 10; ++i) {
    expect(std::abs(numeric_transfer_at(sphere, PlaneStimulus{unit()}, 0.0, m) - 1.0) < 1e-12);
    expect(std::abs(numeric_transfer_at(cap, PointStimulus{unit() * 0.5}, 0.0, m) - 1.0) < 1e-12);
  }
  expect(transfer_sphere(0, 0.1, kC) == 1.0 && transfer_hemisphere(0, 0.1, kC) == 1.0 &&
         resolution(0, 1000, kC) == 1.0 && std::abs(transfer_cap(0, 0.1, 100, kPi, kC) - 1.0) < 1e-15);
  // Argument parity of the sinc forms.
  for (int i = 0; i < 1000; ++i) {
    const double f = 20000 * u(rng);
    const double e = 0.2 * u(rng);
    const double a = 100 * (u(rng) - 0.5);
    expect(sinc(a) == sinc(-a));
    expect(transfer_sphere(f, 0.1, kC) == transfer_sphere(-f, 0.1, kC));
    expect(transfer_hemisphere(f, 0.1, kC) == transfer_hemisphere(-f, 0.1, kC));
    expect(resolution(e, f, kC) == resolution(-e, f, kC));
    expect(transfer_cap(f, 0.1, 1.0, 1.0, kC) == transfer_cap(-f, 0.1, 1.0, 1.0, kC));
  }
  return {failures == 0, fmt("%.0f of %.0f sampled invariant checks hold", checks - failures, checks)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"cubic exact null, axis incidence", cube_axis_null},
      {"cubic null, diagonal incidence", cube_diagonal_null},
      {"sphere transfer converges to sinc", sphere_convergence},
      {"direction independence", direction_independence},
      {"hemisphere first zero at 2 f0", hemisphere_zero},
      {"cap formula limits", cap_limits},
      {"resolution function", resolution_sweep},
      {"virtual vs mechanical focusing", virtual_vs_mechanical},
      {"imaging localization", imaging},
      {"THD in noise", thd_in_noise},
      {"record round trip", record_round_trip},
      {"property suites", properties},
  };
  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] [PRIMARY] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
