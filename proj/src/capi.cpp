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

#include "emtest/emtest.h"

#include <algorithm>
#include <exception>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "emtest/analytic.hpp"
#include "emtest/beamform.hpp"
#include "emtest/error.hpp"
#include "emtest/focusing.hpp"
#include "emtest/geometry.hpp"
#include "emtest/metrology.hpp"
#include "emtest/record.hpp"
#include "emtest/scene.hpp"
#include "emtest/wavefield.hpp"

struct emt_geometry {
  emtest::ArrayGeometry value;
};

struct emt_record {
  emtest::AcousticRecord value;
};

namespace {

using emtest::ErrorCode;

thread_local std::string g_last_error;

int set_error(int status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return EMT_OK;
  } catch (const emtest::Error& e) {
    return set_error(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(EMT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(EMT_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(EMT_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) emtest::fail(ErrorCode::kBadArgument, std::string(what) + " must not be NULL");
}

void require_capacity(std::size_t capacity, std::size_t needed) {
  if (capacity < needed) {
    emtest::fail(ErrorCode::kBadArgument, "output buffer holds " + std::to_string(capacity) + " values, " +
                                              std::to_string(needed) + " required");
  }
}

emtest::Vec3 vec(const double* v) { return v ? emtest::Vec3(v[0], v[1], v[2]) : emtest::Vec3::Zero(); }

void put(const emtest::Vec3& v, double* out) {
  out[0] = v.x();
  out[1] = v.y();
  out[2] = v.z();
}

emtest::WaveSource to_source(const emt_source& s) {
  if (s.kind == EMT_SOURCE_PLANE) return emtest::PlaneWave{s.amplitude, s.freq_hz, vec(s.vec), s.phase0_rad};
  if (s.kind == EMT_SOURCE_SPHERICAL) {
    return emtest::SphericalWave{vec(s.vec), s.amplitude, s.ref_dist, s.freq_hz, s.phase0_rad};
  }
  emtest::fail(ErrorCode::kBadArgument, "unknown source kind " + std::to_string(s.kind));
}

emtest::Medium medium(double c) {
  emtest::Medium m{c};
  emtest::validate(m);
  return m;
}

emt_tone to_c(const emtest::ToneEstimate& t) { return {t.freq, t.amplitude, t.phase}; }

emt_distortion_report to_c(const emtest::DistortionReport& r) {
  return {r.f0_hz, r.n_mics, r.thd_truth, r.thd_single_mic, r.thd_em, r.suppression_db};
}

template <typename Fn>
int scalar(double* out, Fn&& fn) {
  return guarded([&] {
    require(out, "out");
    *out = fn();
  });
}

}  // namespace

extern "C" {

const char* emt_version(void) { return "1.0.0"; }

const char* emt_status_name(int status) {
  if (status == EMT_OK) return "Ok";
  if (status == EMT_ERR_INTERNAL) return "Internal";
  if (status >= EMT_ERR_BAD_ARGUMENT && status <= EMT_ERR_ZERO_FUNDAMENTAL) {
    return emtest::error_name(static_cast<ErrorCode>(status)).data();
  }
  return "Unknown";
}

int emt_status_category(int status) {
  switch (status) {
    case EMT_OK:
      return EMT_CATEGORY_NONE;
    case EMT_ERR_BAD_ARGUMENT:
    case EMT_ERR_BAD_EDGE:
    case EMT_ERR_BAD_RADIUS:
    case EMT_ERR_TOO_FEW_MICS:
    case EMT_ERR_APERTURE_ON_CUBE:
    case EMT_ERR_BAD_GEOMETRY:
    case EMT_ERR_BAD_FREQUENCY:
    case EMT_ERR_EMPTY_GRID:
    case EMT_ERR_BAD_DURATION:
    case EMT_ERR_UNDERSAMPLED_STIMULUS:
      return EMT_CATEGORY_ARGUMENT;
    case EMT_ERR_IO_FAILURE:
    case EMT_ERR_FORMAT_VIOLATION:
      return EMT_CATEGORY_IO;
    default:
      return EMT_CATEGORY_DOMAIN;
  }
}

const char* emt_last_error(void) { return g_last_error.c_str(); }

int emt_pressure(const emt_source* source, const double x[3], double t, double c, double* out) {
  return scalar(out, [&] {
    require(source, "source");
    require(x, "x");
    const auto s = to_source(*source);
    emtest::validate(s);
    return emtest::pressure(s, vec(x), t, medium(c));
  });
}

/* geometry */

int emt_geometry_cubic(double d, const double center[3], const double rotation[9], emt_geometry** out) {
  return guarded([&] {
    require(out, "out");
    emtest::Mat3 rot = emtest::Mat3::Identity();
    if (rotation) {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) rot(i, j) = rotation[3 * i + j];
    }
    *out = new emt_geometry{emtest::cubic_em(d, vec(center), rot)};
  });
}

int emt_geometry_spherical(double r, int n_mics, const double center[3], emt_geometry** out) {
  return guarded([&] {
    require(out, "out");
    *out = new emt_geometry{emtest::spherical_em(r, n_mics, vec(center))};
  });
}

int emt_geometry_apply_aperture(const emt_geometry* g, int mode, const double toward[3], double phi0,
                                emt_geometry** out) {
  return guarded([&] {
    require(g, "geometry");
    require(out, "out");
    emtest::Aperture a;
    switch (mode) {
      case EMT_APERTURE_FULL:
        a = emtest::Aperture::full();
        break;
      case EMT_APERTURE_HEMISPHERE:
        require(toward, "toward");
        a = emtest::Aperture::hemisphere(vec(toward));
        break;
      case EMT_APERTURE_CAP:
        require(toward, "toward");
        a = emtest::Aperture::cap(vec(toward), phi0);
        break;
      default:
        emtest::fail(ErrorCode::kBadArgument, "unknown aperture mode " + std::to_string(mode));
    }
    *out = new emt_geometry{emtest::apply_aperture(g->value, a)};
  });
}

int emt_geometry_with_weights(const emt_geometry* g, const double* weights, size_t n, emt_geometry** out) {
  return guarded([&] {
    require(g, "geometry");
    require(weights, "weights");
    require(out, "out");
    *out = new emt_geometry{g->value.with_weights({weights, n})};
  });
}

int emt_geometry_with_delays(const emt_geometry* g, const double* delays_s, size_t n, emt_geometry** out) {
  return guarded([&] {
    require(g, "geometry");
    require(delays_s, "delays");
    require(out, "out");
    *out = new emt_geometry{g->value.with_delays({delays_s, n})};
  });
}

void emt_geometry_free(emt_geometry* g) { delete g; }

size_t emt_geometry_mic_count(const emt_geometry* g) { return g ? g->value.mic_count() : 0; }

size_t emt_geometry_active_count(const emt_geometry* g) { return g ? g->value.active_count() : 0; }

double emt_geometry_radius(const emt_geometry* g) { return g ? g->value.radius() : 0.0; }

int emt_geometry_mic_position(const emt_geometry* g, size_t index, double out[3]) {
  return guarded([&] {
    require(g, "geometry");
    require(out, "out");
    if (index >= g->value.mic_count()) emtest::fail(ErrorCode::kBadArgument, "microphone index out of range");
    put(g->value.mics()[index].pos, out);
  });
}

/* closed forms */

int emt_reject_freqs(double d, double c, int n_max, int incidence, double* out, size_t capacity, size_t* count) {
  return guarded([&] {
    require(count, "count");
    std::vector<double> f;
    if (incidence == EMT_INCIDENCE_AXIS) {
      f = emtest::reject_freqs_cube_axis(d, c, n_max);
    } else if (incidence == EMT_INCIDENCE_DIAGONAL) {
      f = emtest::reject_freqs_cube_diagonal(d, c, n_max);
    } else {
      emtest::fail(ErrorCode::kBadArgument, "unknown incidence " + std::to_string(incidence));
    }
    *count = f.size();
    if (out) std::copy_n(f.begin(), std::min(capacity, f.size()), out);
  });
}

int emt_transfer_sphere(double f, double r, double c, double* out) {
  return scalar(out, [&] { return emtest::transfer_sphere(f, r, c); });
}

int emt_transfer_hemisphere(double f, double r, double c, double* out) {
  return scalar(out, [&] { return emtest::transfer_hemisphere(f, r, c); });
}

int emt_transfer_cap(double f, double r, double r_src, double phi0, double c, double* out) {
  return scalar(out, [&] { return emtest::transfer_cap(f, r, r_src, phi0, c); });
}

int emt_transfer_cube(double f, double d, const double direction_local[3], double c, double* out) {
  return scalar(out, [&] {
    require(direction_local, "direction_local");
    return emtest::transfer_cube(f, d, vec(direction_local), c);
  });
}

int emt_resolution(double e0, double f, double c, double* out) {
  return scalar(out, [&] { return emtest::resolution(e0, f, c); });
}

int emt_resolution_radius(double f, double c, double* out) {
  return scalar(out, [&] { return emtest::resolution_radius(f, c); });
}

int emt_fundamental_for_radius(double r, double c, double* out) {
  return scalar(out, [&] { return emtest::fundamental_for_radius(r, c); });
}

int emt_noise_to_signal(double ratio, double f, double r, double c, double* out) {
  return scalar(out, [&] { return emtest::noise_to_signal(ratio, f, r, c); });
}

/* beamforming */

int emt_steady_response(const emt_geometry* g, const emt_source* source, double f, double c, double* re, double* im) {
  return guarded([&] {
    require(g, "geometry");
    require(source, "source");
    require(re, "re");
    require(im, "im");
    const auto s = to_source(*source);
    emtest::validate(s);
    const emtest::Complex v = emtest::steady_response(g->value, s, f, medium(c));
    *re = v.real();
    *im = v.imag();
  });
}

int emt_numeric_transfer(const emt_geometry* g, int stimulus_kind, const double vec3[3], double c,
                         const double* freqs, size_t n, double* values) {
  return guarded([&] {
    require(g, "geometry");
    require(vec3, "vec");
    require(values, "values");
    if (n > 0) require(freqs, "freqs");
    emtest::Stimulus stim;
    if (stimulus_kind == EMT_STIMULUS_PLANE) {
      stim = emtest::PlaneStimulus{vec(vec3)};
    } else if (stimulus_kind == EMT_STIMULUS_POINT) {
      stim = emtest::PointStimulus{vec(vec3)};
    } else {
      emtest::fail(ErrorCode::kBadArgument, "unknown stimulus kind " + std::to_string(stimulus_kind));
    }
    const auto curve = emtest::numeric_transfer(g->value, stim, {freqs, n}, medium(c));
    std::copy(curve.values.begin(), curve.values.end(), values);
  });
}

int emt_time_output(const emt_geometry* g, const emt_record* rec, double* out, size_t capacity) {
  return guarded([&] {
    require(g, "geometry");
    require(rec, "record");
    require(out, "out");
    require_capacity(capacity, rec->value.num_samples());
    const auto y = emtest::time_output(g->value, rec->value);
    std::copy(y.begin(), y.end(), out);
  });
}

/* records */

int emt_record_synth(const emt_geometry* g, const emt_source* sources, size_t n_sources, double sample_rate,
                     double duration, double c, emt_record** out) {
  return guarded([&] {
    require(g, "geometry");
    require(out, "out");
    if (n_sources > 0) require(sources, "sources");
    std::vector<emtest::WaveSource> list;
    for (size_t i = 0; i < n_sources; ++i) list.push_back(to_source(sources[i]));
    *out = new emt_record{emtest::synth_record(g->value, list, sample_rate, duration, medium(c))};
  });
}

int emt_record_synth_scene(const char* scene_path, double sample_rate, double duration, emt_record** out) {
  return guarded([&] {
    require(scene_path, "scene_path");
    require(out, "out");
    const emtest::Scene scene = emtest::load_scene(scene_path);
    *out = new emt_record{emtest::synth_record(scene.geometry, scene.sources, sample_rate, duration, scene.medium)};
  });
}

int emt_record_save(const emt_record* rec, const char* dir) {
  return guarded([&] {
    require(rec, "record");
    require(dir, "dir");
    emtest::save_record(rec->value, dir);
  });
}

int emt_record_load(const char* dir, emt_record** out) {
  return guarded([&] {
    require(dir, "dir");
    require(out, "out");
    *out = new emt_record{emtest::load_record(dir)};
  });
}

void emt_record_free(emt_record* rec) { delete rec; }

size_t emt_record_channel_count(const emt_record* rec) { return rec ? rec->value.channel_count() : 0; }

size_t emt_record_num_samples(const emt_record* rec) { return rec ? rec->value.num_samples() : 0; }

double emt_record_sample_rate(const emt_record* rec) { return rec ? rec->value.sample_rate() : 0.0; }

double emt_record_c(const emt_record* rec) { return rec ? rec->value.c() : 0.0; }

double emt_record_radius(const emt_record* rec) { return rec ? rec->value.radius() : 0.0; }

int emt_record_center(const emt_record* rec, double out[3]) {
  return guarded([&] {
    require(rec, "record");
    require(out, "out");
    put(rec->value.center(), out);
  });
}

int emt_record_mic_position(const emt_record* rec, size_t index, double out[3]) {
  return guarded([&] {
    require(rec, "record");
    require(out, "out");
    if (index >= rec->value.channel_count()) emtest::fail(ErrorCode::kBadArgument, "channel index out of range");
    put(rec->value.mics()[index].pos, out);
  });
}

const double* emt_record_channel(const emt_record* rec, size_t index) {
  if (rec == nullptr || index >= rec->value.channel_count()) return nullptr;
  return rec->value.channel(index).data();
}

int emt_record_sum(const emt_record* rec, double* out, size_t capacity) {
  return guarded([&] {
    require(rec, "record");
    require(out, "out");
    const auto& r = rec->value;
    require_capacity(capacity, r.num_samples());
    std::fill_n(out, r.num_samples(), 0.0);
    for (size_t i = 0; i < r.channel_count(); ++i) {
      const auto ch = r.channel(i);
      for (size_t k = 0; k < ch.size(); ++k) out[k] += ch[k];
    }
  });
}

/* focusing */

int emt_focus_params(double psi, double eta, double r, double c, double tau0, double* tau, double* gain) {
  return guarded([&] {
    require(tau, "tau");
    require(gain, "gain");
    const auto p = emtest::focus_params(psi, eta, r, c, tau0);
    *tau = p.tau;
    *gain = p.gain;
  });
}

int emt_virtual_focus(const emt_record* rec, const double target[3], double c, double* out, size_t capacity,
                      size_t* settled_begin, size_t* settled_end) {
  return guarded([&] {
    require(rec, "record");
    require(target, "target");
    require(out, "out");
    require_capacity(capacity, rec->value.num_samples());
    const auto v = emtest::virtual_focus(rec->value, vec(target), medium(c));
    std::copy(v.samples.begin(), v.samples.end(), out);
    if (settled_begin) *settled_begin = v.settled_begin;
    if (settled_end) *settled_end = v.settled_end;
  });
}

int emt_image(const emt_record* rec, const double* grid_xyz, size_t n_points, double freq, double c,
              double* values) {
  return guarded([&] {
    require(rec, "record");
    require(values, "values");
    if (n_points > 0) require(grid_xyz, "grid");
    std::vector<emtest::Vec3> grid;
    grid.reserve(n_points);
    for (size_t i = 0; i < n_points; ++i) grid.push_back(vec(grid_xyz + 3 * i));
    const auto map = emtest::image(rec->value, grid, freq, medium(c));
    std::copy(map.values.begin(), map.values.end(), values);
  });
}

int emt_planar_grid(const double center[3], int plane, double offset, double extent, double step, double* out_xyz,
                    size_t capacity_points, size_t* width, size_t* height) {
  return guarded([&] {
    require(width, "width");
    require(height, "height");
    emtest::PlaneAxis axis;
    switch (plane) {
      case EMT_PLANE_X: axis = emtest::PlaneAxis::kX; break;
      case EMT_PLANE_Y: axis = emtest::PlaneAxis::kY; break;
      case EMT_PLANE_Z: axis = emtest::PlaneAxis::kZ; break;
      default: emtest::fail(ErrorCode::kBadArgument, "unknown plane " + std::to_string(plane));
    }
    const auto grid = emtest::planar_grid(vec(center), axis, offset, extent, step);
    *width = grid.width;
    *height = grid.height;
    if (out_xyz == nullptr) return;
    require_capacity(capacity_points, grid.points.size());
    for (size_t i = 0; i < grid.points.size(); ++i) put(grid.points[i], out_xyz + 3 * i);
  });
}

int emt_image_write_pgm(const double* values, size_t width, size_t height, const char* path) {
  return guarded([&] {
    require(values, "values");
    require(path, "path");
    emtest::ImageMap map;
    map.values.assign(values, values + width * height);
    emtest::write_pgm(map, width, height, path);
  });
}

int emt_image_write_csv(const double* grid_xyz, const double* values, size_t n_points, const char* path) {
  return guarded([&] {
    require(path, "path");
    if (n_points > 0) {
      require(grid_xyz, "grid");
      require(values, "values");
    }
    emtest::ImageMap map;
    for (size_t i = 0; i < n_points; ++i) {
      map.grid_points.push_back(vec(grid_xyz + 3 * i));
      map.values.push_back(values[i]);
    }
    emtest::write_image_csv(map, path);
  });
}

/* metrology */

int emt_tone_estimate(const double* series, size_t n, double sample_rate, double f, emt_tone* out) {
  return guarded([&] {
    require(out, "out");
    if (n > 0) require(series, "series");
    *out = to_c(emtest::tone_estimate({series, n}, sample_rate, f));
  });
}

int emt_thd(const double* series, size_t n, double sample_rate, double f0, int k_max, emt_thd_report* out) {
  return guarded([&] {
    require(out, "out");
    if (n > 0) require(series, "series");
    if (k_max > EMT_MAX_HARMONIC) emtest::fail(ErrorCode::kBadArgument, "k_max exceeds EMT_MAX_HARMONIC");
    const auto report = emtest::thd({series, n}, sample_rate, f0, k_max);
    emt_thd_report r{};
    r.fundamental = to_c(report.fundamental);
    r.harmonic_count = static_cast<int>(report.harmonics.size());
    for (size_t i = 0; i < report.harmonics.size(); ++i) r.harmonics[i] = to_c(report.harmonics[i]);
    r.thd = report.thd;
    *out = r;
  });
}

int emt_distortion_experiment(double r, int n_mics, const double* harmonic_levels, size_t n_levels,
                              double interferer_ratio, int interferer_odd_harmonics, double c,
                              emt_distortion_report* out) {
  return guarded([&] {
    require(out, "out");
    if (n_levels > 0) require(harmonic_levels, "harmonic_levels");
    emtest::DistortionSetup setup;
    setup.r = r;
    setup.n_mics = n_mics;
    setup.harmonic_levels.assign(harmonic_levels, harmonic_levels + n_levels);
    setup.interferer_ratio = interferer_ratio;
    setup.interferer_odd_harmonics = interferer_odd_harmonics != 0;
    setup.medium = medium(c);
    *out = to_c(emtest::distortion_experiment(setup));
  });
}

int emt_distortion_report_write_json(const emt_distortion_report* report, const char* path) {
  return guarded([&] {
    require(report, "report");
    require(path, "path");
    emtest::DistortionReport r;
    r.f0_hz = report->f0_hz;
    r.n_mics = report->n_mics;
    r.thd_truth = report->thd_truth;
    r.thd_single_mic = report->thd_single_mic;
    r.thd_em = report->thd_em;
    r.suppression_db = report->suppression_db;
    emtest::write_report_json(r, path);
  });
}

}  // extern "C"
