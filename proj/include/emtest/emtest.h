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

/* C interface to the enclosing-microphone test library.
 *
 * Every fallible call returns an int status (EMT_OK on success). On failure
 * emt_last_error() holds a message for the calling thread until its next
 * failing call. Objects are opaque handles released with the matching
 * *_free function; handles are immutable, so functions that "modify" one
 * return a new handle. Vectors are double[3] in metres, rotations are
 * row-major double[9]. Output arrays are caller-owned. */

#ifndef EMTEST_H_
#define EMTEST_H_

#include <stddef.h>

#if defined(EMTEST_BUILDING_LIBRARY)
#define EMT_API __attribute__((visibility("default")))
#else
#define EMT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum emt_status {
  EMT_OK = 0,
  EMT_ERR_BAD_ARGUMENT = 1,
  EMT_ERR_BAD_EDGE = 2,
  EMT_ERR_BAD_RADIUS = 3,
  EMT_ERR_TOO_FEW_MICS = 4,
  EMT_ERR_APERTURE_ON_CUBE = 5,
  EMT_ERR_BAD_GEOMETRY = 6,
  EMT_ERR_BAD_FREQUENCY = 7,
  EMT_ERR_EVALUATION_AT_SOURCE = 8,
  EMT_ERR_FREQUENCY_MISMATCH = 9,
  EMT_ERR_NO_ACTIVE_MICS = 10,
  EMT_ERR_EMPTY_GRID = 11,
  EMT_ERR_CHANNEL_MISMATCH = 12,
  EMT_ERR_UNDERSAMPLED_STIMULUS = 13,
  EMT_ERR_BAD_DURATION = 14,
  EMT_ERR_IO_FAILURE = 15,
  EMT_ERR_FORMAT_VIOLATION = 16,
  EMT_ERR_FOCUS_OUTSIDE_SPHERE = 17,
  EMT_ERR_BAD_TAU0 = 18,
  EMT_ERR_ZERO_FIELD = 19,
  EMT_ERR_WINDOW_TOO_SHORT = 20,
  EMT_ERR_NYQUIST_VIOLATION = 21,
  EMT_ERR_ZERO_FUNDAMENTAL = 22,
  EMT_ERR_INTERNAL = 100
} emt_status;

/* Coarse grouping of statuses, used by the CLI for exit codes. */
typedef enum emt_error_category {
  EMT_CATEGORY_NONE = 0,
  EMT_CATEGORY_ARGUMENT = 1, /* invalid parameter values */
  EMT_CATEGORY_IO = 2,       /* missing files, malformed records/scenes */
  EMT_CATEGORY_DOMAIN = 3    /* numerically undefined requests */
} emt_error_category;

EMT_API const char* emt_version(void);
EMT_API const char* emt_status_name(int status);
EMT_API int emt_status_category(int status);
EMT_API const char* emt_last_error(void);

/* ---- sources ---------------------------------------------------------- */

typedef enum emt_source_kind { EMT_SOURCE_PLANE = 0, EMT_SOURCE_SPHERICAL = 1 } emt_source_kind;

/* Plane: vec = unit propagation direction, amplitude = p0 (ref_dist unused).
 * Spherical: vec = source position, amplitude = p_ref at ref_dist. */
typedef struct emt_source {
  int kind;
  double vec[3];
  double amplitude;
  double ref_dist;
  double freq_hz;
  double phase0_rad;
} emt_source;

EMT_API int emt_pressure(const emt_source* source, const double x[3], double t, double c, double* out);

/* ---- geometry --------------------------------------------------------- */

typedef struct emt_geometry emt_geometry;

typedef enum emt_aperture_mode {
  EMT_APERTURE_FULL = 0,
  EMT_APERTURE_HEMISPHERE = 1,
  EMT_APERTURE_CAP = 2
} emt_aperture_mode;

/* rotation may be NULL for the identity. */
EMT_API int emt_geometry_cubic(double d, const double center[3], const double rotation[9], emt_geometry** out);
EMT_API int emt_geometry_spherical(double r, int n_mics, const double center[3], emt_geometry** out);
/* toward is ignored for EMT_APERTURE_FULL, phi0 only used for EMT_APERTURE_CAP. */
EMT_API int emt_geometry_apply_aperture(const emt_geometry* g, int mode, const double toward[3], double phi0,
                                        emt_geometry** out);
EMT_API int emt_geometry_with_weights(const emt_geometry* g, const double* weights, size_t n, emt_geometry** out);
EMT_API int emt_geometry_with_delays(const emt_geometry* g, const double* delays_s, size_t n, emt_geometry** out);
EMT_API void emt_geometry_free(emt_geometry* g);
EMT_API size_t emt_geometry_mic_count(const emt_geometry* g);
EMT_API size_t emt_geometry_active_count(const emt_geometry* g);
EMT_API double emt_geometry_radius(const emt_geometry* g);
EMT_API int emt_geometry_mic_position(const emt_geometry* g, size_t index, double out[3]);

/* ---- closed forms ----------------------------------------------------- */

typedef enum emt_incidence { EMT_INCIDENCE_AXIS = 0, EMT_INCIDENCE_DIAGONAL = 1 } emt_incidence;

/* Writes up to capacity values; *count receives the full count. */
EMT_API int emt_reject_freqs(double d, double c, int n_max, int incidence, double* out, size_t capacity,
                             size_t* count);
EMT_API int emt_transfer_sphere(double f, double r, double c, double* out);
EMT_API int emt_transfer_hemisphere(double f, double r, double c, double* out);
EMT_API int emt_transfer_cap(double f, double r, double r_src, double phi0, double c, double* out);
/* direction_local is the unit plane-wave direction in the cube's own frame. */
EMT_API int emt_transfer_cube(double f, double d, const double direction_local[3], double c, double* out);
EMT_API int emt_resolution(double e0, double f, double c, double* out);
EMT_API int emt_resolution_radius(double f, double c, double* out);
EMT_API int emt_fundamental_for_radius(double r, double c, double* out);
EMT_API int emt_noise_to_signal(double ratio, double f, double r, double c, double* out);

/* ---- beamforming ------------------------------------------------------ */

typedef struct emt_record emt_record;

typedef enum emt_stimulus_kind { EMT_STIMULUS_PLANE = 0, EMT_STIMULUS_POINT = 1 } emt_stimulus_kind;

EMT_API int emt_steady_response(const emt_geometry* g, const emt_source* source, double f, double c, double* re,
                                double* im);
/* vec is the unit propagation direction (plane) or the source position (point). */
EMT_API int emt_numeric_transfer(const emt_geometry* g, int stimulus_kind, const double vec[3], double c,
                                 const double* freqs, size_t n, double* values);
/* out must hold emt_record_num_samples(rec) values. */
EMT_API int emt_time_output(const emt_geometry* g, const emt_record* rec, double* out, size_t capacity);

/* ---- acoustic records ------------------------------------------------- */

EMT_API int emt_record_synth(const emt_geometry* g, const emt_source* sources, size_t n_sources, double sample_rate,
                             double duration, double c, emt_record** out);
/* Builds geometry, medium and sources from a scene JSON file. */
EMT_API int emt_record_synth_scene(const char* scene_path, double sample_rate, double duration, emt_record** out);
EMT_API int emt_record_save(const emt_record* rec, const char* dir);
EMT_API int emt_record_load(const char* dir, emt_record** out);
EMT_API void emt_record_free(emt_record* rec);
EMT_API size_t emt_record_channel_count(const emt_record* rec);
EMT_API size_t emt_record_num_samples(const emt_record* rec);
EMT_API double emt_record_sample_rate(const emt_record* rec);
EMT_API double emt_record_c(const emt_record* rec);
EMT_API double emt_record_radius(const emt_record* rec);
EMT_API int emt_record_center(const emt_record* rec, double out[3]);
EMT_API int emt_record_mic_position(const emt_record* rec, size_t index, double out[3]);
/* Borrowed pointer valid while rec lives; NULL on a bad index. */
EMT_API const double* emt_record_channel(const emt_record* rec, size_t index);
/* Plain sum of all channels (unit weights, no delays). */
EMT_API int emt_record_sum(const emt_record* rec, double* out, size_t capacity);

/* ---- focusing and imaging --------------------------------------------- */

EMT_API int emt_focus_params(double psi, double eta, double r, double c, double tau0, double* tau, double* gain);
/* out must hold emt_record_num_samples(rec) values. settled_begin/end may be NULL. */
EMT_API int emt_virtual_focus(const emt_record* rec, const double target[3], double c, double* out, size_t capacity,
                              size_t* settled_begin, size_t* settled_end);
/* grid_xyz holds n_points * 3 coordinates; values receives n_points normalized magnitudes. */
EMT_API int emt_image(const emt_record* rec, const double* grid_xyz, size_t n_points, double freq, double c,
                      double* values);

typedef enum emt_plane { EMT_PLANE_X = 0, EMT_PLANE_Y = 1, EMT_PLANE_Z = 2 } emt_plane;

/* Pass out_xyz = NULL to query width/height first; otherwise out_xyz must
 * hold width * height * 3 values. */
EMT_API int emt_planar_grid(const double center[3], int plane, double offset, double extent, double step,
                            double* out_xyz, size_t capacity_points, size_t* width, size_t* height);
EMT_API int emt_image_write_pgm(const double* values, size_t width, size_t height, const char* path);
EMT_API int emt_image_write_csv(const double* grid_xyz, const double* values, size_t n_points, const char* path);

/* ---- metrology -------------------------------------------------------- */

#define EMT_MAX_HARMONIC 32

typedef struct emt_tone {
  double freq_hz;
  double amplitude;
  double phase_rad;
} emt_tone;

typedef struct emt_thd_report {
  emt_tone fundamental;
  emt_tone harmonics[EMT_MAX_HARMONIC - 1]; /* orders 2..k_max */
  int harmonic_count;
  double thd;
} emt_thd_report;

typedef struct emt_distortion_report {
  double f0_hz;
  int n_mics;
  double thd_truth;
  double thd_single_mic;
  double thd_em;
  double suppression_db;
} emt_distortion_report;

EMT_API int emt_tone_estimate(const double* series, size_t n, double sample_rate, double f, emt_tone* out);
/* k_max in [2, EMT_MAX_HARMONIC]. */
EMT_API int emt_thd(const double* series, size_t n, double sample_rate, double f0, int k_max, emt_thd_report* out);
EMT_API int emt_distortion_experiment(double r, int n_mics, const double* harmonic_levels, size_t n_levels,
                                      double interferer_ratio, int interferer_odd_harmonics, double c,
                                      emt_distortion_report* out);
EMT_API int emt_distortion_report_write_json(const emt_distortion_report* report, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* EMTEST_H_ */
