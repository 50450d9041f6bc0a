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

// emtest: command-line front end over the C API in emtest.h.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>

#include "emtest/emtest.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitArgument = 2;
constexpr int kExitIo = 3;
constexpr int kExitDomain = 4;
constexpr double kPi = 3.14159265358979323846;

struct CliFailure {
  int exit_code;
  std::string message;
};

void check(int status) {
  if (status == EMT_OK) return;
  int code = kExitDomain;
  switch (emt_status_category(status)) {
    case EMT_CATEGORY_ARGUMENT: code = kExitArgument; break;
    case EMT_CATEGORY_IO: code = kExitIo; break;
    default: break;
  }
  throw CliFailure{code, std::string(emt_status_name(status)) + ": " + emt_last_error()};
}

struct GeometryDeleter {
  void operator()(emt_geometry* g) const { emt_geometry_free(g); }
};
struct RecordDeleter {
  void operator()(emt_record* r) const { emt_record_free(r); }
};
using GeometryPtr = std::unique_ptr<emt_geometry, GeometryDeleter>;
using RecordPtr = std::unique_ptr<emt_record, RecordDeleter>;

RecordPtr load(const std::string& dir) {
  emt_record* raw = nullptr;
  check(emt_record_load(dir.c_str(), &raw));
  return RecordPtr(raw);
}

void append(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

std::string csv_row(std::initializer_list<double> values) {
  std::string row;
  bool first = true;
  for (double v : values) {
    if (!first) row.push_back(',');
    append(row, v);
    first = false;
  }
  row.push_back('\n');
  return row;
}

void write_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw CliFailure{kExitIo, "cannot write " + tmp};
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CliFailure{kExitIo, "cannot move " + tmp + " to " + path + ": " + ec.message()};
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_atomic(path, text);
  }
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 1) throw CliFailure{kExitArgument, "--steps must be >= 1"};
  if (!(hi >= lo)) throw CliFailure{kExitArgument, "upper bound must not be below lower bound"};
  std::vector<double> out;
  for (int i = 0; i <= steps; ++i) out.push_back(lo + (hi - lo) * i / steps);
  return out;
}

void unit(std::vector<double>& v, const char* flag) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (!(n > 0.0)) throw CliFailure{kExitArgument, std::string(flag) + " must be a nonzero vector"};
  for (auto& x : v) x /= n;
}

// ---- transfer ------------------------------------------------------------

struct TransferArgs {
  std::string shape = "sphere";
  std::string aperture = "full";
  double phi0 = kPi / 2.0;
  double r = 0.1;
  double d = 0.1;
  double c = 343.0;
  int n_mics = 2048;
  std::vector<double> direction{1.0, 0.0, 0.0};
  double f_min = 0.0;
  double f_max = 5000.0;
  int steps = 500;
  std::string out;
};

void run_transfer(TransferArgs a) {
  unit(a.direction, "--direction");
  const double zero[3] = {0.0, 0.0, 0.0};
  const std::vector<double> freqs = linspace(a.f_min, a.f_max, a.steps);

  emt_geometry* raw = nullptr;
  if (a.shape == "cube") {
    check(emt_geometry_cubic(a.d, zero, nullptr, &raw));
  } else {
    check(emt_geometry_spherical(a.r, a.n_mics, zero, &raw));
  }
  GeometryPtr geometry(raw);

  // The illuminated side faces the incoming wave.
  const double toward[3] = {-a.direction[0], -a.direction[1], -a.direction[2]};
  int mode = EMT_APERTURE_FULL;
  if (a.aperture == "hemisphere") mode = EMT_APERTURE_HEMISPHERE;
  if (a.aperture == "cap") mode = EMT_APERTURE_CAP;
  raw = nullptr;
  check(emt_geometry_apply_aperture(geometry.get(), mode, toward, a.phi0, &raw));
  GeometryPtr shaded(raw);

  std::vector<double> numeric(freqs.size());
  check(emt_numeric_transfer(shaded.get(), EMT_STIMULUS_PLANE, a.direction.data(), a.c, freqs.data(), freqs.size(),
                             numeric.data()));

  std::string text = "frequency_hz,analytic,numeric\n";
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    double analytic = 0.0;
    if (a.shape == "cube") {
      check(emt_transfer_cube(freqs[i], a.d, a.direction.data(), a.c, &analytic));
    } else if (mode == EMT_APERTURE_FULL) {
      check(emt_transfer_sphere(freqs[i], a.r, a.c, &analytic));
    } else if (mode == EMT_APERTURE_HEMISPHERE) {
      check(emt_transfer_hemisphere(freqs[i], a.r, a.c, &analytic));
    } else {
      // Plane-wave limit of the cap formula, DC-normalized like the numeric column.
      check(emt_transfer_cap(freqs[i], a.r, 1e9 * a.r, a.phi0, a.c, &analytic));
      analytic /= (1.0 - std::cos(a.phi0)) / 2.0;
    }
    text += csv_row({freqs[i], analytic, numeric[i]});
  }
  emit(a.out, text);
}

// ---- reject-freqs --------------------------------------------------------

struct RejectArgs {
  double d = 0.1;
  double c = 343.0;
  int n_max = 5;
  std::string incidence = "axis";
  std::string out;
};

void run_reject(const RejectArgs& a) {
  const int incidence = a.incidence == "axis" ? EMT_INCIDENCE_AXIS : EMT_INCIDENCE_DIAGONAL;
  std::size_t count = 0;
  check(emt_reject_freqs(a.d, a.c, a.n_max, incidence, nullptr, 0, &count));
  std::vector<double> f(count);
  check(emt_reject_freqs(a.d, a.c, a.n_max, incidence, f.data(), f.size(), &count));
  std::string text = "n,frequency_hz\n";
  for (std::size_t i = 0; i < f.size(); ++i) text += csv_row({static_cast<double>(2 * i + 1), f[i]});
  emit(a.out, text);
}

// ---- resolution ----------------------------------------------------------

struct ResolutionArgs {
  double f = 10000.0;
  double c = 343.0;
  double e0_max = 0.05;
  int steps = 200;
  double r = 0.1;
  int n_mics = 4096;
  std::vector<double> direction{0.0, 0.0, 1.0};
  std::string out;
};

void run_resolution(ResolutionArgs a) {
  unit(a.direction, "--direction");
  double radius = 0.0;
  check(emt_resolution_radius(a.f, a.c, &radius));
  if (!(a.e0_max < a.r)) throw CliFailure{kExitDomain, "--e0-max must be below the sphere radius --r"};
  const std::vector<double> offsets = linspace(0.0, a.e0_max, a.steps);

  const double zero[3] = {0.0, 0.0, 0.0};
  emt_geometry* raw = nullptr;
  check(emt_geometry_spherical(a.r, a.n_mics, zero, &raw));
  GeometryPtr geometry(raw);

  auto response = [&](double e0) {
    emt_source s{EMT_SOURCE_SPHERICAL, {e0 * a.direction[0], e0 * a.direction[1], e0 * a.direction[2]},
                 1.0, 1.0, a.f, 0.0};
    double re = 0.0;
    double im = 0.0;
    check(emt_steady_response(geometry.get(), &s, a.f, a.c, &re, &im));
    return std::pair{re, im};
  };
  const auto [re0, im0] = response(0.0);
  const double norm0 = re0 * re0 + im0 * im0;

  std::string text = "e0_m,analytic,numeric\n";
  for (double e0 : offsets) {
    double w = 0.0;
    check(emt_resolution(e0, a.f, a.c, &w));
    const auto [re, im] = response(e0);
    // Signed: projection onto the centered-source response.
    const double numeric = (re * re0 + im * im0) / norm0;
    text += csv_row({e0, w, numeric});
  }
  emit(a.out, text);
  std::string line = "resolution_radius_m=";
  append(line, radius);
  std::cerr << line << "\n";
}

// ---- synth ---------------------------------------------------------------

struct SynthArgs {
  std::string scene;
  double sample_rate = 48000.0;
  double duration = 0.01;
  std::string out_record;
};

void run_synth(const SynthArgs& a) {
  emt_record* raw = nullptr;
  check(emt_record_synth_scene(a.scene.c_str(), a.sample_rate, a.duration, &raw));
  RecordPtr rec(raw);
  check(emt_record_save(rec.get(), a.out_record.c_str()));
}

// ---- thd -----------------------------------------------------------------

struct ThdArgs {
  std::string record;
  double f0 = 0.0;
  int k_max = 5;
  double r = 0.1;
  int n_mics = 4096;
  double c = 343.0;
  double interferer_ratio = 0.0;
  std::vector<double> harmonics{0.01, 0.01};
  bool odd_harmonics = false;
  std::string out_json;
};

std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  std::string s;
  append(s, v);
  return s;
}

void run_thd(const ThdArgs& a) {
  if (a.record.empty()) {
    emt_distortion_report report{};
    check(emt_distortion_experiment(a.r, a.n_mics, a.harmonics.data(), a.harmonics.size(), a.interferer_ratio,
                                    a.odd_harmonics ? 1 : 0, a.c, &report));
    if (a.out_json.empty() || a.out_json == "-") {
      const std::string tmp = std::filesystem::temp_directory_path() / "emtest_report.json";
      check(emt_distortion_report_write_json(&report, tmp.c_str()));
      std::ifstream in(tmp);
      std::cout << in.rdbuf();
      std::filesystem::remove(tmp);
    } else {
      check(emt_distortion_report_write_json(&report, a.out_json.c_str()));
    }
    return;
  }

  RecordPtr rec = load(a.record);
  double f0 = a.f0;
  if (f0 <= 0.0) check(emt_fundamental_for_radius(emt_record_radius(rec.get()), emt_record_c(rec.get()), &f0));
  const std::size_t n = emt_record_num_samples(rec.get());
  const double fs = emt_record_sample_rate(rec.get());
  std::vector<double> sum(n);
  check(emt_record_sum(rec.get(), sum.data(), sum.size()));
  emt_thd_report em{};
  emt_thd_report single{};
  check(emt_thd(sum.data(), n, fs, f0, a.k_max, &em));
  check(emt_thd(emt_record_channel(rec.get(), 0), n, fs, f0, a.k_max, &single));

  std::string text = "{\n";
  text += "  \"thd_single_mic\": " + json_number(single.thd) + ",\n";
  text += "  \"thd_em\": " + json_number(em.thd) + ",\n";
  text += "  \"f0_hz\": " + json_number(f0) + ",\n";
  text += "  \"n_mics\": " + std::to_string(emt_record_channel_count(rec.get())) + "\n}\n";
  emit(a.out_json, text);
}

// ---- focus ---------------------------------------------------------------

struct FocusArgs {
  std::string record;
  std::vector<double> target{0.0, 0.0, 0.0};
  double c = 0.0;
  std::string out;
};

void run_focus(const FocusArgs& a) {
  RecordPtr rec = load(a.record);
  const double c = a.c > 0.0 ? a.c : emt_record_c(rec.get());
  const std::size_t n = emt_record_num_samples(rec.get());
  std::vector<double> v(n);
  check(emt_virtual_focus(rec.get(), a.target.data(), c, v.data(), v.size(), nullptr, nullptr));
  const double fs = emt_record_sample_rate(rec.get());
  std::string text = "t_s,v\n";
  for (std::size_t k = 0; k < n; ++k) text += csv_row({static_cast<double>(k) / fs, v[k]});
  emit(a.out, text);
}

// ---- image ---------------------------------------------------------------

struct ImageArgs {
  std::string record;
  std::string plane = "z=0";
  double extent = 0.05;
  double resolution = 0.002;
  double freq = 0.0;
  double c = 0.0;
  std::string out_pgm;
  std::string out_csv;
};

void run_image(const ImageArgs& a) {
  const auto eq = a.plane.find('=');
  int plane = -1;
  double offset = 0.0;
  if (eq == 1) {
    const char axis = a.plane[0];
    plane = axis == 'x' ? EMT_PLANE_X : axis == 'y' ? EMT_PLANE_Y : axis == 'z' ? EMT_PLANE_Z : -1;
    const std::string num = a.plane.substr(2);
    const auto res = std::from_chars(num.data(), num.data() + num.size(), offset);
    if (res.ec != std::errc() || res.ptr != num.data() + num.size()) plane = -1;
  }
  if (plane < 0) throw CliFailure{kExitArgument, "--plane must look like x=<m>, y=<m> or z=<m>"};
  if (a.out_pgm.empty() && a.out_csv.empty()) throw CliFailure{kExitArgument, "give --out-pgm and/or --out-csv"};

  RecordPtr rec = load(a.record);
  const double c = a.c > 0.0 ? a.c : emt_record_c(rec.get());
  double center[3];
  check(emt_record_center(rec.get(), center));
  std::size_t width = 0;
  std::size_t height = 0;
  check(emt_planar_grid(center, plane, offset, a.extent, a.resolution, nullptr, 0, &width, &height));
  std::vector<double> grid(width * height * 3);
  check(emt_planar_grid(center, plane, offset, a.extent, a.resolution, grid.data(), width * height, &width, &height));
  std::vector<double> values(width * height);
  check(emt_image(rec.get(), grid.data(), width * height, a.freq, c, values.data()));
  if (!a.out_pgm.empty()) check(emt_image_write_pgm(values.data(), width, height, a.out_pgm.c_str()));
  if (!a.out_csv.empty()) check(emt_image_write_csv(grid.data(), values.data(), values.size(), a.out_csv.c_str()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Enclosing-microphone array simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(emt_version()));

  TransferArgs transfer;
  auto* cmd_transfer = app.add_subcommand("transfer", "Analytic and numeric transfer curves");
  cmd_transfer->add_option("--shape", transfer.shape, "Array shape")->check(CLI::IsMember({"sphere", "cube"}));
  cmd_transfer->add_option("--aperture", transfer.aperture, "Sensitive area")
      ->check(CLI::IsMember({"full", "hemisphere", "cap"}));
  cmd_transfer->add_option("--phi0", transfer.phi0, "Cap half-angle, rad");
  cmd_transfer->add_option("--r", transfer.r, "Sphere radius, m");
  cmd_transfer->add_option("--d", transfer.d, "Cube edge, m");
  cmd_transfer->add_option("--c", transfer.c, "Sound speed, m/s");
  cmd_transfer->add_option("--n-mics", transfer.n_mics, "Microphones on the sphere");
  cmd_transfer->add_option("--direction", transfer.direction, "Propagation direction x,y,z")
      ->delimiter(',')->expected(3);
  cmd_transfer->add_option("--f-min", transfer.f_min, "Lowest frequency, Hz");
  cmd_transfer->add_option("--f-max", transfer.f_max, "Highest frequency, Hz");
  cmd_transfer->add_option("--steps", transfer.steps, "Grid intervals");
  cmd_transfer->add_option("--out", transfer.out, "CSV output (default stdout)");

  RejectArgs reject;
  auto* cmd_reject = app.add_subcommand("reject-freqs", "Cube notch frequencies");
  cmd_reject->add_option("--d", reject.d, "Cube edge, m");
  cmd_reject->add_option("--c", reject.c, "Sound speed, m/s");
  cmd_reject->add_option("--n-max", reject.n_max, "Largest odd order");
  cmd_reject->add_option("--incidence", reject.incidence, "Wave incidence")
      ->check(CLI::IsMember({"axis", "diagonal"}));
  cmd_reject->add_option("--out", reject.out, "CSV output (default stdout)");

  ResolutionArgs resolution;
  auto* cmd_resolution = app.add_subcommand("resolution", "Spatial resolution curve and radius");
  cmd_resolution->add_option("--f", resolution.f, "Test frequency, Hz");
  cmd_resolution->add_option("--c", resolution.c, "Sound speed, m/s");
  cmd_resolution->add_option("--e0-max", resolution.e0_max, "Largest source offset, m");
  cmd_resolution->add_option("--steps", resolution.steps, "Grid intervals");
  cmd_resolution->add_option("--r", resolution.r, "Sphere radius for the numeric column, m");
  cmd_resolution->add_option("--n-mics", resolution.n_mics, "Microphones for the numeric column");
  cmd_resolution->add_option("--direction", resolution.direction, "Offset direction x,y,z")
      ->delimiter(',')->expected(3);
  cmd_resolution->add_option("--out", resolution.out, "CSV output (default stdout)");

  SynthArgs synth;
  auto* cmd_synth = app.add_subcommand("synth", "Build an acoustic record from a scene file");
  cmd_synth->add_option("--scene", synth.scene, "Scene JSON")->required();
  cmd_synth->add_option("--sample-rate", synth.sample_rate, "Hz");
  cmd_synth->add_option("--duration", synth.duration, "s");
  cmd_synth->add_option("--out-record", synth.out_record, "Record directory")->required();

  ThdArgs thd_args;
  auto* cmd_thd = app.add_subcommand("thd", "Distortion-in-noise experiment or THD of a record");
  cmd_thd->add_option("--record", thd_args.record, "Analyze this record instead of simulating");
  cmd_thd->add_option("--f0", thd_args.f0, "Fundamental for --record, Hz (default c/2r)");
  cmd_thd->add_option("--k-max", thd_args.k_max, "Highest harmonic order");
  cmd_thd->add_option("--r", thd_args.r, "Sphere radius, m");
  cmd_thd->add_option("--n-mics", thd_args.n_mics, "Microphones");
  cmd_thd->add_option("--c", thd_args.c, "Sound speed, m/s");
  cmd_thd->add_option("--interferer-ratio", thd_args.interferer_ratio, "External / PUT pressure");
  cmd_thd->add_option("--harmonics", thd_args.harmonics, "Levels of orders 2,3,...")->delimiter(',');
  cmd_thd->add_flag("--interferer-odd-harmonics", thd_args.odd_harmonics, "Interferer also at odd harmonics");
  cmd_thd->add_option("--out-json", thd_args.out_json, "JSON output (default stdout)");

  FocusArgs focus;
  auto* cmd_focus = app.add_subcommand("focus", "Virtually focus a record on one point");
  cmd_focus->add_option("--record", focus.record, "Record directory")->required();
  cmd_focus->add_option("--target", focus.target, "Focus point x,y,z")->delimiter(',')->expected(3);
  cmd_focus->add_option("--c", focus.c, "Sound speed override, m/s");
  cmd_focus->add_option("--out", focus.out, "CSV output (default stdout)");

  ImageArgs image;
  auto* cmd_image = app.add_subcommand("image", "Reconstruct an acoustic image from a record");
  cmd_image->add_option("--record", image.record, "Record directory")->required();
  cmd_image->add_option("--plane", image.plane, "Image plane, e.g. z=0");
  cmd_image->add_option("--extent", image.extent, "Half-width of the square grid, m");
  cmd_image->add_option("--resolution", image.resolution, "Grid step, m");
  cmd_image->add_option("--freq", image.freq, "Analysis frequency, Hz")->required();
  cmd_image->add_option("--c", image.c, "Sound speed override, m/s");
  cmd_image->add_option("--out-pgm", image.out_pgm, "PGM output");
  cmd_image->add_option("--out-csv", image.out_csv, "CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitArgument;
  }

  try {
    if (*cmd_transfer) run_transfer(transfer);
    if (*cmd_reject) run_reject(reject);
    if (*cmd_resolution) run_resolution(resolution);
    if (*cmd_synth) run_synth(synth);
    if (*cmd_thd) run_thd(thd_args);
    if (*cmd_focus) run_focus(focus);
    if (*cmd_image) run_image(image);
  } catch (const CliFailure& f) {
    std::cerr << "emtest: " << f.message << "\n";
    return f.exit_code;
  }
  return kExitOk;
}
