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

#include "emtest/record.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <system_error>

#include <json.hpp>

#include "atomic_file.hpp"
#include "emtest/error.hpp"

namespace emtest {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kManifestName = "manifest.json";
constexpr const char* kDataName = "samples.bin";

[[noreturn]] void format_violation(const std::string& what) { fail(ErrorCode::kFormatViolation, what); }


std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return out;
  }
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) format_violation(std::string(what) + " must be a 3-element array");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) format_violation(std::string(what) + " must hold numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

double number_at(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) format_violation(std::string("manifest key '") + key + "' must be a number");
  return j[key].get<double>();
}

std::string string_at(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) format_violation(std::string("manifest key '") + key + "' must be a string");
  return j[key].get<std::string>();
}

}  // namespace

AcousticRecord::AcousticRecord(double sample_rate, double c, const Vec3& center, double radius,
                               std::vector<RecordedMic> mics, std::size_t num_samples, std::vector<double> samples)
    : sample_rate_(sample_rate),
      c_(c),
      center_(center),
      radius_(radius),
      mics_(std::move(mics)),
      num_samples_(num_samples),
      samples_(std::move(samples)) {
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) fail(ErrorCode::kBadArgument, "sample rate must be > 0");
  if (!(c_ > 0.0) || !std::isfinite(c_)) fail(ErrorCode::kBadArgument, "sound speed must be > 0");
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) fail(ErrorCode::kBadRadius, "record radius must be > 0");
  if (mics_.empty()) fail(ErrorCode::kBadArgument, "a record needs at least one channel");
  if (samples_.size() != mics_.size() * num_samples_) {
    fail(ErrorCode::kChannelMismatch, "sample buffer does not match channel count x length");
  }
}

std::span<const double> AcousticRecord::channel(std::size_t i) const {
  if (i >= mics_.size()) fail(ErrorCode::kBadArgument, "channel index out of range");
  return std::span<const double>(samples_).subspan(i * num_samples_, num_samples_);
}

AcousticRecord synth_record(const ArrayGeometry& g, std::span<const WaveSource> sources, double sample_rate,
                            double duration, const Medium& m) {
  validate(m);
  if (!(duration > 0.0) || !std::isfinite(duration)) fail(ErrorCode::kBadDuration, "duration must be > 0");
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) fail(ErrorCode::kBadArgument, "sample rate must be > 0");
  for (const auto& s : sources) {
    validate(s);
    if (sample_rate < kMinOversampling * frequency(s)) {
      fail(ErrorCode::kUndersampledStimulus, "sample rate " + std::to_string(sample_rate) + " Hz is below 16x the " +
                                                 std::to_string(frequency(s)) + " Hz stimulus");
    }
  }
  const auto n = static_cast<std::size_t>(std::llround(duration * sample_rate));
  if (n == 0) fail(ErrorCode::kBadDuration, "duration is shorter than one sample");

  std::vector<RecordedMic> mics;
  mics.reserve(g.mic_count());
  std::vector<double> samples(g.mic_count() * n, 0.0);
  for (std::size_t i = 0; i < g.mic_count(); ++i) {
    const auto& mic = g.mics()[i];
    mics.push_back({mic.id, mic.pos, mic.sensitivity});
    double* ch = samples.data() + i * n;
    for (const auto& s : sources) {
      const Arrival a = arrival(s, mic.pos, m);
      const double amp = mic.sensitivity * a.amplitude;
      const double f = frequency(s);
      const double ph = phase_at_origin(s);
      for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / sample_rate;
        ch[k] += amp * std::cos(2.0 * kPi * f * (t - a.delay) + ph);
      }
    }
  }
  return AcousticRecord(sample_rate, m.c, g.center(), g.radius(), std::move(mics), n, std::move(samples));
}

void save_record(const AcousticRecord& rec, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) fail(ErrorCode::kIoFailure, "cannot create record directory " + dir.string());

  json mics = json::array();
  for (const auto& m : rec.mics()) {
    mics.push_back({{"id", m.id}, {"pos_m", vec_json(m.pos)}, {"sensitivity_v_per_pa", m.sensitivity}});
  }
  const json manifest = {
      {"version", 1},
      {"sample_rate_hz", rec.sample_rate()},
      {"c_m_per_s", rec.c()},
      {"center_m", vec_json(rec.center())},
      {"radius_m", rec.radius()},
      {"mics", mics},
      {"num_samples", rec.num_samples()},
      {"sample_format", "f64le"},
      {"layout", "channel-major"},
      {"data_file", kDataName},
  };

  const auto values = rec.samples();
  std::string bytes(values.size() * sizeof(std::uint64_t), '\0');
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint64_t le = to_le(std::bit_cast<std::uint64_t>(values[i]));
    std::memcpy(bytes.data() + i * sizeof(le), &le, sizeof(le));
  }
  write_file_atomic(dir / kDataName, bytes);
  const std::string text = manifest.dump(2) + "\n";
  write_file_atomic(dir / kManifestName, text);
}

AcousticRecord load_record(const fs::path& dir) {
  const fs::path manifest_path = dir / kManifestName;
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoFailure, "cannot open " + manifest_path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    format_violation("manifest is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) format_violation("manifest must be a JSON object");
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != 1) {
    format_violation("unsupported manifest version");
  }
  if (string_at(j, "sample_format") != "f64le") format_violation("sample_format must be \"f64le\"");
  if (string_at(j, "layout") != "channel-major") format_violation("layout must be \"channel-major\"");
  const std::string data_file = string_at(j, "data_file");
  if (data_file.empty() || fs::path(data_file).has_parent_path()) format_violation("data_file must be a plain file name");
  if (!j.contains("num_samples") || !j["num_samples"].is_number_unsigned()) {
    format_violation("num_samples must be a non-negative integer");
  }
  const auto num_samples = j["num_samples"].get<std::size_t>();
  const double sample_rate = number_at(j, "sample_rate_hz");
  const double c = number_at(j, "c_m_per_s");
  const double radius = number_at(j, "radius_m");
  if (!j.contains("center_m")) format_violation("manifest key 'center_m' missing");
  const Vec3 center = vec_from(j["center_m"], "center_m");

  if (!j.contains("mics") || !j["mics"].is_array() || j["mics"].empty()) format_violation("mics must be a non-empty array");
  std::vector<RecordedMic> mics;
  for (const auto& m : j["mics"]) {
    if (!m.is_object() || !m.contains("id") || !m["id"].is_number_integer()) format_violation("mic entries need an integer id");
    if (!m.contains("pos_m")) format_violation("mic entry missing pos_m");
    mics.push_back({m["id"].get<int>(), vec_from(m["pos_m"], "pos_m"), number_at(m, "sensitivity_v_per_pa")});
  }

  const fs::path data_path = dir / data_file;
  std::ifstream data(data_path, std::ios::binary);
  if (!data) fail(ErrorCode::kIoFailure, "cannot open " + data_path.string());
  const std::string bytes((std::istreambuf_iterator<char>(data)), std::istreambuf_iterator<char>());
  const std::size_t expected = mics.size() * num_samples * sizeof(std::uint64_t);
  if (bytes.size() != expected) {
    format_violation(data_file + " holds " + std::to_string(bytes.size()) + " bytes, manifest implies " +
                     std::to_string(expected));
  }
  std::vector<double> samples(mics.size() * num_samples);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::uint64_t le = 0;
    std::memcpy(&le, bytes.data() + i * sizeof(le), sizeof(le));
    samples[i] = std::bit_cast<double>(to_le(le));
  }
  try {
    return AcousticRecord(sample_rate, c, center, radius, std::move(mics), num_samples, std::move(samples));
  } catch (const Error& e) {
    format_violation(std::string("invalid record metadata: ") + e.what());
  }
}

}  // namespace emtest
