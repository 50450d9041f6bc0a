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

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "emtest/geometry.hpp"
#include "emtest/wavefield.hpp"

namespace emtest {

struct RecordedMic {
  int id = 0;
  Vec3 pos = Vec3::Zero();
  double sensitivity = 1.0;  // V/Pa
};

// Simultaneously acquired per-microphone sample streams plus the geometry
// needed to refocus them later. Samples are stored channel-major.
class AcousticRecord {
 public:
  AcousticRecord(double sample_rate, double c, const Vec3& center, double radius, std::vector<RecordedMic> mics,
                 std::size_t num_samples, std::vector<double> samples);

  double sample_rate() const noexcept { return sample_rate_; }
  double c() const noexcept { return c_; }
  const Vec3& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  std::span<const RecordedMic> mics() const noexcept { return mics_; }
  std::size_t channel_count() const noexcept { return mics_.size(); }
  std::size_t num_samples() const noexcept { return num_samples_; }
  double duration() const noexcept { return static_cast<double>(num_samples_) / sample_rate_; }
  std::span<const double> channel(std::size_t i) const;
  std::span<const double> samples() const noexcept { return samples_; }

 private:
  double sample_rate_;
  double c_;
  Vec3 center_;
  double radius_;
  std::vector<RecordedMic> mics_;
  std::size_t num_samples_;
  std::vector<double> samples_;
};

// Minimum samples per period of the highest stimulus frequency.
inline constexpr double kMinOversampling = 16.0;

// channel_i[k] = sensitivity_i * superpose(sources, pos_i, k / sample_rate).
// Inactive microphones are recorded too; activity is a processing choice.
AcousticRecord synth_record(const ArrayGeometry& g, std::span<const WaveSource> sources, double sample_rate,
                            double duration, const Medium& m);

// A record is a directory holding manifest.json and samples.bin (f64le,
// channel-major). Files are written to temporaries and renamed into place.
void save_record(const AcousticRecord& rec, const std::filesystem::path& dir);
AcousticRecord load_record(const std::filesystem::path& dir);

}  // namespace emtest
