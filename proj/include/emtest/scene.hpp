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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "emtest/geometry.hpp"
#include "emtest/wavefield.hpp"

namespace emtest {

// A scene file declares the medium, one array and its stimuli:
//   {"c_m_per_s": 340,
//    "geometry": {"kind": "sphere", "r_m": 0.1, "n_mics": 2048, "center_m": [0,0,0]},
//    "sources": [{"kind": "plane", "p0_pa": 1, "f_hz": 1700, "direction": [1,0,0], "phase0_rad": 0},
//                {"kind": "spherical", "pos_m": [0,0,0], "p_ref_pa": 1, "ref_dist_m": 0.1,
//                 "f_hz": 1700, "phase0_rad": 0}]}
// Cubes use "d_m" instead of "r_m" and ignore "n_mics". Plane directions are
// normalized on load.
struct Scene {
  Medium medium;
  ArrayGeometry geometry;
  std::vector<WaveSource> sources;
};

// Malformed JSON or missing/mistyped keys throw FormatViolation.
Scene parse_scene(std::string_view text);
Scene load_scene(const std::filesystem::path& path);

}  // namespace emtest
