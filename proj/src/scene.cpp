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

#include "emtest/scene.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "emtest/error.hpp"

namespace emtest {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::kFormatViolation, "scene: " + what); }

double number(const json& j, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    bad(std::string("missing key '") + key + "'");
  }
  if (!j[key].is_number()) bad(std::string("key '") + key + "' must be a number");
  return j[key].get<double>();
}

Vec3 vec(const json& j, const char* key, std::optional<Vec3> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    bad(std::string("missing key '") + key + "'");
  }
  const json& a = j[key];
  if (!a.is_array() || a.size() != 3) bad(std::string("key '") + key + "' must be a 3-element array");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!a[i].is_number()) bad(std::string("key '") + key + "' must hold numbers");
    v[i] = a[i].get<double>();
  }
  return v;
}

std::string text(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) bad(std::string("key '") + key + "' must be a string");
  return j[key].get<std::string>();
}

ArrayGeometry parse_geometry(const json& g) {
  if (!g.is_object()) bad("'geometry' must be an object");
  const std::string kind = text(g, "kind");
  const Vec3 center = vec(g, "center_m", Vec3::Zero());
  if (kind == "sphere") {
    if (!g.contains("n_mics") || !g["n_mics"].is_number_integer()) bad("sphere geometry needs integer 'n_mics'");
    return spherical_em(number(g, "r_m"), g["n_mics"].get<int>(), center);
  }
  if (kind == "cube") return cubic_em(number(g, "d_m"), center);
  bad("geometry kind must be \"sphere\" or \"cube\", got \"" + kind + "\"");
}

WaveSource parse_source(const json& s) {
  if (!s.is_object()) bad("each source must be an object");
  const std::string kind = text(s, "kind");
  if (kind == "plane") {
    PlaneWave w;
    w.p0 = number(s, "p0_pa");
    w.f = number(s, "f_hz");
    const Vec3 dir = vec(s, "direction");
    if (!(dir.norm() > 0.0)) bad("plane wave direction must be nonzero");
    w.direction = dir.normalized();
    w.phase0 = number(s, "phase0_rad", 0.0);
    validate(w);
    return w;
  }
  if (kind == "spherical") {
    SphericalWave w;
    w.source_pos = vec(s, "pos_m");
    w.p_ref = number(s, "p_ref_pa");
    w.ref_dist = number(s, "ref_dist_m", 1.0);
    w.f = number(s, "f_hz");
    w.phase0 = number(s, "phase0_rad", 0.0);
    validate(w);
    return w;
  }
  bad("source kind must be \"plane\" or \"spherical\", got \"" + kind + "\"");
}

}  // namespace

Scene parse_scene(std::string_view text_in) {
  json j;
  try {
    j = json::parse(text_in);
  } catch (const json::exception& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be an object");
  Medium medium{number(j, "c_m_per_s", Medium{}.c)};
  validate(medium);
  if (!j.contains("geometry")) bad("missing key 'geometry'");
  ArrayGeometry geometry = parse_geometry(j["geometry"]);
  std::vector<WaveSource> sources;
  if (j.contains("sources")) {
    if (!j["sources"].is_array()) bad("'sources' must be an array");
    for (const auto& s : j["sources"]) sources.push_back(parse_source(s));
  }
  return Scene{medium, std::move(geometry), std::move(sources)};
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoFailure, "cannot open scene file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

}  // namespace emtest
