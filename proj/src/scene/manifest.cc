// Copyright 2026 The scenefoa Authors
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

#include "scenefoa/scene/manifest.h"

#include <cmath>
#include <set>
#include <sstream>

#include "scenefoa/core/error.h"
#include "scenefoa/io/wav.h"

namespace scenefoa::scene {

using nlohmann::json;

namespace {

constexpr char kInlineMaterial[] = "@inline";

[[noreturn]] void Syntax(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kManifestSyntax, where + ": " + what);
}

const json& Require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) Syntax(where, std::string("missing '") + key + "'");
  return obj.at(key);
}

double Number(const json& j, const std::string& where) {
  if (!j.is_number()) Syntax(where, "expected a number");
  return j.get<double>();
}

Vec3 Point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) Syntax(where, "expected [x, y, z]");
  return {Number(j[0], where + "[0]"), Number(j[1], where + "[1]"), Number(j[2], where + "[2]")};
}

// Reads exactly 7 numbers; range checks happen in Validate.
Bands ReadBands(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != kNumBands) Syntax(where, "expected 7 band values");
  Bands b{};
  for (int i = 0; i < kNumBands; ++i) b[i] = Number(j[i], where + "[" + std::to_string(i) + "]");
  return b;
}

MaterialBands ReadMaterial(const json& j, const std::string& where) {
  if (!j.is_object()) Syntax(where, "expected a material object");
  MaterialBands m;
  m.absorption = ReadBands(Require(j, "absorption", where), where + ".absorption");
  m.scattering = j.contains("scattering") ? ReadBands(j["scattering"], where + ".scattering")
                                          : AssignMaterial(SemanticClass::kOther).scattering;
  return m;
}

json BandsJson(const Bands& b) { return json(std::vector<double>(b.begin(), b.end())); }

json MaterialJson(const MaterialBands& m) {
  return {{"absorption", BandsJson(m.absorption)}, {"scattering", BandsJson(m.scattering)}};
}

json PointJson(const Vec3& p) { return json::array({p.x(), p.y(), p.z()}); }

std::vector<PositionKey> ReadPositions(const json& j, const std::string& where) {
  if (!j.is_array()) Syntax(where, "expected a list of keyframes");
  std::vector<PositionKey> keys;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    keys.push_back({Number(Require(j[i], "t", w), w + ".t"), Point(Require(j[i], "p", w), w + ".p")});
  }
  return keys;
}

json PositionsJson(const std::vector<PositionKey>& keys) {
  json out = json::array();
  for (const auto& k : keys) out.push_back({{"t", k.t}, {"p", PointJson(k.p)}});
  return out;
}

// Material by reference: a `materials` key, or a semantic class name.
std::optional<MaterialBands> Resolve(const std::string& ref,
                                     const std::map<std::string, MaterialBands>& materials) {
  if (auto it = materials.find(ref); it != materials.end()) return it->second;
  if (IsKnownClass(ref)) return AssignMaterial(ref);
  return std::nullopt;
}

void CheckBands(const Bands& b, const std::string& where, std::vector<std::string>& out) {
  for (int i = 0; i < kNumBands; ++i) {
    if (!(b[i] >= 0.0 && b[i] <= 1.0)) {
      out.push_back(where + "[" + std::to_string(i) + "] out of [0,1]");
    }
  }
}

template <typename Key>
void CheckIncreasing(const std::vector<Key>& keys, double duration, const std::string& where,
                     std::vector<std::string>& out) {
  for (size_t i = 0; i < keys.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "].t";
    if (!std::isfinite(keys[i].t) || keys[i].t < 0.0 || keys[i].t > duration) {
      out.push_back(w + " outside [0, duration]");
    }
    if (i > 0 && !(keys[i].t > keys[i - 1].t)) out.push_back(w + " not strictly increasing");
  }
}

}  // namespace

double Surface::Area() const {
  return 0.5 * (vertices[1] - vertices[0]).cross(vertices[2] - vertices[0]).norm();
}

Vec3 Surface::Normal() const {
  return (vertices[1] - vertices[0]).cross(vertices[2] - vertices[0]).normalized();
}

size_t SceneManifest::frame_count() const {
  return static_cast<size_t>(std::llround(duration * sample_rate));
}

double SceneManifest::RoomVolume() const {
  if (shoebox) return shoebox->size.x() * shoebox->size.y() * shoebox->size.z();
  if (room_volume) return *room_volume;
  // Divergence theorem over the triangle soup; exact for closed meshes.
  double v = 0.0;
  for (const auto& s : surfaces) {
    v += s.vertices[0].dot(s.vertices[1].cross(s.vertices[2])) / 6.0;
  }
  return std::abs(v);
}

double SceneManifest::TotalArea() const {
  double a = 0.0;
  for (const auto& s : surfaces) a += s.Area();
  return a;
}

std::vector<Surface> ShoeboxSurfaces(const Shoebox& box,
                                     const std::map<std::string, MaterialBands>& materials) {
  const double lx = box.size.x(), ly = box.size.y(), lz = box.size.z();
  // Corner quads per face, wound so normals point into the room.
  const std::array<std::array<Vec3, 4>, 6> quads = {{
      {Vec3(0, 0, 0), Vec3(0, ly, 0), Vec3(0, ly, lz), Vec3(0, 0, lz)},        // x_min, +x
      {Vec3(lx, 0, 0), Vec3(lx, 0, lz), Vec3(lx, ly, lz), Vec3(lx, ly, 0)},    // x_max, -x
      {Vec3(0, 0, 0), Vec3(0, 0, lz), Vec3(lx, 0, lz), Vec3(lx, 0, 0)},        // y_min, +y
      {Vec3(0, ly, 0), Vec3(lx, ly, 0), Vec3(lx, ly, lz), Vec3(0, ly, lz)},    // y_max, -y
      {Vec3(0, 0, 0), Vec3(lx, 0, 0), Vec3(lx, ly, 0), Vec3(0, ly, 0)},        // z_min, +z
      {Vec3(0, 0, lz), Vec3(0, ly, lz), Vec3(lx, ly, lz), Vec3(lx, 0, lz)},    // z_max, -z
  }};
  std::vector<Surface> out;
  for (int f = 0; f < 6; ++f) {
    const std::string& ref = box.faces[f];
    Surface s;
    s.semantic_class = ParseClass(ref);
    if (auto m = Resolve(ref, materials)) s.material = *m;
    s.material_ref = ref;
    s.from_shoebox = true;
    const auto& q = quads[f];
    s.vertices = {q[0], q[1], q[2]};
    out.push_back(s);
    s.vertices = {q[0], q[2], q[3]};
    out.push_back(s);
  }
  return out;
}

SceneManifest FromJson(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) Syntax("$", "manifest must be a JSON object");
  SceneManifest m;
  m.base_dir = base_dir;
  m.sample_rate = doc.value("sample_rate", m.sample_rate);
  if (doc.contains("duration_s")) m.duration = Number(doc["duration_s"], "duration_s");
  if (doc.contains("speed_of_sound")) m.speed_of_sound = Number(doc["speed_of_sound"], "speed_of_sound");
  if (doc.contains("air_attenuation_bands")) {
    m.air_attenuation = ReadBands(doc["air_attenuation_bands"], "air_attenuation_bands");
  }
  m.seed = doc.value("seed", uint64_t{0});
  if (doc.contains("room_volume")) m.room_volume = Number(doc["room_volume"], "room_volume");

  if (doc.contains("materials")) {
    if (!doc["materials"].is_object()) Syntax("materials", "expected an object");
    for (const auto& [name, entry] : doc["materials"].items()) {
      m.materials[name] = ReadMaterial(entry, "materials." + name);
    }
  }

  if (doc.contains("shoebox")) {
    const json& sb = doc["shoebox"];
    Shoebox box;
    if (sb.is_array()) {
      box.size = Point(sb, "shoebox");
    } else if (sb.is_object() && sb.contains("size")) {
      box.size = Point(sb["size"], "shoebox.size");
    } else {
      box.size = {Number(Require(sb, "Lx", "shoebox"), "shoebox.Lx"),
                  Number(Require(sb, "Ly", "shoebox"), "shoebox.Ly"),
                  Number(Require(sb, "Lz", "shoebox"), "shoebox.Lz")};
    }
    if (sb.is_object() && sb.contains("faces")) {
      for (int f = 0; f < 6; ++f) {
        if (sb["faces"].contains(kShoeboxFaceNames[f])) {
          box.faces[f] = sb["faces"][kShoeboxFaceNames[f]].get<std::string>();
        }
      }
    }
    m.shoebox = box;
    m.surfaces = ShoeboxSurfaces(box, m.materials);
  }

  if (doc.contains("surfaces")) {
    const json& list = doc["surfaces"];
    if (!list.is_array()) Syntax("surfaces", "expected a list");
    for (size_t i = 0; i < list.size(); ++i) {
      const std::string w = "surfaces[" + std::to_string(i) + "]";
      const json& verts = Require(list[i], "vertices", w);
      if (!verts.is_array() || verts.size() != 3) Syntax(w + ".vertices", "expected 3 points");
      Surface s;
      for (int k = 0; k < 3; ++k) s.vertices[k] = Point(verts[k], w + ".vertices[" + std::to_string(k) + "]");
      const std::string cls = list[i].value("class", "other");
      s.semantic_class = ParseClass(cls);
      s.material = AssignMaterial(s.semantic_class);
      if (list[i].contains("material")) {
        const json& mat = list[i]["material"];
        if (mat.is_string()) {
          s.material_ref = mat.get<std::string>();
          if (auto r = Resolve(s.material_ref, m.materials)) s.material = *r;
        } else {
          s.material = ReadMaterial(mat, w + ".material");
          s.material_ref = kInlineMaterial;
        }
      }
      m.surfaces.push_back(s);
    }
  }

  const json& sources = Require(doc, "sources", "$");
  if (!sources.is_array()) Syntax("sources", "expected a list");
  for (size_t i = 0; i < sources.size(); ++i) {
    const std::string w = "sources[" + std::to_string(i) + "]";
    const json& js = sources[i];
    SourceTrack src;
    src.id = js.value("id", "src" + std::to_string(i));
    const json& sig = Require(js, "signal", w);
    if (sig.is_string()) {
      src.signal_path = sig.get<std::string>();
    } else if (sig.is_object() && sig.contains("procedural")) {
      src.procedural = ProceduralFromJson(sig["procedural"]);
    } else {
      Syntax(w + ".signal", "expected a WAV path or {\"procedural\": {...}}");
    }
    src.positions = ReadPositions(Require(js, "positions", w), w + ".positions");
    if (js.contains("active")) {
      for (size_t k = 0; k < js["active"].size(); ++k) {
        const std::string wk = w + ".active[" + std::to_string(k) + "]";
        const json& a = js["active"][k];
        src.active.push_back({Number(Require(a, "t", wk), wk + ".t"), Require(a, "on", wk).get<bool>()});
      }
    }
    m.sources.push_back(std::move(src));
  }

  const json& listener = Require(doc, "listener", "$");
  m.listener.positions = ReadPositions(Require(listener, "positions", "listener"), "listener.positions");
  if (listener.contains("orientations")) {
    const json& ors = listener["orientations"];
    for (size_t k = 0; k < ors.size(); ++k) {
      const std::string wk = "listener.orientations[" + std::to_string(k) + "]";
      const json& q = Require(ors[k], "q", wk);
      if (!q.is_array() || q.size() != 4) Syntax(wk + ".q", "expected [w, x, y, z]");
      const double w = Number(q[0], wk + ".q[0]"), x = Number(q[1], wk + ".q[1]");
      const double y = Number(q[2], wk + ".q[2]"), z = Number(q[3], wk + ".q[3]");
      OrientationKey key;
      key.t = Number(Require(ors[k], "t", wk), wk + ".t");
      key.given_norm = std::sqrt(w * w + x * x + y * y + z * z);
      if (key.given_norm > 0.0 && std::isfinite(key.given_norm)) {
        key.q = foa::Rotation::FromQuaternionNormalized(w, x, y, z);
      }
      m.listener.orientations.push_back(key);
    }
  }
  return m;
}

json ToJson(const SceneManifest& m) {
  json doc;
  doc["sample_rate"] = m.sample_rate;
  doc["duration_s"] = m.duration;
  doc["speed_of_sound"] = m.speed_of_sound;
  doc["air_attenuation_bands"] = BandsJson(m.air_attenuation);
  doc["seed"] = m.seed;
  if (m.room_volume) doc["room_volume"] = *m.room_volume;
  json materials = json::object();
  for (const auto& [name, mat] : m.materials) materials[name] = MaterialJson(mat);
  doc["materials"] = materials;
  if (m.shoebox) {
    json faces = json::object();
    for (int f = 0; f < 6; ++f) faces[kShoeboxFaceNames[f]] = m.shoebox->faces[f];
    doc["shoebox"] = {{"Lx", m.shoebox->size.x()},
                      {"Ly", m.shoebox->size.y()},
                      {"Lz", m.shoebox->size.z()},
                      {"faces", faces}};
  }
  json surfaces = json::array();
  for (const auto& s : m.surfaces) {
    if (s.from_shoebox) continue;
    json js = {{"vertices", json::array({PointJson(s.vertices[0]), PointJson(s.vertices[1]),
                                         PointJson(s.vertices[2])})},
               {"class", std::string(ClassName(s.semantic_class))}};
    if (s.material_ref == kInlineMaterial) {
      js["material"] = MaterialJson(s.material);
    } else if (!s.material_ref.empty()) {
      js["material"] = s.material_ref;
    }
    surfaces.push_back(js);
  }
  doc["surfaces"] = surfaces;
  json sources = json::array();
  for (const auto& src : m.sources) {
    json js = {{"id", src.id}, {"positions", PositionsJson(src.positions)}};
    js["signal"] = src.procedural ? json{{"procedural", ToJson(*src.procedural)}} : json(src.signal_path);
    if (!src.active.empty()) {
      json act = json::array();
      for (const auto& a : src.active) act.push_back({{"t", a.t}, {"on", a.on}});
      js["active"] = act;
    }
    sources.push_back(js);
  }
  doc["sources"] = sources;
  json listener = {{"positions", PositionsJson(m.listener.positions)}};
  if (!m.listener.orientations.empty()) {
    json ors = json::array();
    for (const auto& o : m.listener.orientations) {
      const auto q = o.q.Wxyz();
      ors.push_back({{"t", o.t}, {"q", json::array({q[0], q[1], q[2], q[3]})}});
    }
    listener["orientations"] = ors;
  }
  doc["listener"] = listener;
  return doc;
}

std::vector<std::string> Validate(const SceneManifest& m) {
  std::vector<std::string> out;
  if (m.sample_rate <= 0) out.push_back("sample_rate must be > 0");
  if (!(m.duration > 0.0) || !std::isfinite(m.duration)) out.push_back("duration_s must be > 0");
  if (!(m.speed_of_sound > 0.0)) out.push_back("speed_of_sound must be > 0");
  for (int b = 0; b < kNumBands; ++b) {
    if (!(m.air_attenuation[b] >= 0.0)) {
      out.push_back("air_attenuation_bands[" + std::to_string(b) + "] must be >= 0");
    }
  }
  if (m.room_volume && !(*m.room_volume > 0.0)) out.push_back("room_volume must be > 0");
  for (const auto& [name, mat] : m.materials) {
    CheckBands(mat.absorption, "materials." + name + ".absorption", out);
    CheckBands(mat.scattering, "materials." + name + ".scattering", out);
  }
  if (m.shoebox) {
    for (int k = 0; k < 3; ++k) {
      if (!(m.shoebox->size[k] > 0.0)) {
        out.push_back("shoebox.size[" + std::to_string(k) + "] must be > 0");
      }
    }
    for (int f = 0; f < 6; ++f) {
      if (!Resolve(m.shoebox->faces[f], m.materials)) {
        out.push_back(std::string("shoebox.faces.") + kShoeboxFaceNames[f] + ": unknown material '" +
                      m.shoebox->faces[f] + "'");
      }
    }
  }
  const size_t first_explicit = m.shoebox_surface_count();
  for (size_t i = first_explicit; i < m.surfaces.size(); ++i) {
    const Surface& s = m.surfaces[i];
    const std::string w = "surfaces[" + std::to_string(i - first_explicit) + "]";
    if (!(s.Area() > 1e-9)) out.push_back(w + " is degenerate (area <= 1e-9 m^2)");
    if (s.material_ref == kInlineMaterial) {
      CheckBands(s.material.absorption, w + ".material.absorption", out);
      CheckBands(s.material.scattering, w + ".material.scattering", out);
    } else if (!s.material_ref.empty() && !Resolve(s.material_ref, m.materials)) {
      out.push_back(w + ".material: unknown material '" + s.material_ref + "'");
    }
  }
  if (m.sources.empty()) out.push_back("sources: at least one source is required");
  std::set<std::string> ids;
  for (size_t i = 0; i < m.sources.size(); ++i) {
    const auto& src = m.sources[i];
    const std::string w = "sources[" + std::to_string(i) + "]";
    if (!ids.insert(src.id).second) out.push_back(w + ".id duplicates '" + src.id + "'");
    if (src.positions.empty()) out.push_back(w + ".positions: at least one keyframe is required");
    CheckIncreasing(src.positions, m.duration, w + ".positions", out);
    CheckIncreasing(src.active, m.duration, w + ".active", out);
    if (!src.dry_signal.empty()) {
      const auto expected = static_cast<long long>(m.frame_count());
      const auto got = static_cast<long long>(src.dry_signal.size());
      if (std::llabs(got - expected) > 1) {
        out.push_back(w + ".signal has " + std::to_string(got) + " samples, expected " +
                      std::to_string(expected));
      }
    }
  }
  if (m.listener.positions.empty()) out.push_back("listener.positions: at least one keyframe is required");
  CheckIncreasing(m.listener.positions, m.duration, "listener.positions", out);
  for (size_t k = 0; k < m.listener.orientations.size(); ++k) {
    const std::string w = "listener.orientations[" + std::to_string(k) + "]";
    if (!(std::abs(m.listener.orientations[k].given_norm - 1.0) <= 1e-6)) {
      out.push_back(w + ".q is not a unit quaternion");
    }
  }
  CheckIncreasing(m.listener.orientations, m.duration, "listener.orientations", out);
  return out;
}

void LoadDrySignals(SceneManifest& m) {
  std::vector<std::string> problems;
  const size_t frames = m.frame_count();
  for (size_t i = 0; i < m.sources.size(); ++i) {
    auto& src = m.sources[i];
    const std::string w = "sources[" + std::to_string(i) + "].signal";
    if (src.procedural) {
      src.dry_signal = Synthesize(*src.procedural, m.sample_rate, frames);
      continue;
    }
    try {
      const io::WavData wav = io::ReadWav(m.base_dir / src.signal_path);
      if (wav.channels.size() != 1) {
        problems.push_back(w + ": dry signal must be mono");
      } else if (wav.sample_rate != m.sample_rate) {
        problems.push_back(w + ": sample rate " + std::to_string(wav.sample_rate) +
                           " differs from scene rate");
      } else {
        src.dry_signal = wav.channels[0];
      }
    } catch (const Error& e) {
      problems.push_back(w + ": " + e.what());
    }
  }
  if (!problems.empty()) throw ManifestInvalidError(problems);
  // Accept a one-sample mismatch from rounding; fix the length exactly.
  auto violations = Validate(m);
  if (!violations.empty()) throw ManifestInvalidError(violations);
  for (auto& src : m.sources) src.dry_signal.resize(frames, 0.0);
}

SceneManifest LoadManifestFromString(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kManifestSyntax, e.what());
  }
  SceneManifest m;
  try {
    m = FromJson(doc, base_dir);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kManifestSyntax, e.what());
  }
  auto violations = Validate(m);
  if (!violations.empty()) throw ManifestInvalidError(violations);
  LoadDrySignals(m);
  return m;
}

SceneManifest LoadManifest(const std::filesystem::path& path) {
  return LoadManifestFromString(io::ReadFile(path), path.parent_path());
}

void SaveManifest(const std::filesystem::path& path, const SceneManifest& m) {
  io::WriteFileAtomic(path, ToJson(m).dump(2) + "\n");
}

}  // namespace scenefoa::scene
