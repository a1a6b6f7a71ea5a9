#include "hvs/scene.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hvs/errors.hpp"
#include "hvs/util.hpp"

namespace hvs {

using nlohmann::json;

bool AngularBox::contains(const Direction& d) const {
  bool phi_ok = phi_min <= phi_max ? (d.phi >= phi_min && d.phi <= phi_max)
                                   : (d.phi >= phi_min || d.phi <= phi_max);
  return phi_ok && d.mu >= mu_min && d.mu <= mu_max;
}

const char* to_string(Difficulty d) {
  switch (d) {
    case Difficulty::easy: return "easy";
    case Difficulty::medium: return "medium";
    case Difficulty::hard: return "hard";
    case Difficulty::extreme: return "extreme";
  }
  return "?";
}

const char* to_string(TaskKind t) {
  return t == TaskKind::object_seeking ? "object" : "person";
}

Difficulty difficulty_from_string(const std::string& s) {
  if (s == "easy") return Difficulty::easy;
  if (s == "medium") return Difficulty::medium;
  if (s == "hard") return Difficulty::hard;
  if (s == "extreme") return Difficulty::extreme;
  throw SceneError(SceneErrorKind::malformed_record, "unknown difficulty \"" + s + "\"");
}

TaskKind task_from_string(const std::string& s) {
  if (s == "object") return TaskKind::object_seeking;
  if (s == "person") return TaskKind::person_seeking;
  throw SceneError(SceneErrorKind::malformed_record, "unknown task \"" + s + "\"");
}

namespace {

const json& require(const json& obj, const char* field, const std::string& where) {
  auto it = obj.find(field);
  if (it == obj.end())
    throw SceneError(SceneErrorKind::malformed_record,
                     where + ": missing field \"" + field + "\"");
  return *it;
}

double require_number(const json& obj, const char* field, const std::string& where) {
  const json& v = require(obj, field, where);
  if (!v.is_number())
    throw SceneError(SceneErrorKind::malformed_record,
                     where + ": field \"" + field + "\" must be a number");
  return v.get<double>();
}

std::string require_string(const json& obj, const char* field, const std::string& where) {
  const json& v = require(obj, field, where);
  if (!v.is_string())
    throw SceneError(SceneErrorKind::malformed_record,
                     where + ": field \"" + field + "\" must be a string");
  return v.get<std::string>();
}

Direction read_direction(const json& obj, const char* phi_field, const char* mu_field,
                         const std::string& where) {
  double phi = require_number(obj, phi_field, where);
  double mu = require_number(obj, mu_field, where);
  try {
    return Direction(phi, mu);
  } catch (const std::invalid_argument& e) {
    throw SceneError(SceneErrorKind::malformed_record, where + ": " + e.what());
  }
}

}  // namespace

SceneAnnotation parse_scene_record(const std::string& json_text) {
  json rec = json::parse(json_text, nullptr, false);
  if (rec.is_discarded() || !rec.is_object())
    throw SceneError(SceneErrorKind::malformed_record, "record is not a JSON object");

  SceneAnnotation scene;
  scene.scene_id = require_string(rec, "scene_id", "record");
  const std::string where = "scene \"" + scene.scene_id + "\"";
  scene.pano_path = require_string(rec, "pano_path", where);
  scene.category = require_string(rec, "category", where);

  const json& ents = require(rec, "entities", where);
  if (!ents.is_array())
    throw SceneError(SceneErrorKind::malformed_record, where + ": \"entities\" must be an array");
  for (const json& e : ents) {
    SemanticEntity ent;
    ent.label = require_string(e, "label", where + " entity");
    std::string ctx = where + " entity \"" + ent.label + "\"";
    ent.coord = read_direction(e, "phi", "mu", ctx);
    ent.salience = static_cast<int>(require_number(e, "salience", ctx));
    scene.entities.push_back(std::move(ent));
  }

  const json& tgts = require(rec, "targets", where);
  if (!tgts.is_array())
    throw SceneError(SceneErrorKind::malformed_record, where + ": \"targets\" must be an array");
  for (const json& t : tgts) {
    TargetSpec tgt;
    tgt.label = require_string(t, "label", where + " target");
    std::string ctx = where + " target \"" + tgt.label + "\"";
    tgt.instruction = require_string(t, "instruction", ctx);
    tgt.coord = read_direction(t, "phi", "mu", ctx);
    const json& bb = require(t, "bbox", ctx);
    tgt.bbox.phi_min = wrap_azimuth(require_number(bb, "phi_min", ctx + " bbox"));
    tgt.bbox.phi_max = wrap_azimuth(require_number(bb, "phi_max", ctx + " bbox"));
    tgt.bbox.mu_min = require_number(bb, "mu_min", ctx + " bbox");
    tgt.bbox.mu_max = require_number(bb, "mu_max", ctx + " bbox");
    if (tgt.bbox.mu_min > tgt.bbox.mu_max)
      throw SceneError(SceneErrorKind::malformed_record, ctx + ": bbox mu_min > mu_max");
    if (!tgt.bbox.contains(tgt.coord))
      throw SceneError(SceneErrorKind::bbox_outside,
                       ctx + ": coordinate lies outside its own bbox");
    tgt.difficulty = difficulty_from_string(require_string(t, "difficulty", ctx));
    tgt.task = task_from_string(require_string(t, "task", ctx));
    scene.targets.push_back(std::move(tgt));
  }
  return scene;
}

std::vector<SceneAnnotation> load_manifest(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw SceneError(SceneErrorKind::missing_file, "manifest not found: " + path.string());
  std::ifstream in(path);
  if (!in) throw SceneError(SceneErrorKind::missing_file, "cannot open " + path.string());

  std::vector<SceneAnnotation> scenes;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    SceneAnnotation scene;
    try {
      scene = parse_scene_record(line);
    } catch (const SceneError& e) {
      throw SceneError(SceneErrorKind::malformed_record,
                       path.filename().string() + ":" + std::to_string(line_no) + ": " +
                           e.what());
    }
    if (!seen.insert(scene.scene_id).second)
      throw SceneError(SceneErrorKind::duplicate_scene_id,
                       "duplicate scene_id \"" + scene.scene_id + "\" in " + path.string());
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

LoadedScene load_scene(const SceneAnnotation& record, const std::filesystem::path& base_dir) {
  std::filesystem::path pano = record.pano_path;
  if (pano.is_relative()) pano = base_dir / pano;
  if (!std::filesystem::exists(pano))
    throw SceneError(SceneErrorKind::missing_file,
                     "scene \"" + record.scene_id + "\": panorama not found: " + pano.string());
  LoadedScene scene{record, load_image(pano)};
  const Image& img = scene.panorama;
  if (img.width != 2 * img.height)
    throw SceneError(SceneErrorKind::bad_aspect,
                     "scene \"" + record.scene_id + "\": panorama is " +
                         std::to_string(img.width) + "x" + std::to_string(img.height) +
                         ", expected 2:1");
  if (img.width < 64)
    throw SceneError(SceneErrorKind::malformed_record,
                     "scene \"" + record.scene_id + "\": panorama narrower than 64 px");
  return scene;
}

LoadedScene load_scene_file(const std::filesystem::path& annotation_path) {
  if (!std::filesystem::exists(annotation_path))
    throw SceneError(SceneErrorKind::missing_file,
                     "annotation not found: " + annotation_path.string());
  SceneAnnotation rec = parse_scene_record(read_text_file(annotation_path));
  return load_scene(rec, annotation_path.parent_path());
}

}  // namespace hvs
