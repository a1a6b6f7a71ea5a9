#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hvs/angles.hpp"
#include "hvs/image.hpp"

namespace hvs {

struct SemanticEntity {
  std::string label;
  Direction coord;
  int salience = 0;  // larger means more prominent

  bool operator==(const SemanticEntity& o) const {
    return label == o.label && coord == o.coord && salience == o.salience;
  }
};

/// Axis-aligned box in sphere angles. phi_min > phi_max denotes a box that
/// wraps across the 0/360 seam. mu_min <= mu_max always.
struct AngularBox {
  double phi_min = 0.0, phi_max = 0.0;
  double mu_min = 0.0, mu_max = 0.0;

  bool contains(const Direction& d) const;
};

enum class Difficulty { easy, medium, hard, extreme };
enum class TaskKind { object_seeking, person_seeking };

const char* to_string(Difficulty d);
const char* to_string(TaskKind t);
Difficulty difficulty_from_string(const std::string& s);  // throws SceneError
TaskKind task_from_string(const std::string& s);

struct TargetSpec {
  std::string label;
  std::string instruction;
  Direction coord;
  AngularBox bbox;  // must contain coord
  Difficulty difficulty = Difficulty::easy;
  TaskKind task = TaskKind::object_seeking;
};

/// One annotated panorama: identity, image path, and ground-truth layout.
struct SceneAnnotation {
  std::string scene_id;
  std::string pano_path;  // relative to the annotation/manifest file
  std::string category;
  std::vector<SemanticEntity> entities;
  std::vector<TargetSpec> targets;
};

struct LoadedScene {
  SceneAnnotation annotation;
  Image panorama;  // validated 2:1 aspect, width >= 64
};

/// Parse one scene record from a JSON text (a single object).
/// Throws SceneError naming the missing/invalid field.
SceneAnnotation parse_scene_record(const std::string& json_text);

/// Load a manifest: one scene record per line (JSON Lines). Blank lines are
/// skipped. Duplicate scene_id values raise SceneError naming the id.
std::vector<SceneAnnotation> load_manifest(const std::filesystem::path& path);

/// Load the panorama referenced by a record and validate it (2:1 aspect,
/// width >= 64). base_dir anchors the record's relative pano_path.
LoadedScene load_scene(const SceneAnnotation& record, const std::filesystem::path& base_dir);

/// Convenience: read a single-record annotation file and its panorama.
LoadedScene load_scene_file(const std::filesystem::path& annotation_path);

}  // namespace hvs
