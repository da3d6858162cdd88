#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "pmsgp/scene.hpp"

namespace pmsgp {

// Canonical field order: seed, ground_height, workspace, objects.
nlohmann::ordered_json scene_to_json(const Scene& s);
// Throws Errc::kParse naming the offending field.
Scene scene_from_json(const nlohmann::json& j);

void save_scene(const Scene& s, const std::filesystem::path& path);
Scene load_scene(const std::filesystem::path& path);

}  // namespace pmsgp
