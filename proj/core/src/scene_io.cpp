#include "pmsgp/scene_io.hpp"

#include <fstream>
#include <set>

namespace pmsgp {
namespace {

template <typename T>
T field(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(Errc::kParse, where + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(Errc::kParse, where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

nlohmann::ordered_json scene_to_json(const Scene& s) {
  nlohmann::ordered_json j;
  j["seed"] = s.seed;
  j["ground_height"] = s.ground_height;
  j["workspace"] = {{"x_min", s.workspace.x_min},
                    {"x_max", s.workspace.x_max},
                    {"y_min", s.workspace.y_min},
                    {"y_max", s.workspace.y_max}};
  auto objects = nlohmann::ordered_json::array();
  for (const auto& o : s.objects) {
    nlohmann::ordered_json jo;
    jo["id"] = o.id;
    jo["shape"] = std::string(to_string(o.shape));
    jo["dims"] = o.dims;
    jo["pose"] = {{"x", o.x}, {"y", o.y}, {"yaw", o.yaw}, {"z", o.z}};
    jo["material"] = o.material;
    objects.push_back(std::move(jo));
  }
  j["objects"] = std::move(objects);
  return j;
}

Scene scene_from_json(const nlohmann::json& j) {
  Scene s;
  s.seed = field<std::uint64_t>(j, "seed", "scene");
  s.ground_height = field<double>(j, "ground_height", "scene");
  const auto ws = field<nlohmann::json>(j, "workspace", "scene");
  s.workspace = {field<double>(ws, "x_min", "workspace"), field<double>(ws, "x_max", "workspace"),
                 field<double>(ws, "y_min", "workspace"), field<double>(ws, "y_max", "workspace")};
  const auto objects = field<nlohmann::json>(j, "objects", "scene");
  if (!objects.is_array()) throw Error(Errc::kParse, "scene: 'objects' must be an array");
  std::set<int> ids;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto& jo = objects[i];
    const std::string where = "objects[" + std::to_string(i) + "]";
    SceneObject o;
    o.id = field<int>(jo, "id", where);
    o.shape = shape_from_string(field<std::string>(jo, "shape", where));
    o.dims = field<std::array<double, 3>>(jo, "dims", where);
    const auto pose = field<nlohmann::json>(jo, "pose", where);
    o.x = field<double>(pose, "x", where + ".pose");
    o.y = field<double>(pose, "y", where + ".pose");
    o.yaw = field<double>(pose, "yaw", where + ".pose");
    o.z = field<double>(pose, "z", where + ".pose");
    if (jo.contains("material")) o.material = field<std::string>(jo, "material", where);
    for (double d : o.dims) {
      if (!(d > 0.0)) throw Error(Errc::kParse, where + ": dims must be positive");
    }
    if (o.id <= 0 || !ids.insert(o.id).second) {
      throw Error(Errc::kParse, where + ": id must be positive and unique");
    }
    s.objects.push_back(std::move(o));
  }
  return s;
}

void save_scene(const Scene& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  out << scene_to_json(s).dump(2) << '\n';
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot read " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::kParse, path.string() + ": " + e.what());
  }
  return scene_from_json(j);
}

}  // namespace pmsgp
