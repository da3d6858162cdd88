#include "pmsgp/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <string_view>

namespace pmsgp {
namespace {

void require(bool ok, const std::string& field, const std::string& rule) {
  if (!ok) throw Error(Errc::kConfig, "config field '" + field + "': " + rule);
}

void reject_unknown(const nlohmann::json& j, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw Error(Errc::kConfig, "config field '" + where + "' must be an object");
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw Error(Errc::kConfig, "unknown config field '" + where + item.key() + "'");
    }
  }
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(Errc::kConfig, "config field '" + where + key + "' has the wrong type");
  }
}

constexpr std::string_view kAxisNames[3] = {"x", "y", "z"};

std::string axis_string(const SignedAxis& a) {
  return (a.sign < 0 ? "-" : "") + std::string(kAxisNames[a.source]);
}

SignedAxis parse_axis(const std::string& s) {
  std::string_view v = s;
  int sign = 1;
  if (!v.empty() && (v.front() == '-' || v.front() == '+')) {
    sign = v.front() == '-' ? -1 : 1;
    v.remove_prefix(1);
  }
  for (int i = 0; i < 3; ++i) {
    if (v == kAxisNames[i]) return {i, sign};
  }
  throw Error(Errc::kConfig, "config field 'hand_eye.axis_map' has bad axis '" + s + "'");
}

}  // namespace

VirtualCamera PipelineConfig::home_camera() const {
  VirtualCamera cam;
  cam.height = camera_height;
  cam.intrinsics = intrinsics;
  cam.full_width = full_width;
  cam.full_height = full_height;
  cam.crop_width = crop_size;
  cam.crop_height = crop_size;
  return cam;
}

void validate(const PipelineConfig& c) {
  require(c.T_d > 0.0, "T_d", "must be > 0");
  require(c.dilation_tol > 0.0, "dilation_tol", "must be > 0");
  require(c.crop_size > 0 && c.crop_size <= std::min(c.full_width, c.full_height), "crop_size",
          "must be positive and fit the full view");
  require(c.calibration_step_deg > 0.0 && c.calibration_step_deg <= 360.0, "calibration_step_deg",
          "must lie in (0, 360]");
  require(c.view_rotation_step_deg > 0.0 && c.view_rotation_step_deg <= 360.0,
          "view_rotation_step_deg", "must lie in (0, 360]");
  require(c.depth_lo > 0.0 && c.depth_lo < c.depth_hi, "depth_clamp", "needs 0 < lo < hi");
  require(c.failure_cap >= 1, "failure_cap", "must be >= 1");
  require(c.segmenter == "oracle" || c.segmenter == "noisy" || c.segmenter == "region-grow" ||
              c.segmenter == "file",
          "segmenter", "must be one of oracle, noisy, region-grow, file");
  require(c.segmenter != "file" || !c.mask_file.empty(), "mask_file", "required by the file segmenter");
  require(c.corruption >= 0.0 && c.corruption <= 1.0, "corruption", "must lie in [0, 1]");
  require(c.generator == "baseline" || c.generator == "file", "generator", "must be baseline or file");
  require(c.generator != "file" || !c.candidates_file.empty(), "candidates_file",
          "required by the file generator");
  require(c.grid_step >= 1, "grid_step", "must be >= 1");
  require(c.width_pad >= 0.0, "width_pad", "must be >= 0");
  require(c.finger_thickness_px > 0.0, "finger_thickness_px", "must be > 0");
  require(c.noise_sigma >= 0.0, "noise_sigma", "must be >= 0");
  require(c.full_width > 0 && c.full_height > 0, "camera", "resolution must be positive");
  require(c.camera_height > 0.0, "camera.height", "must be > 0");
  require(c.camera_margin >= 0.0, "camera.margin", "must be >= 0");
  validate(c.intrinsics);
  validate(c.hand_eye);
  validate(c.projection);
  require(c.gripper.max_opening > 0.0 && c.gripper.insertion > 0.0 && c.gripper.clearance >= 0.0 &&
              c.gripper.friction_angle > 0.0,
          "gripper", "max_opening, insertion, friction_angle > 0 and clearance >= 0");
  require(c.projection.max_opening == c.gripper.max_opening, "projection.max_opening",
          "must equal gripper.max_opening");
  const auto& s = c.scene;
  require(s.workspace.x_min < s.workspace.x_max && s.workspace.y_min < s.workspace.y_max,
          "scene.workspace", "needs min < max");
  require(s.min_support_fraction >= 0.0 && s.min_support_fraction <= 1.0, "scene.min_support_fraction",
          "must lie in [0, 1]");
  require(s.max_retries >= 1, "scene.max_retries", "must be >= 1");
  require(c.shape_mix.box >= 0.0 && c.shape_mix.cylinder >= 0.0 && c.shape_mix.sphere >= 0.0 &&
              c.shape_mix.box + c.shape_mix.cylinder + c.shape_mix.sphere > 0.0,
          "scene.shape_mix", "weights must be >= 0 with a positive sum");
}

nlohmann::ordered_json config_to_json(const PipelineConfig& c) {
  nlohmann::ordered_json j;
  j["T_d"] = c.T_d;
  j["e_c"] = c.e_c();
  j["dilation_tol"] = c.dilation_tol;
  j["crop_size"] = c.crop_size;
  j["calibration_step_deg"] = c.calibration_step_deg;
  j["view_rotation_step_deg"] = c.view_rotation_step_deg;
  j["depth_clamp"] = {c.depth_lo, c.depth_hi};
  j["failure_cap"] = c.failure_cap;
  j["segmenter"] = c.segmenter;
  j["corruption"] = c.corruption;
  j["mask_file"] = c.mask_file;
  j["generator"] = c.generator;
  j["candidates_file"] = c.candidates_file;
  j["grid_step"] = c.grid_step;
  j["width_pad"] = c.width_pad;
  j["finger_thickness_px"] = c.finger_thickness_px;
  j["noise_sigma"] = c.noise_sigma;
  j["no_tva"] = c.no_tva;
  j["no_cps"] = c.no_cps;
  j["no_msp"] = c.no_msp;
  j["seed"] = c.seed;
  j["camera"] = {{"fx", c.intrinsics.fx},       {"fy", c.intrinsics.fy},     {"cx", c.intrinsics.cx},
                 {"cy", c.intrinsics.cy},       {"full_width", c.full_width}, {"full_height", c.full_height},
                 {"height", c.camera_height}, {"margin", c.camera_margin}};
  auto axes = nlohmann::ordered_json::array();
  for (const auto& a : c.hand_eye.axes) axes.push_back(axis_string(a));
  j["hand_eye"] = {{"axis_map", axes}, {"translation", c.hand_eye.translation}};
  j["projection"] = {{"width_scale", c.projection.width_scale},
                     {"width_offset", c.projection.width_offset},
                     {"angle_scale", c.projection.angle_scale},
                     {"angle_offset", c.projection.angle_offset}};
  j["gripper"] = {{"max_opening", c.gripper.max_opening},
                  {"insertion", c.gripper.insertion},
                  {"clearance", c.gripper.clearance},
                  {"friction_angle", c.gripper.friction_angle}};
  const auto& s = c.scene;
  j["scene"] = {{"shape_mix", {{"box", c.shape_mix.box}, {"cylinder", c.shape_mix.cylinder},
                               {"sphere", c.shape_mix.sphere}}},
                {"workspace", {{"x_min", s.workspace.x_min}, {"x_max", s.workspace.x_max},
                               {"y_min", s.workspace.y_min}, {"y_max", s.workspace.y_max}}},
                {"ground_height", s.ground_height},
                {"min_support_fraction", s.min_support_fraction},
                {"max_retries", s.max_retries}};
  return j;
}

PipelineConfig config_from_json(const nlohmann::json& j) {
  reject_unknown(j, "", {"T_d", "e_c", "dilation_tol", "crop_size", "calibration_step_deg",
                         "view_rotation_step_deg", "depth_clamp", "failure_cap", "segmenter", "corruption",
                         "mask_file", "generator", "candidates_file", "grid_step", "width_pad",
                         "finger_thickness_px", "noise_sigma", "no_tva", "no_cps", "no_msp", "seed",
                         "camera", "hand_eye", "projection", "gripper", "scene"});
  PipelineConfig c;
  read(j, "T_d", c.T_d, "");
  read(j, "e_c", c.hand_eye.calibration_error, "");
  read(j, "dilation_tol", c.dilation_tol, "");
  read(j, "crop_size", c.crop_size, "");
  read(j, "calibration_step_deg", c.calibration_step_deg, "");
  read(j, "view_rotation_step_deg", c.view_rotation_step_deg, "");
  if (j.contains("depth_clamp")) {
    std::array<double, 2> clamp{};
    read(j, "depth_clamp", clamp, "");
    c.depth_lo = clamp[0];
    c.depth_hi = clamp[1];
  }
  read(j, "failure_cap", c.failure_cap, "");
  read(j, "segmenter", c.segmenter, "");
  read(j, "corruption", c.corruption, "");
  read(j, "mask_file", c.mask_file, "");
  read(j, "generator", c.generator, "");
  read(j, "candidates_file", c.candidates_file, "");
  read(j, "grid_step", c.grid_step, "");
  read(j, "width_pad", c.width_pad, "");
  read(j, "finger_thickness_px", c.finger_thickness_px, "");
  read(j, "noise_sigma", c.noise_sigma, "");
  read(j, "no_tva", c.no_tva, "");
  read(j, "no_cps", c.no_cps, "");
  read(j, "no_msp", c.no_msp, "");
  read(j, "seed", c.seed, "");

  if (j.contains("camera")) {
    const auto& k = j.at("camera");
    reject_unknown(k, "camera.", {"fx", "fy", "cx", "cy", "full_width", "full_height", "height", "margin"});
    read(k, "fx", c.intrinsics.fx, "camera.");
    read(k, "fy", c.intrinsics.fy, "camera.");
    read(k, "cx", c.intrinsics.cx, "camera.");
    read(k, "cy", c.intrinsics.cy, "camera.");
    read(k, "full_width", c.full_width, "camera.");
    read(k, "full_height", c.full_height, "camera.");
    read(k, "height", c.camera_height, "camera.");
    read(k, "margin", c.camera_margin, "camera.");
  }
  if (j.contains("hand_eye")) {
    const auto& h = j.at("hand_eye");
    reject_unknown(h, "hand_eye.", {"axis_map", "rotation", "translation"});
    if (h.contains("axis_map") && h.contains("rotation")) {
      throw Error(Errc::kConfig, "config field 'hand_eye': give axis_map or rotation, not both");
    }
    if (h.contains("axis_map")) {
      std::array<std::string, 3> names;
      read(h, "axis_map", names, "hand_eye.");
      for (int i = 0; i < 3; ++i) c.hand_eye.axes[i] = parse_axis(names[i]);
    }
    if (h.contains("rotation")) {
      std::array<std::array<double, 3>, 3> m{};
      read(h, "rotation", m, "hand_eye.");
      c.hand_eye.axes = axes_from_matrix(m);
    }
    read(h, "translation", c.hand_eye.translation, "hand_eye.");
  }
  if (j.contains("projection")) {
    const auto& p = j.at("projection");
    reject_unknown(p, "projection.", {"width_scale", "width_offset", "angle_scale", "angle_offset"});
    read(p, "width_scale", c.projection.width_scale, "projection.");
    read(p, "width_offset", c.projection.width_offset, "projection.");
    read(p, "angle_scale", c.projection.angle_scale, "projection.");
    read(p, "angle_offset", c.projection.angle_offset, "projection.");
  }
  if (j.contains("gripper")) {
    const auto& g = j.at("gripper");
    reject_unknown(g, "gripper.", {"max_opening", "insertion", "clearance", "friction_angle"});
    read(g, "max_opening", c.gripper.max_opening, "gripper.");
    read(g, "insertion", c.gripper.insertion, "gripper.");
    read(g, "clearance", c.gripper.clearance, "gripper.");
    read(g, "friction_angle", c.gripper.friction_angle, "gripper.");
  }
  c.projection.max_opening = c.gripper.max_opening;
  if (j.contains("scene")) {
    const auto& s = j.at("scene");
    reject_unknown(s, "scene.", {"shape_mix", "workspace", "ground_height", "min_support_fraction",
                                 "max_retries"});
    if (s.contains("shape_mix")) {
      const auto& m = s.at("shape_mix");
      reject_unknown(m, "scene.shape_mix.", {"box", "cylinder", "sphere"});
      read(m, "box", c.shape_mix.box, "scene.shape_mix.");
      read(m, "cylinder", c.shape_mix.cylinder, "scene.shape_mix.");
      read(m, "sphere", c.shape_mix.sphere, "scene.shape_mix.");
    }
    if (s.contains("workspace")) {
      const auto& w = s.at("workspace");
      reject_unknown(w, "scene.workspace.", {"x_min", "x_max", "y_min", "y_max"});
      read(w, "x_min", c.scene.workspace.x_min, "scene.workspace.");
      read(w, "x_max", c.scene.workspace.x_max, "scene.workspace.");
      read(w, "y_min", c.scene.workspace.y_min, "scene.workspace.");
      read(w, "y_max", c.scene.workspace.y_max, "scene.workspace.");
    }
    read(s, "ground_height", c.scene.ground_height, "scene.");
    read(s, "min_support_fraction", c.scene.min_support_fraction, "scene.");
    read(s, "max_retries", c.scene.max_retries, "scene.");
  }
  validate(c);
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot read " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::kConfig, path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace pmsgp
