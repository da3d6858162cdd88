#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "pmsgp/geometry.hpp"
#include "pmsgp/scene.hpp"

namespace pmsgp {

/// Every tunable of the pipeline. Field names match the JSON config keys.
struct PipelineConfig {
  // Adjacent-collision depth tolerance (meters).
  double T_d = 0.05;
  // Depth tolerance for the region grown from the first prompt (meters).
  double dilation_tol = 0.01;
  int crop_size = 224;
  double calibration_step_deg = 2.0;
  double view_rotation_step_deg = 30.0;
  double depth_lo = 0.10;
  double depth_hi = 1.5;
  int failure_cap = 3;

  std::string segmenter = "oracle";  // oracle | noisy | region-grow | file
  double corruption = 0.3;           // noisy segmenter
  std::string mask_file;             // file segmenter
  std::string generator = "baseline";  // baseline | file
  std::string candidates_file;         // file generator
  int grid_step = 8;
  double width_pad = 2.0;
  double finger_thickness_px = 14.0;

  double noise_sigma = 0.0;
  bool no_tva = false;
  bool no_cps = false;
  bool no_msp = false;
  std::uint64_t seed = 0;

  CameraIntrinsics intrinsics;
  int full_width = 1280;
  int full_height = 720;
  double camera_height = 0.8;
  // Extra room around the workspace that the camera may travel.
  double camera_margin = 0.1;
  // Translation error e_c lives in hand_eye.calibration_error.
  HandEyeCalibration hand_eye;
  GraspProjection projection;
  GripperModel gripper;
  ShapeMix shape_mix;
  SceneParams scene;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;

  double e_c() const { return hand_eye.calibration_error; }
  VirtualCamera home_camera() const;
};

// Throws Errc::kConfig with the offending field name.
void validate(const PipelineConfig& cfg);

nlohmann::ordered_json config_to_json(const PipelineConfig& cfg);
// Missing keys keep their defaults; unknown keys are rejected. Validates the result.
PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace pmsgp
