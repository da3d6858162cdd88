#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmsgp/config.hpp"
#include "pmsgp/msp.hpp"
#include "pmsgp/psp.hpp"
#include "pmsgp/scene.hpp"

namespace pmsgp {

// 64-bit FNV-1a of the canonical scene JSON, as 16 hex digits.
std::string scene_hash(const Scene& s);

struct AttemptRecord {
  int index = 0;
  std::string scene_hash;
  int target = 0;   // object charged with this attempt
  int topmost = 0;  // analytically highest object before the attempt
  bool pyramid = false;  // target's top is the scene's highest top
  std::string error;     // pipeline error code; empty when a grasp was executed
  std::optional<GraspBox> grasp;  // g*_f in the crop frame
  std::optional<RobotGrasp> robot;
  std::optional<GraspOutcome> outcome;  // absent when the pipeline failed before execution
  FunnelSizes funnel;
  int rotation_steps = 0;
  bool calibrated = false;
  bool refined = false;
  // Both collision filters re-evaluated after the fact: on the pipeline's own inputs, and
  // on the noise-free render with the target's true mask.
  bool filters_ok = false;
  bool truth_ok = false;
  std::vector<AlignStep> trace;
  bool capped = false;  // target removed by hand after this attempt
  double wall_ms = 0.0;  // not serialized unless timing is recorded

  friend bool operator==(const AttemptRecord&, const AttemptRecord&) = default;
};

struct TrialReport {
  std::string method;
  std::uint64_t seed = 0;
  int objects = 0;
  std::vector<AttemptRecord> attempts;
  int successes = 0;
  int failures = 0;
  int capped = 0;

  friend bool operator==(const TrialReport&, const TrialReport&) = default;

  int attempt_count() const { return static_cast<int>(attempts.size()); }
  // Absent for a trial without attempts.
  std::optional<double> gsr() const;
};

using AttemptObserver = std::function<void(const AttemptRecord&, const Scene& before)>;

// Runs the trial on a prepared scene.
TrialReport run_trial(const PipelineConfig& cfg, const Scene& scene, const std::string& method = "full",
                      const AttemptObserver& observer = {});
// Generates the scene from (seed, n) first.
TrialReport run_trial(const PipelineConfig& cfg, std::uint64_t seed, int n, const std::string& method = "full",
                      const AttemptObserver& observer = {});

// Name of the variant selected by the ablation flags: "full", "no-tva", "no-tva+no-cps", ...
std::string method_name(const PipelineConfig& cfg);

struct MethodSummary {
  std::string method;
  std::vector<TrialReport> trials;

  friend bool operator==(const MethodSummary&, const MethodSummary&) = default;

  int successes() const;
  int attempts() const;
  std::optional<double> gsr() const;
};

struct SuiteReport {
  int objects = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<MethodSummary> methods;

  friend bool operator==(const SuiteReport&, const SuiteReport&) = default;
};

struct SuiteOptions {
  int objects = 20;
  std::vector<std::uint64_t> seeds;
  // Runs full, no-tva, no-cps and no-msp on the same seeds.
  bool ablation = false;
  int threads = 0;  // 0 = hardware concurrency
};

SuiteReport run_suite(const PipelineConfig& cfg, const SuiteOptions& opt);

// method,T1..TK,successes,attempts,GSR with one row per method; GSR is "n/a" without attempts.
std::string suite_csv(const SuiteReport& r);

nlohmann::ordered_json trial_to_json(const TrialReport& t, bool record_timing = false);
TrialReport trial_from_json(const nlohmann::json& j);
nlohmann::ordered_json suite_to_json(const SuiteReport& r, bool record_timing = false);
SuiteReport suite_from_json(const nlohmann::json& j);

/// Parses a suite or trial report file. Syntax errors name the line, schema
/// errors the field; both throw Errc::kParse.
nlohmann::json read_report_json(const std::filesystem::path& path);

std::string render_trial(const TrialReport& t);
std::string render_suite(const SuiteReport& r);
// Renders whichever kind of report the JSON holds.
std::string render_report(const nlohmann::json& j);

}  // namespace pmsgp
