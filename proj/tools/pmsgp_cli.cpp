// pmsgp: run grasping trials on simulated piles, generate scenes, print reports.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pmsgp/bench.hpp"
#include "pmsgp/config.hpp"
#include "pmsgp/scene_io.hpp"

namespace fs = std::filesystem;
using namespace pmsgp;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  out << text;
}

int run(const std::string& config_path, int objects, int trials, std::vector<std::uint64_t> seeds, bool no_tva,
        bool no_cps, bool no_msp, bool ablation, bool timing, int threads, const fs::path& out_dir) {
  PipelineConfig cfg = config_path.empty() ? PipelineConfig{} : load_config(config_path);
  cfg.no_tva = cfg.no_tva || no_tva;
  cfg.no_cps = cfg.no_cps || no_cps;
  cfg.no_msp = cfg.no_msp || no_msp;
  validate(cfg);
  if (seeds.empty()) {
    for (int i = 1; i <= trials; ++i) seeds.push_back(static_cast<std::uint64_t>(i));
  } else if (trials > 0 && static_cast<int>(seeds.size()) != trials) {
    throw Error(Errc::kConfig, "--trials must match the number of --seeds");
  }

  SuiteOptions opt;
  opt.objects = objects;
  opt.seeds = seeds;
  opt.ablation = ablation;
  opt.threads = threads;
  const SuiteReport report = run_suite(cfg, opt);

  fs::create_directories(out_dir);
  const std::string csv = suite_csv(report);
  write_text(out_dir / "suite.csv", csv);
  write_text(out_dir / "suite.json", suite_to_json(report, timing).dump(2) + "\n");
  for (const auto& m : report.methods) {
    const fs::path dir = ablation ? out_dir / m.method : out_dir;
    fs::create_directories(dir);
    for (const auto& t : m.trials) {
      write_text(dir / ("trial_" + std::to_string(t.seed) + ".json"), trial_to_json(t, timing).dump(2) + "\n");
    }
  }
  if (objects > 0) {
    for (auto seed : seeds) {
      save_scene(generate_scene(seed, objects, cfg.shape_mix, cfg.scene),
                 out_dir / ("scene_" + std::to_string(seed) + ".json"));
    }
  }
  std::cout << csv;
  return 0;
}

int gen_scenes(const std::string& config_path, std::uint64_t seed, int count, int objects, const fs::path& out_dir) {
  const PipelineConfig cfg = config_path.empty() ? PipelineConfig{} : load_config(config_path);
  fs::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    const Scene scene = generate_scene(s, objects, cfg.shape_mix, cfg.scene);
    const fs::path path = out_dir / ("scene_" + std::to_string(s) + ".json");
    save_scene(scene, path);
    std::cout << path.string() << ' ' << scene_hash(scene) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Top-down grasp planning on simulated clutter"};
  app.require_subcommand(1);

  std::string config_path;
  int objects = 20;
  int trials = 0;
  std::vector<std::uint64_t> seeds;
  bool no_tva = false, no_cps = false, no_msp = false, ablation = false, timing = false;
  int threads = 0;
  std::string out_dir = "out";
  auto* run_cmd = app.add_subcommand("run", "Run a suite of trials and write suite.csv, suite.json, trial_<seed>.json");
  run_cmd->add_option("--config", config_path, "Pipeline config JSON");
  run_cmd->add_option("--objects", objects, "Objects per scene")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--trials", trials, "Number of trials (seeds 1..K when --seeds is absent)")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--seeds", seeds, "Comma separated scene seeds")->delimiter(',');
  run_cmd->add_flag("--no-tva", no_tva, "Disable top view alignment");
  run_cmd->add_flag("--no-cps", no_cps, "Disable cross-prompted segmentation");
  run_cmd->add_flag("--no-msp", no_msp, "Disable monozone sampling");
  run_cmd->add_flag("--ablation", ablation, "Run full, no-tva, no-cps and no-msp side by side");
  run_cmd->add_flag("--record-timing", timing, "Store per-attempt wall time in the JSON output");
  run_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--out", out_dir, "Output directory");

  std::uint64_t gen_seed = 1;
  int gen_count = 1;
  int gen_objects = 20;
  std::string gen_out = "scenes";
  std::string gen_config;
  auto* gen_cmd = app.add_subcommand("gen-scenes", "Write scene_<seed>.json files for seeds S..S+N-1");
  gen_cmd->add_option("--seed", gen_seed, "First seed");
  gen_cmd->add_option("--count", gen_count, "Number of scenes")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--objects", gen_objects, "Objects per scene")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--config", gen_config, "Pipeline config JSON (scene section)");
  gen_cmd->add_option("--out", gen_out, "Output directory");

  std::string report_file;
  auto* report_cmd = app.add_subcommand("report", "Summarize a suite.json or trial_<seed>.json file");
  report_cmd->add_option("file", report_file, "Report file")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) {
      if (trials == 0 && seeds.empty()) trials = 5;
      return run(config_path, objects, trials, seeds, no_tva, no_cps, no_msp, ablation, timing, threads, out_dir);
    }
    if (*gen_cmd) return gen_scenes(gen_config, gen_seed, gen_count, gen_objects, gen_out);
    if (*report_cmd) {
      std::cout << render_report(read_report_json(report_file));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return e.code() == Errc::kConfig ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
