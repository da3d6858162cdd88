#include "pmsgp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <map>
#include <thread>

#include "pmsgp/rng.hpp"
#include "pmsgp/scene_io.hpp"

namespace pmsgp {

std::string scene_hash(const Scene& s) {
  const std::string text = scene_to_json(s).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::optional<double> TrialReport::gsr() const {
  if (attempts.empty()) return std::nullopt;
  return static_cast<double>(successes) / static_cast<double>(attempts.size());
}

int MethodSummary::successes() const {
  int n = 0;
  for (const auto& t : trials) n += t.successes;
  return n;
}

int MethodSummary::attempts() const {
  int n = 0;
  for (const auto& t : trials) n += t.attempt_count();
  return n;
}

std::optional<double> MethodSummary::gsr() const {
  const int a = attempts();
  if (a == 0) return std::nullopt;
  return static_cast<double>(successes()) / static_cast<double>(a);
}

std::string method_name(const PipelineConfig& cfg) {
  std::string name;
  auto add = [&](bool on, const char* flag) {
    if (!on) return;
    if (!name.empty()) name += '+';
    name += flag;
  };
  add(cfg.no_tva, "no-tva");
  add(cfg.no_cps, "no-cps");
  add(cfg.no_msp, "no-msp");
  return name.empty() ? "full" : name;
}

namespace {

int highest_object(const Scene& s) {
  const SceneObject* best = nullptr;
  for (const auto& o : s.objects) {
    if (best == nullptr || top_height(o) > top_height(*best)) best = &o;
  }
  return best->id;
}

bool is_pipeline_failure(Errc c) {
  switch (c) {
    case Errc::kSegmentationFailure:
    case Errc::kNoGrasp:
    case Errc::kEmptyMask:
    case Errc::kUnfillable:
    case Errc::kNoValidPixel:
    case Errc::kMalformedPose:
      return true;
    default:
      return false;
  }
}

// Depth and target mask of the noise-free crop, in the frame the grasp was chosen in.
bool truth_check(const Scene& scene, const VirtualCamera& cam, int target, const MspResult& msp,
                 const PipelineConfig& cfg) {
  const RenderedView v = render_view(scene, cam, true);
  DepthImage depth = fill_depth_holes(clamp_depth_range(v.depth, cfg.depth_lo, cfg.depth_hi));
  BinaryMask mask(v.labels.width(), v.labels.height(), 0);
  auto lv = v.labels.values();
  auto mv = mask.values();
  for (std::size_t i = 0; i < lv.size(); ++i) mv[i] = lv[i] == target ? 1 : 0;
  if (msp.frame_rotation != 0.0) {
    const Point2d c = raster_center(mask.width(), mask.height());
    depth = fill_depth_holes(rotate_raster(depth, c, msp.frame_rotation, 0.0f));
    mask = rotate_raster(mask, c, msp.frame_rotation, std::uint8_t{0});
  }
  return passes_self_collision(msp.frame_grasp, mask) &&
         passes_adjacent_collision(msp.frame_grasp, depth, cfg.T_d);
}

}  // namespace

TrialReport run_trial(const PipelineConfig& cfg, const Scene& initial, const std::string& method,
                      const AttemptObserver& observer) {
  validate(cfg);
  const auto seg = make_segmenter(cfg);
  const auto gen = make_generator(cfg);
  TrialReport report;
  report.method = method;
  report.seed = initial.seed;
  report.objects = static_cast<int>(initial.objects.size());

  Scene scene = initial;
  std::map<int, int> failures;
  for (int index = 0; !scene.empty(); ++index) {
    const auto start = std::chrono::steady_clock::now();
    AttemptRecord rec;
    rec.index = index;
    rec.scene_hash = scene_hash(scene);
    rec.topmost = highest_object(scene);
    rec.target = rec.topmost;
    const std::uint64_t seed = derive_seed({cfg.seed, scene.seed, static_cast<std::uint64_t>(index)});
    const VirtualCamera home = cfg.home_camera();
    Scene next = scene;
    try {
      const PspResult psp = run_psp(scene, home, *seg, cfg, seed);
      const VirtualCamera& cam = psp.view.camera;
      if (const int label = psp.view.labels[psp.view.prompt]; label != 0) rec.target = label;
      rec.trace = psp.view.trace;
      const CameraIntrinsics k = cam.crop_intrinsics();
      const MspResult msp = run_msp(psp.depth, psp.refined, *gen, cfg, k);
      rec.funnel = msp.funnel;
      rec.rotation_steps = msp.rotation_steps;
      rec.calibrated = msp.calibrated;
      rec.refined = msp.refined;
      rec.grasp = msp.grasp;

      // Post-hoc collision filters on the inputs the funnel saw.
      {
        DepthImage d = psp.depth;
        BinaryMask m = psp.refined;
        if (msp.frame_rotation != 0.0) {
          const Point2d c = raster_center(m.width(), m.height());
          d = fill_depth_holes(rotate_raster(d, c, msp.frame_rotation, 0.0f));
          m = rotate_raster(m, c, msp.frame_rotation, std::uint8_t{0});
        }
        rec.filters_ok = passes_self_collision(msp.frame_grasp, m) &&
                         passes_adjacent_collision(msp.frame_grasp, d, cfg.T_d);
      }
      rec.truth_ok = truth_check(scene, cam, rec.target, msp, cfg);

      // Image -> camera -> end effector, then back to the world for execution.
      const GraspBox& g = msp.grasp;
      const Pixel cp = round_pixel(g.center());
      const double depth = psp.depth[cp];
      const CameraPoint pc = pixel_to_camera(g.center(), depth, k);
      const EndEffectorPoint ee = camera_to_robot(pc, cfg.hand_eye);
      const ProjectedGrasp pr = project_grasp_params(g.w, g.theta, cfg.projection, depth, k);
      const RobotGrasp robot{ee.x, ee.y, ee.z, pr.width, pr.theta};
      rec.robot = robot;
      const double finger = g.h * depth / k.fx;
      const WorldGrasp world = robot_to_world(robot, cam, cfg.hand_eye, cfg.projection, scene.ground_height, finger);
      if (world.width <= 0.0) throw Error(Errc::kNoGrasp, "grasp width collapsed to zero");
      ExecutionResult res = execute_grasp(scene, world, rec.target, cfg.gripper);
      rec.outcome = res.outcome;
      next = std::move(res.scene);
    } catch (const Error& e) {
      if (!is_pipeline_failure(e.code())) throw;
      rec.error = std::string(to_string(e.code()));
    }
    rec.pyramid = top_height(*scene.find(rec.target)) == top_height(*scene.find(rec.topmost));

    if (rec.outcome && rec.outcome->success) {
      ++report.successes;
    } else {
      ++report.failures;
      if (++failures[rec.target] >= cfg.failure_cap) {
        next = remove_and_resettle(scene, rec.target);
        rec.capped = true;
        ++report.capped;
      }
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (observer) observer(rec, scene);
    report.attempts.push_back(std::move(rec));
    scene = std::move(next);
  }
  return report;
}

TrialReport run_trial(const PipelineConfig& cfg, std::uint64_t seed, int n, const std::string& method,
                      const AttemptObserver& observer) {
  return run_trial(cfg, generate_scene(seed, n, cfg.shape_mix, cfg.scene), method, observer);
}

SuiteReport run_suite(const PipelineConfig& cfg, const SuiteOptions& opt) {
  if (opt.seeds.empty()) throw Error(Errc::kInvalidArgument, "a suite needs at least one seed");
  if (opt.objects < 0) throw Error(Errc::kInvalidArgument, "object count must be >= 0");
  validate(cfg);
  std::vector<PipelineConfig> variants;
  if (opt.ablation) {
    for (int v = 0; v < 4; ++v) {
      PipelineConfig c = cfg;
      c.no_tva = v == 1;
      c.no_cps = v == 2;
      c.no_msp = v == 3;
      variants.push_back(c);
    }
  } else {
    variants.push_back(cfg);
  }

  SuiteReport report;
  report.objects = opt.objects;
  report.seeds = opt.seeds;
  const std::size_t n_seeds = opt.seeds.size();
  const std::size_t jobs = variants.size() * n_seeds;
  std::vector<TrialReport> results(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  auto run_job = [&](std::size_t j) {
    try {
      const PipelineConfig& c = variants[j / n_seeds];
      const std::uint64_t seed = opt.seeds[j % n_seeds];
      if (opt.objects == 0) {
        Scene empty;
        empty.seed = seed;
        empty.workspace = c.scene.workspace;
        empty.ground_height = c.scene.ground_height;
        results[j] = run_trial(c, empty, method_name(c));
      } else {
        results[j] = run_trial(c, seed, opt.objects, method_name(c));
      }
    } catch (...) {
      errors[j] = std::current_exception();
    }
  };

  unsigned threads = opt.threads > 0 ? static_cast<unsigned>(opt.threads) : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs)));
  if (threads == 1) {
    for (std::size_t j = 0; j < jobs; ++j) run_job(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < jobs; j = next++) run_job(j);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::size_t v = 0; v < variants.size(); ++v) {
    MethodSummary m;
    m.method = method_name(variants[v]);
    for (std::size_t s = 0; s < n_seeds; ++s) m.trials.push_back(std::move(results[v * n_seeds + s]));
    report.methods.push_back(std::move(m));
  }
  return report;
}

}  // namespace pmsgp
