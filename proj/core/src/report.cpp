#include <cstdio>
#include <fstream>
#include <sstream>

#include "pmsgp/bench.hpp"

namespace pmsgp {
namespace {

using ojson = nlohmann::ordered_json;

template <typename T>
T get(const nlohmann::json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw Error(Errc::kParse, "missing field '" + path + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(Errc::kParse, "field '" + path + key + "' has the wrong type");
  }
}

const nlohmann::json& sub(const nlohmann::json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw Error(Errc::kParse, "missing field '" + path + key + "'");
  return j.at(key);
}

ojson box_json(const GraspBox& g) {
  return {{"x", g.x}, {"y", g.y}, {"w", g.w}, {"h", g.h}, {"theta", g.theta}};
}

GraspBox box_from(const nlohmann::json& j, const std::string& p) {
  return {get<double>(j, "x", p), get<double>(j, "y", p), get<double>(j, "w", p), get<double>(j, "h", p),
          get<double>(j, "theta", p)};
}

ojson attempt_json(const AttemptRecord& a, bool timing) {
  ojson j;
  j["index"] = a.index;
  j["scene_hash"] = a.scene_hash;
  j["target"] = a.target;
  j["topmost"] = a.topmost;
  j["pyramid"] = a.pyramid;
  j["error"] = a.error;
  j["grasp"] = a.grasp ? box_json(*a.grasp) : ojson(nullptr);
  if (a.robot) {
    const auto& r = *a.robot;
    j["robot"] = {{"x", r.x},         {"y", r.y},         {"z", r.z},          {"width", r.width},
                  {"theta", r.theta}, {"theta_x", r.theta_x}, {"theta_y", r.theta_y}};
  } else {
    j["robot"] = nullptr;
  }
  if (a.outcome) {
    const auto& o = *a.outcome;
    j["outcome"] = {{"success", o.success},
                    {"reason", o.reason ? ojson(std::string(to_string(*o.reason))) : ojson(nullptr)},
                    {"object_id", o.object_id ? ojson(*o.object_id) : ojson(nullptr)}};
  } else {
    j["outcome"] = nullptr;
  }
  j["funnel"] = {a.funnel.g, a.funnel.g1, a.funnel.g2, a.funnel.g3};
  j["rotation_steps"] = a.rotation_steps;
  j["calibrated"] = a.calibrated;
  j["refined"] = a.refined;
  j["filters_ok"] = a.filters_ok;
  j["truth_ok"] = a.truth_ok;
  auto trace = ojson::array();
  for (const auto& s : a.trace) {
    trace.push_back({{"crop", s.crop},
                     {"target", {s.target.x, s.target.y}},
                     {"dx", s.dx},
                     {"dy", s.dy},
                     {"clamped", s.clamped}});
  }
  j["trace"] = std::move(trace);
  j["capped"] = a.capped;
  if (timing) j["wall_ms"] = a.wall_ms;
  return j;
}

AttemptRecord attempt_from(const nlohmann::json& j, const std::string& p) {
  AttemptRecord a;
  a.index = get<int>(j, "index", p);
  a.scene_hash = get<std::string>(j, "scene_hash", p);
  a.target = get<int>(j, "target", p);
  a.topmost = get<int>(j, "topmost", p);
  a.pyramid = get<bool>(j, "pyramid", p);
  a.error = get<std::string>(j, "error", p);
  if (const auto& g = sub(j, "grasp", p); !g.is_null()) a.grasp = box_from(g, p + "grasp.");
  if (const auto& r = sub(j, "robot", p); !r.is_null()) {
    const std::string q = p + "robot.";
    a.robot = RobotGrasp{get<double>(r, "x", q),     get<double>(r, "y", q),       get<double>(r, "z", q),
                         get<double>(r, "width", q), get<double>(r, "theta", q),   get<double>(r, "theta_x", q),
                         get<double>(r, "theta_y", q)};
  }
  if (const auto& o = sub(j, "outcome", p); !o.is_null()) {
    const std::string q = p + "outcome.";
    GraspOutcome out;
    out.success = get<bool>(o, "success", q);
    if (const auto& r = sub(o, "reason", q); !r.is_null()) {
      try {
        out.reason = failure_reason_from_string(get<std::string>(o, "reason", q));
      } catch (const Error& e) {
        throw Error(Errc::kParse, "field '" + q + "reason': " + e.what());
      }
    }
    if (const auto& id = sub(o, "object_id", q); !id.is_null()) out.object_id = get<int>(o, "object_id", q);
    if (out.success == out.reason.has_value() || out.success != out.object_id.has_value()) {
      throw Error(Errc::kParse, "field '" + q + "success' disagrees with reason/object_id");
    }
    a.outcome = out;
  }
  const auto funnel = get<std::array<std::size_t, 4>>(j, "funnel", p);
  a.funnel = {funnel[0], funnel[1], funnel[2], funnel[3]};
  a.rotation_steps = get<int>(j, "rotation_steps", p);
  a.calibrated = get<bool>(j, "calibrated", p);
  a.refined = get<bool>(j, "refined", p);
  a.filters_ok = get<bool>(j, "filters_ok", p);
  a.truth_ok = get<bool>(j, "truth_ok", p);
  const auto& trace = sub(j, "trace", p);
  if (!trace.is_array()) throw Error(Errc::kParse, "field '" + p + "trace' must be an array");
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const std::string q = p + "trace[" + std::to_string(i) + "].";
    const auto t = get<std::array<int, 2>>(trace[i], "target", q);
    a.trace.push_back({get<bool>(trace[i], "crop", q), {t[0], t[1]}, get<double>(trace[i], "dx", q),
                       get<double>(trace[i], "dy", q), get<bool>(trace[i], "clamped", q)});
  }
  a.capped = get<bool>(j, "capped", p);
  if (j.contains("wall_ms")) a.wall_ms = get<double>(j, "wall_ms", p);
  return a;
}

ojson gsr_json(std::optional<double> g) { return g ? ojson(*g) : ojson(nullptr); }

std::string gsr_text(std::optional<double> g) {
  if (!g) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *g);
  return buf;
}

}  // namespace

nlohmann::ordered_json trial_to_json(const TrialReport& t, bool record_timing) {
  ojson j;
  j["method"] = t.method;
  j["seed"] = t.seed;
  j["objects"] = t.objects;
  j["attempt_count"] = t.attempt_count();
  j["successes"] = t.successes;
  j["failures"] = t.failures;
  j["capped"] = t.capped;
  j["gsr"] = gsr_json(t.gsr());
  auto attempts = ojson::array();
  for (const auto& a : t.attempts) attempts.push_back(attempt_json(a, record_timing));
  j["attempts"] = std::move(attempts);
  return j;
}

TrialReport trial_from_json(const nlohmann::json& j) {
  TrialReport t;
  t.method = get<std::string>(j, "method", "");
  t.seed = get<std::uint64_t>(j, "seed", "");
  t.objects = get<int>(j, "objects", "");
  t.successes = get<int>(j, "successes", "");
  t.failures = get<int>(j, "failures", "");
  t.capped = get<int>(j, "capped", "");
  const auto& attempts = sub(j, "attempts", "");
  if (!attempts.is_array()) throw Error(Errc::kParse, "field 'attempts' must be an array");
  int successes = 0;
  for (std::size_t i = 0; i < attempts.size(); ++i) {
    t.attempts.push_back(attempt_from(attempts[i], "attempts[" + std::to_string(i) + "]."));
    successes += t.attempts.back().outcome && t.attempts.back().outcome->success;
  }
  if (get<int>(j, "attempt_count", "") != t.attempt_count()) {
    throw Error(Errc::kParse, "field 'attempt_count' disagrees with the attempt records");
  }
  if (successes != t.successes || t.successes + t.failures != t.attempt_count()) {
    throw Error(Errc::kParse, "field 'successes' disagrees with the attempt records");
  }
  return t;
}

nlohmann::ordered_json suite_to_json(const SuiteReport& r, bool record_timing) {
  ojson j;
  j["objects"] = r.objects;
  j["seeds"] = r.seeds;
  auto methods = ojson::array();
  for (const auto& m : r.methods) {
    ojson jm;
    jm["method"] = m.method;
    auto fails = ojson::array();
    for (const auto& t : m.trials) fails.push_back(t.failures);
    jm["failures_per_trial"] = std::move(fails);
    jm["successes"] = m.successes();
    jm["attempts"] = m.attempts();
    jm["gsr"] = gsr_json(m.gsr());
    auto trials = ojson::array();
    for (const auto& t : m.trials) trials.push_back(trial_to_json(t, record_timing));
    jm["trials"] = std::move(trials);
    methods.push_back(std::move(jm));
  }
  j["methods"] = std::move(methods);
  return j;
}

SuiteReport suite_from_json(const nlohmann::json& j) {
  SuiteReport r;
  r.objects = get<int>(j, "objects", "");
  r.seeds = get<std::vector<std::uint64_t>>(j, "seeds", "");
  const auto& methods = sub(j, "methods", "");
  if (!methods.is_array()) throw Error(Errc::kParse, "field 'methods' must be an array");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const std::string p = "methods[" + std::to_string(i) + "].";
    MethodSummary m;
    m.method = get<std::string>(methods[i], "method", p);
    const auto& trials = sub(methods[i], "trials", p);
    if (!trials.is_array()) throw Error(Errc::kParse, "field '" + p + "trials' must be an array");
    for (std::size_t k = 0; k < trials.size(); ++k) {
      try {
        m.trials.push_back(trial_from_json(trials[k]));
      } catch (const Error& e) {
        throw Error(Errc::kParse, p + "trials[" + std::to_string(k) + "]: " + e.what());
      }
    }
    if (get<int>(methods[i], "successes", p) != m.successes() ||
        get<int>(methods[i], "attempts", p) != m.attempts()) {
      throw Error(Errc::kParse, "field '" + p + "successes' disagrees with the trials");
    }
    r.methods.push_back(std::move(m));
  }
  return r;
}

std::string suite_csv(const SuiteReport& r) {
  std::size_t columns = 0;
  for (const auto& m : r.methods) columns = std::max(columns, m.trials.size());
  if (r.methods.empty()) columns = r.seeds.size();
  std::ostringstream out;
  out << "method";
  for (std::size_t k = 1; k <= columns; ++k) out << ",T" << k;
  out << ",successes,attempts,GSR\n";
  for (const auto& m : r.methods) {
    out << m.method;
    for (std::size_t k = 0; k < columns; ++k) {
      out << ',';
      if (k < m.trials.size()) out << m.trials[k].failures;
    }
    out << ',' << m.successes() << ',' << m.attempts() << ',' << gsr_text(m.gsr()) << '\n';
  }
  return out.str();
}

nlohmann::json read_report_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot read " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw Error(Errc::kParse, path.string() + ":" + std::to_string(line) + ": malformed JSON");
  }
}

std::string render_trial(const TrialReport& t) {
  std::ostringstream out;
  out << "trial seed=" << t.seed << " method=" << t.method << " objects=" << t.objects << '\n';
  out << "attempts=" << t.attempt_count() << " successes=" << t.successes << " failures=" << t.failures
      << " capped=" << t.capped << " GSR=" << gsr_text(t.gsr()) << '\n';
  for (const auto& a : t.attempts) {
    out << "  #" << a.index << " scene=" << a.scene_hash << " target=" << a.target;
    if (!a.error.empty()) {
      out << " error=" << a.error;
    } else if (a.outcome) {
      out << (a.outcome->success ? " success" : " fail=" + std::string(to_string(*a.outcome->reason)));
    }
    out << " funnel=" << a.funnel.g << '/' << a.funnel.g1 << '/' << a.funnel.g2 << '/' << a.funnel.g3
        << " rot=" << a.rotation_steps;
    if (a.grasp) {
      char buf[96];
      std::snprintf(buf, sizeof buf, " grasp=(%.1f, %.1f, w %.1f, %.1f deg)", a.grasp->x, a.grasp->y, a.grasp->w,
                    rad_to_deg(a.grasp->theta));
      out << buf;
    }
    if (a.capped) out << " capped";
    out << '\n';
    for (const auto& s : a.trace) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "      align %s (%d, %d) move (%+.4f, %+.4f)%s\n", s.crop ? "crop" : "full",
                    s.target.x, s.target.y, s.dx, s.dy, s.clamped ? " clamped" : "");
      out << buf;
    }
  }
  return out.str();
}

std::string render_suite(const SuiteReport& r) {
  std::ostringstream out;
  out << suite_csv(r);
  for (const auto& m : r.methods) {
    for (const auto& t : m.trials) out << '\n' << render_trial(t);
  }
  return out.str();
}

std::string render_report(const nlohmann::json& j) {
  if (j.is_object() && j.contains("methods")) return render_suite(suite_from_json(j));
  if (j.is_object() && j.contains("attempts")) return render_trial(trial_from_json(j));
  throw Error(Errc::kParse, "not a suite or trial report (no 'methods' or 'attempts' field)");
}

}  // namespace pmsgp
