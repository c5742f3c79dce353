#include "hrc/bench.hpp"

#include <cstdio>
#include <set>

#include "hrc/error.hpp"

namespace hrc::bench {

namespace fs = std::filesystem;

int setting_days(int setting) {
  switch (setting) {
    case 1:
    case 2: return 5;
    case 3:
    case 4: return 9;
  }
  throw ValidationError("setting must be 1, 2, 3 or 4");
}

std::size_t setting_scene_count(int setting) {
  static const std::size_t n[] = {1, 5, 1, 3};
  setting_days(setting);
  return n[setting - 1];
}

std::size_t setting_persona_count(int setting) {
  setting_days(setting);
  return setting <= 2 ? 1 : 3;
}

std::vector<ScheduleDay> schedule(int setting, const std::vector<std::string>& scenes,
                                  const std::vector<std::string>& personas) {
  if (scenes.size() != setting_scene_count(setting)) {
    throw ValidationError("setting " + std::to_string(setting) + " needs " +
                          std::to_string(setting_scene_count(setting)) + " scene(s), got " +
                          std::to_string(scenes.size()));
  }
  if (personas.size() != setting_persona_count(setting)) {
    throw ValidationError("setting " + std::to_string(setting) + " needs " +
                          std::to_string(setting_persona_count(setting)) + " persona(s), got " +
                          std::to_string(personas.size()));
  }
  std::vector<ScheduleDay> out;
  int day = 1;
  switch (setting) {
    case 1:
      for (int i = 0; i < 5; ++i) out.push_back({day++, scenes[0], personas[0]});
      break;
    case 2:
      for (const auto& s : scenes) out.push_back({day++, s, personas[0]});
      break;
    case 3:
      for (int cycle = 0; cycle < 3; ++cycle) {
        for (const auto& p : personas) out.push_back({day++, scenes[0], p});
      }
      break;
    case 4:
      for (const auto& s : scenes) {
        for (const auto& p : personas) out.push_back({day++, s, p});
      }
      break;
  }
  return out;
}

// ---------------------------------------------------------------- config

void RunConfig::resolve_defaults() {
  if (scenes.empty()) {
    for (std::size_t i = 0; i < setting_scene_count(setting); ++i) scenes.push_back("replica_" + std::to_string(i + 1));
  }
  if (personas.empty()) {
    static const char* ids[] = {"p1", "p2", "p3"};
    for (std::size_t i = 0; i < setting_persona_count(setting); ++i) personas.emplace_back(ids[i]);
  }
}

void RunConfig::validate() const {
  setting_days(setting);
  if (human != "llm" && human != "scripted" && human != "offline" && human != "hitl") {
    throw ValidationError("human must be 'llm', 'scripted', 'offline' or 'hitl'");
  }
  if (human == "offline") {
    if (schedule_file.empty()) throw ValidationError("an offline human needs a schedule file");
    if (scenes.size() != 1 || personas.size() != 1) {
      throw ValidationError("an offline schedule runs with exactly one scene and one persona");
    }
  } else {
    schedule(setting, scenes, personas);
  }
  if (!(theta > 0 && theta <= 1)) throw ValidationError("theta must lie in (0, 1]");
  static const std::set<std::string> known = {"predicate", "judge", "feedback"};
  if (evaluators.empty()) throw ValidationError("at least one evaluator is required");
  for (const auto& e : evaluators) {
    if (!known.count(e)) throw ValidationError("unknown evaluator '" + e + "'");
  }
  if (max_days < 0) throw ValidationError("max_days must be >= 0");
  assistant.validate();
}

Json RunConfig::to_json() const {
  return Json{{"version", 1},
              {"setting", setting},
              {"collab_type", rec::as_int(collab_type)},
              {"scenes", scenes},
              {"personas", personas},
              {"seed", seed},
              {"gateway", gateway.to_json()},
              {"assistant", assistant.to_json()},
              {"human", human},
              {"schedule_file", schedule_file},
              {"catalog", catalog},
              {"theta", theta},
              {"evaluators", evaluators},
              {"max_days", max_days}};
}

RunConfig RunConfig::from_json(const Json& j) {
  RunConfig c;
  try {
    c.setting = j.value("setting", c.setting);
    c.collab_type = rec::collab_from_int(j.value("collab_type", 1));
    c.scenes = j.value("scenes", c.scenes);
    c.personas = j.value("personas", c.personas);
    c.seed = j.value("seed", c.seed);
    if (j.contains("gateway")) c.gateway = gw::GatewayConfig::from_json(j["gateway"]);
    if (j.contains("assistant")) c.assistant = assist::AssistantConfig::from_json(j["assistant"]);
    c.human = j.value("human", c.human);
    c.schedule_file = j.value("schedule_file", c.schedule_file);
    c.catalog = j.value("catalog", c.catalog);
    c.theta = j.value("theta", c.theta);
    c.evaluators = j.value("evaluators", c.evaluators);
    c.max_days = j.value("max_days", c.max_days);
  } catch (const Json::exception& e) {
    throw LoadError(std::string("run config: ") + e.what());
  }
  c.resolve_defaults();
  c.validate();
  return c;
}

// ---------------------------------------------------------------- resolution

const scenario::Catalog& load_catalog(const RunConfig& cfg) {
  if (cfg.catalog.empty()) return scenario::Catalog::bundled();
  static std::map<std::string, scenario::Catalog> loaded;
  static std::mutex mu;
  std::lock_guard lock(mu);
  auto it = loaded.find(cfg.catalog);
  if (it == loaded.end()) it = loaded.emplace(cfg.catalog, scenario::Catalog::from_json(fsio::read_json(cfg.catalog))).first;
  return it->second;
}

world::Scene resolve_scene(const std::string& name_or_path) {
  auto names = world::bundled_scene_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return world::bundled_scene(name_or_path);
  if (fs::exists(name_or_path)) return world::load_scene_file(name_or_path);
  throw LoadError("unknown scene '" + name_or_path + "' (not bundled and not a file)");
}

persona::PersonaRecord resolve_persona(const std::string& id_or_path, const scenario::Catalog& cat) {
  if (const auto* p = cat.persona(id_or_path)) return p->record();
  if (fs::exists(id_or_path)) return persona::load_persona(id_or_path);
  throw LoadError("unknown persona '" + id_or_path + "' (not in the catalog and not a file)");
}

std::unique_ptr<gw::Gateway> make_gateway(const RunConfig& cfg, const std::optional<fs::path>& cache_dir) {
  auto mock = std::make_shared<gw::MockChat>();
  scenario::install_mock(*mock, load_catalog(cfg));
  return std::make_unique<gw::Gateway>(cfg.gateway, mock, cache_dir);
}

// ---------------------------------------------------------------- scoring

std::map<std::string, eval::HourScore> score_hour(const HourInputs& in, const world::Scene& scene,
                                                  rec::CollabType type, gw::Gateway& g, double theta,
                                                  const std::vector<std::string>& evaluators) {
  std::map<std::string, eval::HourScore> out;
  auto n_gt = in.human_tasks.size();
  for (const auto& ev : evaluators) {
    if (ev == "predicate") {
      std::vector<eval::PredicateResult> res;
      if (type == rec::CollabType::PickPlace) {
        std::vector<eval::PickPlaceKey> robot, gt;
        for (const auto& t : in.robot_accepted) robot.push_back(eval::key_of(scene, std::get<rec::PickPlaceAct>(t.act)));
        for (const auto& t : in.human_tasks) gt.push_back(eval::key_of(scene, std::get<rec::PickPlaceAct>(t.act)));
        res = eval::predicate_type1(robot, gt);
      } else {
        std::vector<std::string> offered, desired;
        for (const auto& t : in.robot_accepted) offered.push_back(std::get<rec::OfferAct>(t.act).obj_name);
        for (const auto& t : in.human_tasks) desired.push_back(std::get<rec::MotionAct>(t.act).inhand_obj_name);
        res = eval::predicate_type2(offered, desired, [&](const std::string& s) { return g.embed(s); }, theta);
      }
      out[ev] = eval::score_matches(res, n_gt);
    } else if (ev == "judge") {
      out[ev] = eval::judge_score(in.judge_labels, n_gt);
    } else if (ev == "feedback") {
      out[ev] = eval::judge_score(in.feedback_accepted, n_gt);
    }
  }
  return out;
}

// ---------------------------------------------------------------- metrics files

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string two(int n) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d", n);
  return buf;
}

std::string render_report(const Json& summary) {
  std::string out;
  out += "setting " + std::to_string(summary.value("setting", 0)) + ", collaboration type " +
         std::to_string(summary.value("collab_type", 0)) + ", policy " + summary.value("policy", std::string()) +
         ", " + std::to_string(summary.value("days", 0)) + " days\n\n";
  const auto& m = summary.at("metrics");
  for (const auto& [name, s] : m.at("evaluators").items()) {
    out += name + "\n";
    out += "  final-day mean F1: " + fmt(s.at("final_day_mean").get<double>()) + "\n";
    out += "  overall mean F1:   " + fmt(s.at("overall_mean").get<double>()) + "\n";
    out += "  per day:";
    for (const auto& v : s.at("across_days")) out += " " + fmt(v.get<double>());
    out += "\n  per hour slot:";
    for (const auto& v : s.at("within_day")) out += " " + fmt(v.get<double>());
    out += "\n";
  }
  if (m.contains("l1") && !m["l1"].empty()) {
    out += "\nL1 distance between evaluators (per-hour F1)\n";
    for (const auto& [a, row] : m["l1"].items()) {
      for (const auto& [b, v] : row.items()) {
        if (a < b) out += "  " + a + " vs " + b + ": " + fmt(v.get<double>()) + "\n";
      }
    }
  }
  return out;
}

}  // namespace

std::string write_metrics(const fs::path& dir, const std::vector<eval::HourRow>& rows, const eval::RunMetrics& m,
                          const Json& header) {
  auto mdir = dir / "metrics";
  fs::create_directories(mdir);
  Json summary = header;
  summary["metrics"] = m.to_json();
  auto text = summary.dump(2) + "\n";
  fsio::write_file_atomic(mdir / "summary.json", text);

  std::vector<std::string> evs;
  for (const auto& [k, _] : m.evaluators) evs.push_back(k);

  std::string hours = "day,hour_slot,time,persona,scene,evaluator,tp,fp,fn,precision,recall,f1\n";
  for (const auto& r : rows) {
    for (const auto& [ev, s] : r.by_evaluator) {
      hours += std::to_string(r.day) + "," + std::to_string(r.hour_slot) + "," +
               world::DayClock::slot_label(r.hour_slot) + "," + r.persona + "," + r.scene + "," + ev + "," +
               std::to_string(s.tp) + "," + std::to_string(s.fp) + "," + std::to_string(s.fn) + "," +
               fmt(s.precision) + "," + fmt(s.recall) + "," + fmt(s.f1) + "\n";
    }
  }
  fsio::write_file_atomic(mdir / "hours.csv", hours);

  std::string within = "hour_slot," + text::join(evs, ",") + "\n";
  for (int h = 0; h < world::DayClock::kSlots; ++h) {
    within += std::to_string(h);
    for (const auto& ev : evs) {
      const auto& v = m.evaluators.at(ev).within_day;
      within += "," + (static_cast<std::size_t>(h) < v.size() ? fmt(v[static_cast<std::size_t>(h)]) : "");
    }
    within += "\n";
  }
  fsio::write_file_atomic(mdir / "within_day.csv", within);

  std::string across = "day," + text::join(evs, ",") + "\n";
  for (int d = 0; d < m.days; ++d) {
    across += std::to_string(d + 1);
    for (const auto& ev : evs) {
      const auto& v = m.evaluators.at(ev).across_days;
      across += "," + (static_cast<std::size_t>(d) < v.size() ? fmt(v[static_cast<std::size_t>(d)]) : "");
    }
    across += "\n";
  }
  fsio::write_file_atomic(mdir / "across_days.csv", across);
  fsio::write_file_atomic(mdir / "report.txt", render_report(summary));
  return text;
}

std::string report(const fs::path& dir) {
  auto p = dir / "metrics" / "summary.json";
  if (!fs::exists(p)) throw LoadError(dir.string() + " has no metrics/summary.json");
  return render_report(fsio::read_json(p));
}

// ---------------------------------------------------------------- run

namespace {

// The gateway mode is left out of the digest so a strict replay of a
// recorded run writes byte-identical metrics.
Json header_for(const RunConfig& cfg, int days) {
  auto digest = cfg.to_json();
  digest["gateway"].erase("mode");
  return Json{{"setting", cfg.setting},
              {"collab_type", rec::as_int(cfg.collab_type)},
              {"policy", assist::to_string(cfg.assistant.policy)},
              {"human", cfg.human},
              {"days", days},
              {"config_sha256", sha256_hex(digest.dump())}};
}

Json tasks_json(const std::vector<rec::TaskRecord>& tasks) {
  Json a = Json::array();
  for (const auto& t : tasks) a.push_back(rec::to_json(t));
  return a;
}

Json raw_json(const std::vector<rec::RawCompletion>& raw) {
  Json a = Json::array();
  for (const auto& r : raw) a.push_back(r.to_json());
  return a;
}

}  // namespace

HourRecord play_hour(const RunConfig& cfg, world::WorldState& w, assist::Assistant& robot, gw::Gateway& g,
                     const std::string& persona, int day, int slot, human::HumanTurn turn) {
  HourRecord ph;
  ph.slot = slot;
  ph.turn = std::move(turn);
  try {
    auto first = human::execute_tasks(w, {ph.turn.tasks.front()});
    auto obs = assist::observe(w.scene, ph.turn.tasks.front(), first, cfg.collab_type);
    ph.decision = robot.step(w, {day, slot, persona, cfg.collab_type, obs, ph.turn.intention.text});
    std::vector<rec::TaskRecord> rest(ph.turn.tasks.begin() + 1, ph.turn.tasks.end());
    human::execute_tasks(w, rest);
  } catch (const WorldError& e) {
    ph.warnings.push_back(std::string("world: ") + e.what());
  }
  if (std::count(cfg.evaluators.begin(), cfg.evaluators.end(), "judge")) {
    std::vector<std::string> described;
    auto accepted = ph.decision.accepted();
    for (const auto& t : accepted) described.push_back(rec::describe(t));
    try {
      ph.judge = eval::judge_eval(g, ph.turn.intention.text, described, cfg.assistant.retries);
    } catch (const CacheMissError&) {
      throw;
    } catch (const Error& e) {
      ph.judge.assign(accepted.size(), false);
      ph.warnings.push_back(std::string("judge: ") + e.what());
    }
  }
  return ph;
}

DayOutcome finish_day(const RunConfig& cfg, const ScheduleDay& sd, const world::Scene& scene,
                      std::vector<HourRecord>& hours, const FeedbackFn& feedback, assist::Assistant& robot,
                      gw::Gateway& g) {
  DayOutcome out;
  std::vector<assist::HourDecision> decisions;
  std::vector<std::vector<bool>> labels;
  out.log = Json{{"day", sd.day},
                 {"scene", sd.scene},
                 {"persona", sd.persona},
                 {"collab_type", rec::as_int(cfg.collab_type)},
                 {"hours", Json::array()}};
  for (auto& ph : hours) {
    Json hj{{"hour_slot", ph.slot}, {"time", world::DayClock::slot_label(ph.slot)}, {"skipped", ph.skipped}};
    if (ph.skipped) {
      hj["error"] = ph.error;
      hj["human"] = {{"raw", raw_json(ph.turn.raw)}};
      out.log["hours"].push_back(hj);
      continue;
    }
    std::vector<rec::RawCompletion> fb_raw;
    rec::FeedbackRecord fb;
    auto carried = ph.decision.carried_out();
    try {
      fb = feedback(ph, fb_raw);
    } catch (const CacheMissError&) {
      throw;
    } catch (const Error& e) {
      fb.labels.assign(carried.size(), false);
      ph.warnings.push_back(std::string("feedback: ") + e.what());
    }
    auto accepted_labels = assist::labels_for_accepted(ph.decision, fb.labels);
    decisions.push_back(ph.decision);
    labels.push_back(fb.labels);

    HourInputs in{ph.turn.intention.text, ph.turn.tasks, ph.decision.accepted(), accepted_labels, ph.judge};
    eval::HourRow row{sd.day, ph.slot, sd.persona, sd.scene, {}};
    row.by_evaluator = score_hour(in, scene, cfg.collab_type, g, cfg.theta, cfg.evaluators);

    Json scores = Json::object();
    for (const auto& [k, v] : row.by_evaluator) scores[k] = v.to_json();
    auto warnings = ph.turn.warnings;
    warnings.insert(warnings.end(), ph.warnings.begin(), ph.warnings.end());
    hj["human"] = {{"intention", rec::to_json(ph.turn.intention)},
                   {"tasks", tasks_json(ph.turn.tasks)},
                   {"raw", raw_json(ph.turn.raw)}};
    hj["robot"] = ph.decision.to_json();
    hj["feedback"] = {{"labels", fb.labels}, {"reasons", fb.reasons}, {"raw", raw_json(fb_raw)}};
    hj["feedback_accepted"] = accepted_labels;
    hj["judge"] = ph.judge;
    hj["scores"] = scores;
    hj["warnings"] = warnings;
    out.log["hours"].push_back(hj);
    out.rows.push_back(std::move(row));
  }
  out.update = robot.learn_from_feedback(decisions, labels);
  out.log["learning"] = {{"intention_examples", out.update.intention_examples.size()},
                         {"task_examples", out.update.task_examples.size()}};
  return out;
}

void persist_day(const fs::path& dir, int day, const DayOutcome& out, assist::Assistant& robot) {
  for (const char* sub : {"days", "classifiers", "examples", "profiles", "memory"}) fs::create_directories(dir / sub);
  auto tag = two(day);
  fsio::write_file_atomic(dir / "days" / ("day_" + tag + ".json"), out.log.dump(1) + "\n");
  fsio::write_json(dir / "classifiers" / ("day_" + tag + "_intention.json"), robot.intention_classifier().state());
  fsio::write_json(dir / "classifiers" / ("day_" + tag + "_task.json"), robot.task_classifier().state());
  classify::export_examples(dir / "examples" / ("day_" + tag + "_intention.jsonl"), out.update.intention_examples);
  classify::export_examples(dir / "examples" / ("day_" + tag + "_task.jsonl"), out.update.task_examples);
  fsio::write_json(dir / "profiles" / ("day_" + tag + ".json"), robot.profiles_json());
  robot.memory().save_jsonl(dir / "memory" / "robot.jsonl");
}

Json run_header(const RunConfig& cfg, int days) { return header_for(cfg, days); }

RunResult run(const RunConfig& cfg_in, const fs::path& dir, const RunOptions& opt) {
  RunConfig cfg = cfg_in;
  cfg.resolve_defaults();
  cfg.validate();
  if (cfg.human == "hitl") throw ValidationError("a 'hitl' human is driven through the session service, not run()");
  const auto& cat = load_catalog(cfg);

  std::vector<ScheduleDay> days;
  std::vector<human::ScheduleEntry> offline;
  if (cfg.human == "offline") {
    offline = human::read_schedule(cfg.schedule_file);
    int n = 0;
    for (const auto& e : offline) n = std::max(n, e.day);
    for (int d = 1; d <= n; ++d) days.push_back({d, cfg.scenes[0], cfg.personas[0]});
  } else {
    days = schedule(cfg.setting, cfg.scenes, cfg.personas);
  }
  if (cfg.max_days > 0 && static_cast<std::size_t>(cfg.max_days) < days.size()) days.resize(static_cast<std::size_t>(cfg.max_days));

  fs::create_directories(dir);
  fsio::write_json(dir / "config.json", cfg.to_json());

  auto cache = opt.cache_dir.value_or(dir / "cache");
  auto g = make_gateway(cfg, cache);
  auto acfg = cfg.assistant;
  acfg.seed = derive_seed(cfg.seed, "assistant");
  assist::Assistant robot(*g, acfg);

  std::map<std::string, std::unique_ptr<human::HumanSource>> humans;
  auto human_for = [&](const std::string& persona) -> human::HumanSource& {
    auto& slot = humans[persona];
    if (!slot) {
      human::LlmHumanConfig hc;
      hc.retries = cfg.assistant.retries;
      hc.retrieval = cfg.assistant.retrieval;
      if (cfg.human == "scripted") {
        slot = std::make_unique<human::ScriptedHuman>(cat, persona);
      } else if (cfg.human == "offline") {
        slot = std::make_unique<human::OfflineScheduleHuman>(
            offline, std::make_unique<human::LlmHuman>(*g, resolve_persona(persona, cat), hc));
      } else {
        slot = std::make_unique<human::LlmHuman>(*g, resolve_persona(persona, cat), hc);
      }
    }
    return *slot;
  };

  RunResult result;
  result.dir = dir;
  for (const auto& sd : days) {
    auto scene = resolve_scene(sd.scene);
    world::WorldState w(scene);
    w.clock = {sd.day, 0};
    auto& human = human_for(sd.persona);
    human.start_day(sd.day);
    std::vector<HourRecord> hours;

    for (int slot = 0; slot < world::DayClock::kSlots; ++slot) {
      human::HourContext ctx{sd.day, slot, cfg.collab_type, &w.scene,
                             scenario::human_seed(cfg.seed, sd.day, slot, sd.persona)};
      std::optional<HourRecord> ph;
      try {
        auto turn = human.propose(ctx);
        ph = play_hour(cfg, w, robot, *g, sd.persona, sd.day, slot, turn);
        human.remember(ph->turn);
      } catch (const CacheMissError&) {
        throw;
      } catch (const EpisodeError& e) {
        ph = HourRecord{};
        ph->slot = slot;
        ph->skipped = true;
        ph->error = std::string(e.what()) + (e.raw().empty() ? "" : "\n" + e.raw());
      } catch (const GatewayError& e) {
        ph = HourRecord{};
        ph->slot = slot;
        ph->skipped = true;
        ph->error = e.what();
      }
      hours.push_back(std::move(*ph));
      world::advance_hour(w);
    }

    auto fb = [&](HourRecord& h, std::vector<rec::RawCompletion>& raw) {
      return human.feedback(h.turn.intention, h.turn.tasks, h.decision.carried_out(), &raw);
    };
    auto out = finish_day(cfg, sd, scene, hours, fb, robot, *g);
    persist_day(dir, sd.day, out, robot);
    result.rows.insert(result.rows.end(), out.rows.begin(), out.rows.end());
    if (opt.on_day) opt.on_day(sd.day, eval::aggregate(result.rows));
  }

  result.metrics = eval::aggregate(result.rows);
  result.summary = write_metrics(dir, result.rows, result.metrics, header_for(cfg, static_cast<int>(days.size())));
  return result;
}

RunResult replay(const fs::path& src, const fs::path& dst) {
  auto cfg = RunConfig::from_json(fsio::read_json(src / "config.json"));
  if (!fs::exists(src / "cache")) throw LoadError(src.string() + " has no recorded responses (cache/)");
  cfg.gateway.mode = gw::Mode::Replay;
  RunOptions opt;
  opt.cache_dir = src / "cache";
  auto r = run(cfg, dst, opt);
  return r;
}

std::vector<eval::HourRow> rescore_rows(const fs::path& dir) {
  auto cfg = RunConfig::from_json(fsio::read_json(dir / "config.json"));
  auto embed_cfg = cfg;
  std::optional<fs::path> cache;
  if (cfg.gateway.live_embeddings) {
    embed_cfg.gateway.mode = gw::Mode::Replay;
    cache = dir / "cache";
  } else {
    embed_cfg.gateway.mode = gw::Mode::Mock;
  }
  auto g = make_gateway(embed_cfg, cache);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir / "days")) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<eval::HourRow> rows;
  for (const auto& f : files) {
    auto log = fsio::read_json(f);
    auto scene = resolve_scene(log.at("scene").get<std::string>());
    auto type = rec::collab_from_int(log.at("collab_type").get<int>());
    for (const auto& h : log.at("hours")) {
      if (h.value("skipped", false)) continue;
      HourInputs in;
      in.true_intention = h.at("human").at("intention").at("text").get<std::string>();
      for (const auto& t : h.at("human").at("tasks")) in.human_tasks.push_back(rec::task_from_json(t));
      in.robot_accepted = assist::HourDecision::from_json(h.at("robot")).accepted();
      in.feedback_accepted = h.at("feedback_accepted").get<std::vector<bool>>();
      in.judge_labels = h.value("judge", std::vector<bool>{});
      eval::HourRow row{log.at("day").get<int>(), h.at("hour_slot").get<int>(), log.at("persona").get<std::string>(),
                        log.at("scene").get<std::string>(), {}};
      row.by_evaluator = score_hour(in, scene, type, *g, cfg.theta, cfg.evaluators);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

eval::RunMetrics rescore(const fs::path& dir) { return eval::aggregate(rescore_rows(dir)); }

}  // namespace hrc::bench
