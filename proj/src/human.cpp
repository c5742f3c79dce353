#include "hrc/human.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "hrc/assets.hpp"
#include "hrc/error.hpp"
#include "hrc/prompts.hpp"

namespace hrc::human {

// ------------------------------------------------------------ validation

std::vector<std::string> validate_tasks(const std::vector<rec::TaskRecord>& tasks, rec::CollabType type,
                                        const world::Scene& scene) {
  std::vector<std::string> problems;
  auto want = static_cast<std::size_t>(rec::human_task_count(type));
  if (tasks.size() != want) {
    problems.push_back("expected " + std::to_string(want) + " tasks, got " + std::to_string(tasks.size()));
  }
  auto check_obj = [&](std::size_t i, int id, const std::string& name, bool dynamic, const char* role) {
    const auto* o = scene.find(id);
    std::string where = "task " + std::to_string(i + 1) + ": ";
    if (!o) {
      problems.push_back(where + role + " id " + std::to_string(id) + " is not in the scene");
      return;
    }
    if (o->dynamic != dynamic) {
      problems.push_back(where + role + " '" + o->name + "' must be a " + (dynamic ? "movable" : "fixed") +
                         " object");
    }
    if (text::lower(text::trim(name)) != text::lower(o->name)) {
      problems.push_back(where + role + " name '" + name + "' does not match id " + std::to_string(id));
    }
  };
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& act = tasks[i].act;
    if (type == rec::CollabType::PickPlace) {
      const auto* a = std::get_if<rec::PickPlaceAct>(&act);
      if (!a) {
        problems.push_back("task " + std::to_string(i + 1) + ": expected a pick-and-place act");
        continue;
      }
      check_obj(i, a->pick_id, a->pick_name, true, "pick object");
      check_obj(i, a->place_id, a->place_name, false, "place target");
    } else {
      const auto* m = std::get_if<rec::MotionAct>(&act);
      if (!m) {
        problems.push_back("task " + std::to_string(i + 1) + ": expected a motion act");
        continue;
      }
      check_obj(i, m->inter_obj_id, m->inter_obj_name, false, "interacted object");
      if (text::trim(m->inhand_obj_name).empty()) {
        problems.push_back("task " + std::to_string(i + 1) + ": in-hand object is empty");
      }
      if (text::trim(m->motion).empty()) problems.push_back("task " + std::to_string(i + 1) + ": motion is empty");
    }
  }
  return problems;
}

std::optional<std::string> intention_warning(const rec::IntentionRecord& r, const world::Scene& scene) {
  for (const auto& o : scene.objects) {
    if (scenario::contains_word(r.text, o.name)) {
      return "intention at " + world::DayClock::slot_label(r.hour_slot) + " names scene object '" + o.name + "'";
    }
  }
  return std::nullopt;
}

std::vector<world::Event> execute_tasks(world::WorldState& w, const std::vector<rec::TaskRecord>& tasks) {
  auto first = w.events.size();
  for (const auto& t : tasks) {
    if (const auto* a = std::get_if<rec::PickPlaceAct>(&t.act)) {
      world::apply_pick(w, world::Agent::Human, a->pick_id);
      world::apply_place(w, world::Agent::Human, a->pick_id, world::PlaceTarget::object(a->place_id));
    } else if (const auto* m = std::get_if<rec::MotionAct>(&t.act)) {
      world::record_motion(w, world::Agent::Human, m->motion, m->inter_obj_id, m->inhand_obj_name);
    } else {
      throw ValidationError("the human cannot execute an offer");
    }
  }
  return {w.events.begin() + static_cast<std::ptrdiff_t>(first), w.events.end()};
}

namespace {

const world::ObjectInstance& resolve(const world::Scene& scene, const std::string& ref) {
  auto key = text::lower(text::trim(ref));
  for (const auto& o : scene.objects) {
    if (text::lower(o.name) == key) return o;
  }
  const world::ObjectInstance* best = nullptr;
  for (const auto& o : scene.objects) {  // objects are in ascending id order
    if (text::lower(o.cls) == key) return o;
    if (!best && scenario::contains_word(o.name, key)) best = &o;
  }
  if (!best) throw ValidationError("no scene object matches '" + text::trim(ref) + "'");
  return *best;
}

}  // namespace

rec::TaskRecord parse_task_text(std::string_view line, rec::CollabType type, const world::Scene& scene) {
  rec::TaskRecord t;
  t.thought = text::trim(line);
  if (type == rec::CollabType::PickPlace) {
    auto arrow = line.find("->");
    if (arrow == std::string_view::npos) {
      throw ValidationError("expected '<object> -> <target>' in '" + t.thought + "'");
    }
    const auto& pick = resolve(scene, std::string(line.substr(0, arrow)));
    const auto& place = resolve(scene, std::string(line.substr(arrow + 2)));
    if (!pick.dynamic) throw ValidationError("'" + pick.name + "' cannot be picked up");
    if (place.dynamic) throw ValidationError("'" + place.name + "' is not a fixed target");
    t.act = rec::PickPlaceAct{pick.id, pick.name, place.id, place.name};
    return t;
  }
  static const std::regex grammar(R"(^\s*(.+?)\s+at\s+(.+?)\s+with\s+(.+?)\s*$)", std::regex::icase);
  std::string s(line);
  std::smatch m;
  if (!std::regex_match(s, m, grammar)) {
    throw ValidationError("expected '<motion> at <object> with <item>' in '" + t.thought + "'");
  }
  const auto& fixed = resolve(scene, m[2].str());
  if (fixed.dynamic) throw ValidationError("'" + fixed.name + "' is not a fixed object");
  t.act = rec::MotionAct{fixed.id, fixed.name, m[3].str(), m[1].str()};
  return t;
}

// ------------------------------------------------------------ LlmHuman

const std::vector<std::string>& motion_labels() {
  static const std::vector<std::string> labels = [] {
    std::vector<std::string> out;
    for (const auto& l : text::split_lines(assets::get("motions.txt"))) {
      auto t = text::trim(l);
      if (!t.empty()) out.push_back(t);
    }
    return out;
  }();
  return labels;
}

namespace {

world::MappingFilter mapping_filter(rec::CollabType type) {
  return type == rec::CollabType::PickPlace ? world::MappingFilter::All : world::MappingFilter::StaticOnly;
}

std::string task_memory_text(const rec::TaskRecord& t) { return t.thought + " (" + rec::describe(t) + ")"; }

}  // namespace

LlmHuman::LlmHuman(gw::Gateway& g, persona::PersonaRecord persona, LlmHumanConfig cfg)
    : g_(g), persona_(std::move(persona)), cfg_(std::move(cfg)) {
  if (cfg_.retries < 1) throw ValidationError("human retries must be at least 1");
  cfg_.retrieval.validate();
}

void LlmHuman::start_day(int day) { memory_.reset_daily({memory::Kind::Intention, memory::Kind::Task}, day); }

std::pair<std::string, std::string> LlmHuman::history(const std::string& query, world::DayClock now) {
  auto q = g_.embed(query);
  auto ints = memory_.retrieve(q, now, memory::Kind::Intention, cfg_.retrieval.k_intentions, cfg_.retrieval.decay);
  auto tasks = memory_.retrieve(q, now, memory::Kind::Task, cfg_.retrieval.k_tasks, cfg_.retrieval.decay);
  return {memory::format_intentions(ints), memory::format_tasks(tasks)};
}

std::string LlmHuman::chat(const std::string& template_id, const std::map<std::string, std::string>& vars,
                           const HourContext& ctx, int attempt, HumanTurn& log) {
  prompts::Vars used;
  for (const auto& k : prompts::placeholders(template_id)) used[k] = vars.at(k);
  gw::ChatRequest req;
  req.template_id = template_id;
  req.prompt = prompts::render(template_id, used);
  req.seed = ctx.seed;
  req.trial_index = attempt;
  auto text = g_.chat(req);
  log.raw.push_back({template_id, attempt, text});
  return text;
}

HumanTurn LlmHuman::propose(const HourContext& ctx) {
  if (!ctx.scene) throw ValidationError("hour context has no scene");
  HumanTurn turn;
  world::DayClock now{ctx.day, ctx.slot};
  auto label = now.label();
  auto [prev_i, prev_t] = history(persona_.short_profile + " at " + label, now);
  std::map<std::string, std::string> vars{{"time", label},
                                          {"rooms", text::join(ctx.scene->rooms, ", ")},
                                          {"big5", persona_.big5.to_dict_text()},
                                          {"profile", persona_.extended_profile},
                                          {"prev_intentions", prev_i},
                                          {"prev_tasks", prev_t}};
  std::string last;
  std::optional<rec::IntentionRecord> intention;
  for (int attempt = 0; attempt < cfg_.retries && !intention; ++attempt) {
    last = chat("intention_proposal", vars, ctx, attempt, turn);
    try {
      intention = rec::parse_intention(last);
    } catch (const ParseError&) {
    }
  }
  if (!intention) {
    throw EpisodeError("intention proposal at day " + std::to_string(ctx.day) + " " + label + " did not parse", last);
  }
  intention->day = ctx.day;
  intention->hour_slot = ctx.slot;
  intention->time_label = label;
  if (auto w = intention_warning(*intention, *ctx.scene)) turn.warnings.push_back(*w);
  turn.intention = *intention;
  turn.tasks = decompose(turn.intention, ctx, turn);
  return turn;
}

std::vector<rec::TaskRecord> LlmHuman::decompose(const rec::IntentionRecord& intention, const HourContext& ctx,
                                                 HumanTurn& log) {
  if (!ctx.scene) throw ValidationError("hour context has no scene");
  world::DayClock now{ctx.day, ctx.slot};
  auto [prev_i, prev_t] = history(intention.text, now);
  auto rules = rec::task_rules(ctx.type, rec::Role::Human);
  if (ctx.type == rec::CollabType::Motion) {
    auto motions = memory::search(g_, intention.text, motion_labels(), cfg_.motion_choices);
    rules += " Choose each motion from: " + text::join(motions, ", ") + ".";
  }
  std::map<std::string, std::string> vars{{"intention", intention.text},
                                          {"time", now.label()},
                                          {"mapping", world::mapping_summary(*ctx.scene, mapping_filter(ctx.type))},
                                          {"big5", persona_.big5.to_dict_text()},
                                          {"profile", persona_.extended_profile},
                                          {"prev_intentions", prev_i},
                                          {"prev_tasks", prev_t},
                                          {"task_count", std::to_string(rec::human_task_count(ctx.type))},
                                          {"task_rules", rules},
                                          {"act_format", rec::act_format(ctx.type, rec::Role::Human)}};
  std::string last;
  for (int attempt = 0; attempt < cfg_.retries; ++attempt) {
    std::vector<rec::TaskRecord> tasks;
    try {
      tasks = rec::parse_tasks(chat("task_proposal", vars, ctx, attempt, log));
    } catch (const ParseError& e) {
      last = std::string(e.what()) + "\n" + e.raw();
      continue;
    }
    for (const char* phase : {"reflect_profile", "reflect_world"}) {
      vars["tasks"] = rec::render_tasks(tasks);
      auto text = chat(phase, vars, ctx, attempt, log);
      try {
        auto r = rec::parse_reflection(text);
        if (!r.revised.empty()) tasks = std::move(r.revised);
      } catch (const ParseError&) {
        log.warnings.push_back(std::string(phase) + " output did not parse; kept the unrevised tasks");
      }
    }
    auto problems = validate_tasks(tasks, ctx.type, *ctx.scene);
    if (problems.empty()) {
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        tasks[i].day = ctx.day;
        tasks[i].hour_slot = ctx.slot;
        tasks[i].task_index = static_cast<int>(i);
      }
      return tasks;
    }
    last = text::join(problems, "\n");
  }
  throw EpisodeError("task proposal at day " + std::to_string(ctx.day) + " " + now.label() +
                         " failed validation after " + std::to_string(cfg_.retries) + " attempts",
                     last);
}

void LlmHuman::remember(const HumanTurn& turn) {
  const auto& i = turn.intention;
  memory_.add({memory::Kind::Intention, i.text, i.day, i.hour_slot, std::nullopt, g_.embed(i.text)});
  for (const auto& t : turn.tasks) {
    auto txt = task_memory_text(t);
    memory_.add({memory::Kind::Task, txt, t.day, t.hour_slot, t.task_index, g_.embed(txt)});
  }
}

rec::FeedbackRecord LlmHuman::feedback(const rec::IntentionRecord& intention,
                                       const std::vector<rec::TaskRecord>& human_tasks,
                                       const std::vector<rec::TaskRecord>& robot_tasks,
                                       std::vector<RawCompletion>* raw) {
  rec::FeedbackRecord fb;
  fb.day = intention.day;
  fb.hour_slot = intention.hour_slot;
  if (robot_tasks.empty()) return fb;
  gw::ChatRequest req;
  req.template_id = "feedback";
  req.prompt = prompts::render("feedback", {{"intention", intention.text},
                                            {"human_tasks", rec::render_tasks(human_tasks)},
                                            {"robot_tasks", rec::render_tasks(robot_tasks)}});
  std::string last;
  for (int attempt = 0; attempt < cfg_.retries; ++attempt) {
    req.trial_index = attempt;
    last = g_.chat(req);
    if (raw) raw->push_back({"feedback", attempt, last});
    try {
      auto parsed = rec::parse_feedback(last);
      if (parsed.labels.size() == robot_tasks.size()) {
        parsed.day = fb.day;
        parsed.hour_slot = fb.hour_slot;
        return parsed;
      }
    } catch (const ParseError&) {
    }
  }
  throw EpisodeError("feedback for day " + std::to_string(fb.day) + " " +
                         world::DayClock::slot_label(fb.hour_slot) + " did not return " +
                         std::to_string(robot_tasks.size()) + " labels",
                     last);
}

// ------------------------------------------------------------ ScriptedHuman

ScriptedHuman::ScriptedHuman(const scenario::Catalog& cat, std::string persona_id)
    : cat_(cat), persona_id_(std::move(persona_id)) {
  if (!cat_.persona(persona_id_)) throw ValidationError("catalog has no persona '" + persona_id_ + "'");
}

HumanTurn ScriptedHuman::propose(const HourContext& ctx) {
  if (!ctx.scene) throw ValidationError("hour context has no scene");
  auto binder = scenario::Binder::from_scene(*ctx.scene, mapping_filter(ctx.type));
  auto s = scenario::scripted_turn(cat_, persona_id_, ctx.slot, ctx.seed, ctx.type, binder);
  HumanTurn turn;
  turn.intention = s.intention;
  turn.intention.day = ctx.day;
  turn.intention.hour_slot = ctx.slot;
  turn.tasks = s.tasks;
  for (auto& t : turn.tasks) {
    t.day = ctx.day;
    t.hour_slot = ctx.slot;
  }
  return turn;
}

rec::FeedbackRecord ScriptedHuman::feedback(const rec::IntentionRecord& intention,
                                            const std::vector<rec::TaskRecord>& human_tasks,
                                            const std::vector<rec::TaskRecord>& robot_tasks,
                                            std::vector<RawCompletion>*) {
  rec::FeedbackRecord fb;
  fb.day = intention.day;
  fb.hour_slot = intention.hour_slot;
  for (const auto& r : robot_tasks) {
    fb.labels.push_back(scenario::serves(cat_, r, human_tasks));
    fb.reasons.push_back(fb.labels.back() ? "Helped one of my tasks." : "Not needed.");
  }
  return fb;
}

// ------------------------------------------------------------ offline schedules

std::vector<ScheduleEntry> read_schedule(const std::filesystem::path& p) {
  std::vector<ScheduleEntry> out;
  std::set<std::pair<int, int>> seen;
  int lineno = 0;
  auto fail = [&](const std::string& msg) { throw LoadError(p.string() + ":" + std::to_string(lineno) + ": " + msg); };
  for (const auto& line : text::split_lines(fsio::read_file(p))) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::exception& e) {
      fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("expected a JSON object");
    ScheduleEntry e;
    if (!j.contains("day") || !j["day"].is_number_integer() || j["day"].get<int>() < 1) {
      fail("'day' must be a positive integer");
    }
    e.day = j["day"].get<int>();
    if (!j.contains("hour")) fail("missing 'hour'");
    if (j["hour"].is_number_integer()) {
      e.slot = j["hour"].get<int>();
      if (e.slot < 0 || e.slot >= world::DayClock::kSlots) fail("'hour' slot out of range");
    } else if (j["hour"].is_string()) {
      auto s = world::DayClock::parse_slot_label(j["hour"].get<std::string>());
      if (!s) fail("'hour' is not a clock label between 9 am and 8 pm");
      e.slot = *s;
    } else {
      fail("'hour' must be a slot index or a clock label");
    }
    if (!j.contains("intention") || !j["intention"].is_string() || text::trim(j["intention"].get<std::string>()).empty()) {
      fail("'intention' must be a non-empty string");
    }
    e.intention = text::trim(j["intention"].get<std::string>());
    if (j.contains("tasks")) {
      if (!j["tasks"].is_array()) fail("'tasks' must be a list of strings");
      for (const auto& t : j["tasks"]) {
        if (!t.is_string()) fail("'tasks' must be a list of strings");
        e.tasks.push_back(t.get<std::string>());
      }
    }
    if (!seen.insert({e.day, e.slot}).second) {
      fail("duplicate entry for day " + std::to_string(e.day) + ", " + world::DayClock::slot_label(e.slot));
    }
    out.push_back(std::move(e));
  }
  if (out.empty()) throw LoadError(p.string() + ": schedule is empty");
  int last_day = 0;
  for (const auto& e : out) last_day = std::max(last_day, e.day);
  for (int d = 1; d <= last_day; ++d) {
    for (int s = 0; s < world::DayClock::kSlots; ++s) {
      if (!seen.count({d, s})) {
        throw LoadError(p.string() + ": schedule is missing day " + std::to_string(d) + ", hour " +
                        world::DayClock::slot_label(s));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::pair(a.day, a.slot) < std::pair(b.day, b.slot);
  });
  return out;
}

OfflineScheduleHuman::OfflineScheduleHuman(std::vector<ScheduleEntry> entries, std::unique_ptr<LlmHuman> decomposer)
    : entries_(std::move(entries)), decomposer_(std::move(decomposer)) {
  if (!decomposer_) throw ValidationError("offline schedule needs a task decomposer");
}

int OfflineScheduleHuman::days() const {
  int d = 0;
  for (const auto& e : entries_) d = std::max(d, e.day);
  return d;
}

HumanTurn OfflineScheduleHuman::propose(const HourContext& ctx) {
  if (!ctx.scene) throw ValidationError("hour context has no scene");
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const auto& e) { return e.day == ctx.day && e.slot == ctx.slot; });
  auto label = world::DayClock::slot_label(ctx.slot);
  if (it == entries_.end()) {
    throw EpisodeError("schedule has no entry for day " + std::to_string(ctx.day) + ", hour " + label);
  }
  HumanTurn turn;
  turn.intention.day = ctx.day;
  turn.intention.hour_slot = ctx.slot;
  turn.intention.time_label = label;
  turn.intention.text = it->intention;
  if (auto w = intention_warning(turn.intention, *ctx.scene)) turn.warnings.push_back(*w);
  if (it->tasks.empty()) {
    turn.tasks = decomposer_->decompose(turn.intention, ctx, turn);
    return turn;
  }
  for (const auto& line : it->tasks) {
    try {
      turn.tasks.push_back(parse_task_text(line, ctx.type, *ctx.scene));
    } catch (const ValidationError& e) {
      throw EpisodeError("day " + std::to_string(ctx.day) + ", hour " + label + ": " + e.what(), line);
    }
  }
  auto problems = validate_tasks(turn.tasks, ctx.type, *ctx.scene);
  if (!problems.empty()) {
    throw EpisodeError("day " + std::to_string(ctx.day) + ", hour " + label + ": " + text::join(problems, "; "));
  }
  for (std::size_t i = 0; i < turn.tasks.size(); ++i) {
    turn.tasks[i].day = ctx.day;
    turn.tasks[i].hour_slot = ctx.slot;
    turn.tasks[i].task_index = static_cast<int>(i);
  }
  return turn;
}

}  // namespace hrc::human
