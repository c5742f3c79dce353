#include "hrc/hitl.hpp"

#include <openssl/rand.h>

#include <fstream>
#include <iostream>

#include "hrc/error.hpp"

namespace hrc::hitl {

namespace fs = std::filesystem;

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::AwaitingHuman: return "awaiting-human";
    case Phase::RobotActing: return "robot-acting";
    case Phase::AwaitingFeedback: return "awaiting-feedback";
    case Phase::DayComplete: return "day-complete";
  }
  return "?";
}

namespace {

std::string new_session_id() {
  unsigned char buf[16];
  if (RAND_bytes(buf, sizeof buf) != 1) throw Error("could not draw a session id");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (auto b : buf) {
    out += hex[b >> 4];
    out += hex[b & 15];
  }
  return out;
}

bool valid_session_id(const std::string& id) {
  return id.size() == 32 && std::all_of(id.begin(), id.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

bool parse_label(const Json& v, std::size_t i) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    auto s = text::lower(text::trim(v.get<std::string>()));
    if (s == "yes" || s == "y" || s == "true") return true;
    if (s == "no" || s == "n" || s == "false") return false;
  }
  throw ValidationError("label " + std::to_string(i + 1) + " must be yes/no or a boolean");
}

}  // namespace

// ---------------------------------------------------------------- session

class Session {
 public:
  Session(const ServiceConfig& sc, std::string id, const Json& create_body, bool journal)
      : sc_(sc), id_(std::move(id)), dir_(sc.root / id_) {
    cfg_ = config_from(create_body);
    scene_ = bench::resolve_scene(cfg_.scenes[0]);
    fs::create_directories(dir_);
    auto gcfg = cfg_;
    if (gcfg.gateway.mode == gw::Mode::Live) {
      // Record live completions so a restart rebuilds the session from the cache.
      gcfg.gateway.mode = gw::Mode::Record;
      gcfg.gateway.backend = "live";
    }
    g_ = bench::make_gateway(gcfg, dir_ / "cache");
    auto qcfg = gcfg;
    if (!qcfg.gateway.live_embeddings) qcfg.gateway.mode = gw::Mode::Mock;
    query_g_ = bench::make_gateway(qcfg, dir_ / "cache");
    if (sc_.customize_mock) sc_.customize_mock(*g_->mock());
    auto acfg = cfg_.assistant;
    acfg.seed = derive_seed(cfg_.seed, "assistant");
    robot_ = std::make_unique<assist::Assistant>(*g_, acfg);
    w_ = std::make_unique<world::WorldState>(scene_);
    fsio::write_json(dir_ / "config.json", cfg_.to_json());
    if (journal) append_journal({{"op", "create"}, {"body", create_body}});
    publish("phase", phase_json());
    snapshot();
  }

  const std::string& id() const { return id_; }

  Json submit_turn(const Json& body, bool journal = true) {
    std::unique_lock lock(mut_mu_, std::try_to_lock);
    if (!lock.owns_lock()) throw ConflictError("session is " + std::string(to_string(phase_)) + "; one mutation at a time");
    if (phase_ != Phase::AwaitingHuman) {
      throw ConflictError("turns are accepted only while awaiting-human (phase is " +
                          std::string(to_string(phase_)) + ")");
    }
    auto turn = parse_turn(body);

    phase_ = Phase::RobotActing;
    publish("phase", phase_json());
    snapshot();
    bench::HourRecord hr;
    try {
      hr = bench::play_hour(cfg_, *w_, *robot_, *g_, persona(), day_, slot_, turn);
    } catch (...) {
      phase_ = Phase::AwaitingHuman;
      publish("phase", phase_json());
      snapshot();
      throw;
    }
    last_query_ = turn.intention.text;
    for (const auto& t : turn.tasks) last_query_ += ". " + t.thought;
    hours_.push_back(hr);
    world::advance_hour(*w_);
    ++slot_;

    Json out{{"day", day_}, {"hour_slot", hr.slot}, {"proposals", proposals_json(hr)}};
    Json warnings = hr.turn.warnings;
    for (const auto& w : hr.warnings) warnings.push_back(w);
    if (hr.decision.failed) warnings.push_back("robot: " + hr.decision.error);
    out["warnings"] = warnings;
    publish("turn", out);
    phase_ = slot_ == world::DayClock::kSlots ? Phase::AwaitingFeedback : Phase::AwaitingHuman;
    publish("phase", phase_json());
    out["phase"] = std::string(to_string(phase_));
    if (journal) append_journal({{"op", "turn"}, {"body", body}});
    snapshot();
    return out;
  }

  Json submit_feedback(const Json& body, bool journal = true) {
    std::unique_lock lock(mut_mu_, std::try_to_lock);
    if (!lock.owns_lock()) throw ConflictError("session is " + std::string(to_string(phase_)) + "; one mutation at a time");
    if (phase_ != Phase::AwaitingFeedback) {
      throw ConflictError("feedback is accepted only while awaiting-feedback (phase is " +
                          std::string(to_string(phase_)) + ")");
    }
    std::size_t expected = 0;
    for (const auto& h : hours_) expected += h.decision.carried_out().size();
    if (!body.is_object() || !body.contains("labels") || !body["labels"].is_array()) {
      throw ValidationError("body needs a 'labels' array with " + std::to_string(expected) + " entries");
    }
    const auto& jl = body["labels"];
    if (jl.size() != expected) {
      throw ValidationError("expected " + std::to_string(expected) + " labels (one per proposal shown today), got " +
                            std::to_string(jl.size()));
    }
    std::vector<bool> labels;
    for (std::size_t i = 0; i < jl.size(); ++i) labels.push_back(parse_label(jl[i], i));
    std::vector<std::string> reasons;
    if (body.contains("reasons")) {
      if (!body["reasons"].is_array()) throw ValidationError("'reasons' must be an array of strings");
      for (const auto& r : body["reasons"]) {
        if (!r.is_string()) throw ValidationError("'reasons' must be an array of strings");
        reasons.push_back(r.get<std::string>());
      }
    }

    std::size_t offset = 0;
    auto fb = [&](bench::HourRecord& h, std::vector<rec::RawCompletion>&) {
      rec::FeedbackRecord r;
      r.day = day_;
      r.hour_slot = h.slot;
      auto n = h.decision.carried_out().size();
      r.labels.assign(labels.begin() + static_cast<std::ptrdiff_t>(offset),
                      labels.begin() + static_cast<std::ptrdiff_t>(offset + n));
      for (std::size_t i = offset; i < offset + n && i < reasons.size(); ++i) r.reasons.push_back(reasons[i]);
      offset += n;
      return r;
    };
    bench::ScheduleDay sd{day_, cfg_.scenes[0], persona()};
    auto out = bench::finish_day(cfg_, sd, scene_, hours_, fb, *robot_, *g_);
    bench::persist_day(dir_, day_, out, *robot_);
    rows_.insert(rows_.end(), out.rows.begin(), out.rows.end());
    auto metrics = eval::aggregate(rows_);
    bench::write_metrics(dir_, rows_, metrics, bench::run_header(cfg_, day_));

    Json summary{{"day", day_}, {"hours", Json::array()}, {"metrics", metrics.to_json()}};
    std::map<std::string, std::pair<double, int>> mean;
    for (const auto& r : out.rows) {
      Json scores = Json::object();
      for (const auto& [ev, s] : r.by_evaluator) {
        scores[ev] = s.to_json();
        mean[ev].first += s.f1;
        mean[ev].second += 1;
      }
      summary["hours"].push_back({{"hour_slot", r.hour_slot}, {"scores", scores}});
    }
    Json day_mean = Json::object();
    for (const auto& [ev, p] : mean) day_mean[ev] = p.second ? p.first / p.second : 0.0;
    summary["day_mean_f1"] = day_mean;
    last_summary_ = summary;

    phase_ = Phase::DayComplete;
    publish("phase", phase_json());
    publish("day", summary);
    ++day_;
    slot_ = 0;
    hours_.clear();
    w_ = std::make_unique<world::WorldState>(scene_);
    w_->clock = {day_, 0};
    last_query_.clear();
    phase_ = Phase::AwaitingHuman;
    publish("phase", phase_json());
    if (journal) append_journal({{"op", "feedback"}, {"body", body}});
    snapshot();
    return summary;
  }

  Json state() const {
    std::lock_guard lock(snap_mu_);
    return *snap_;
  }

  Json candidates(const std::string& query) const {
    std::lock_guard lock(query_mu_);
    return candidates_for(*query_g_, query);
  }

  std::vector<Event> events(std::uint64_t after, std::chrono::milliseconds wait) const {
    std::unique_lock lock(ev_mu_);
    ev_cv_.wait_for(lock, wait, [&] { return events_.size() > after || closed_; });
    if (after >= events_.size()) return {};
    return {events_.begin() + static_cast<std::ptrdiff_t>(after), events_.end()};
  }

  void close() {
    {
      std::lock_guard lock(ev_mu_);
      closed_ = true;
    }
    ev_cv_.notify_all();
  }

  fs::path dir() const { return dir_; }

 private:
  bench::RunConfig config_from(const Json& body) const {
    if (!body.is_object()) throw ValidationError("session config must be a JSON object");
    if (!body.contains("scene") || !body["scene"].is_string() || body["scene"].get<std::string>().empty()) {
      throw ValidationError("session config is missing 'scene'");
    }
    auto c = sc_.defaults;
    try {
      c.setting = 1;
      c.scenes = {body["scene"].get<std::string>()};
      c.personas = {body.value("persona", std::string("human"))};
      c.collab_type = rec::collab_from_int(body.value("collab_type", rec::as_int(c.collab_type)));
      if (body.contains("policy")) c.assistant.policy = assist::policy_from_string(body["policy"].get<std::string>());
      c.seed = body.value("seed", c.seed);
    } catch (const Json::exception& e) {
      throw ValidationError(std::string("session config: ") + e.what());
    }
    c.human = "hitl";
    c.schedule_file.clear();
    c.max_days = 0;
    c.validate();
    return c;
  }

  const std::string& persona() const { return cfg_.personas[0]; }

  human::HumanTurn parse_turn(const Json& body) const {
    if (!body.is_object()) throw ValidationError("turn body must be a JSON object");
    if (!body.contains("intention") || !body["intention"].is_string() ||
        text::trim(body["intention"].get<std::string>()).empty()) {
      throw ValidationError("turn needs a non-empty 'intention'");
    }
    if (!body.contains("tasks") || !body["tasks"].is_array()) throw ValidationError("turn needs a 'tasks' array");
    human::HumanTurn turn;
    turn.intention.day = day_;
    turn.intention.hour_slot = slot_;
    turn.intention.time_label = world::DayClock::slot_label(slot_);
    turn.intention.text = text::trim(body["intention"].get<std::string>());
    std::vector<std::string> problems;
    int index = 0;
    for (const auto& t : body["tasks"]) {
      ++index;
      if (!t.is_string()) {
        problems.push_back("task " + std::to_string(index) + ": must be a string");
        continue;
      }
      try {
        auto task = human::parse_task_text(t.get<std::string>(), cfg_.collab_type, scene_);
        task.day = day_;
        task.hour_slot = slot_;
        task.task_index = index - 1;
        turn.tasks.push_back(task);
      } catch (const ValidationError& e) {
        problems.push_back("task " + std::to_string(index) + ": " + e.what());
      }
    }
    if (problems.empty()) {
      for (const auto& p : human::validate_tasks(turn.tasks, cfg_.collab_type, scene_)) problems.push_back(p);
    }
    if (!problems.empty()) throw ValidationError(text::join(problems, "; "));
    if (auto w = human::intention_warning(turn.intention, scene_)) turn.warnings.push_back(*w);
    return turn;
  }

  static Json proposals_json(const bench::HourRecord& h) {
    Json a = Json::array();
    for (const auto& t : h.decision.carried_out()) {
      a.push_back({{"text", rec::describe(t)}, {"thought", t.thought}, {"act", rec::to_json(t.act)}});
    }
    return a;
  }

  Json phase_json() const {
    return {{"phase", std::string(to_string(phase_))}, {"day", day_}, {"hour_slot", slot_}};
  }

  Json candidates_for(gw::Gateway& g, const std::string& query) const {
    Json out{{"query", query}, {"objects", Json::array()}, {"motions", Json::array()}};
    if (text::trim(query).empty()) return out;
    std::vector<std::string> objects;
    for (const auto& o : scene_.objects) {
      if (cfg_.collab_type == rec::CollabType::Motion && o.dynamic) continue;
      objects.push_back(o.name);
    }
    out["objects"] = memory::search(g, query, objects, sc_.top_k);
    if (cfg_.collab_type == rec::CollabType::Motion) {
      out["motions"] = memory::search(g, query, human::motion_labels(), sc_.top_k);
    }
    return out;
  }

  void publish(const std::string& type, Json data) {
    {
      std::lock_guard lock(ev_mu_);
      events_.push_back({events_.size() + 1, type, std::move(data)});
    }
    ev_cv_.notify_all();
  }

  void append_journal(const Json& entry) {
    std::ofstream f(dir_ / "journal.jsonl", std::ios::app);
    f << entry.dump() << "\n";
    f.flush();
    if (!f) throw Error("could not write the session journal in " + dir_.string());
  }

  void snapshot() {
    Json s{{"version", 1},
           {"session_id", id_},
           {"config",
            {{"scene", cfg_.scenes[0]},
             {"collab_type", rec::as_int(cfg_.collab_type)},
             {"policy", std::string(assist::to_string(cfg_.assistant.policy))},
             {"persona", persona()},
             {"seed", cfg_.seed}}},
           {"day", day_},
           {"hour_slot", slot_},
           {"time", slot_ < world::DayClock::kSlots ? world::DayClock::slot_label(slot_) : std::string("end of day")},
           {"phase", std::string(to_string(phase_))},
           {"days_completed", day_ - 1}};
    Json hours = Json::array();
    std::size_t offset = 0;
    for (const auto& h : hours_) {
      Json tasks = Json::array();
      for (const auto& t : h.turn.tasks) tasks.push_back(rec::describe(t));
      auto props = proposals_json(h);
      hours.push_back({{"hour_slot", h.slot},
                       {"time", world::DayClock::slot_label(h.slot)},
                       {"intention", h.turn.intention.text},
                       {"tasks", tasks},
                       {"proposals", props},
                       {"label_offset", offset}});
      offset += props.size();
    }
    s["hours"] = hours;
    s["pending_labels"] = phase_ == Phase::AwaitingFeedback ? offset : 0;
    s["candidates"] = candidates_for(*g_, last_query_);
    s["last_day_summary"] = last_summary_;
    auto p = std::make_shared<const Json>(std::move(s));
    std::lock_guard lock(snap_mu_);
    snap_ = std::move(p);
  }

  const ServiceConfig& sc_;
  std::string id_;
  fs::path dir_;
  bench::RunConfig cfg_;
  world::Scene scene_;
  std::unique_ptr<gw::Gateway> g_;
  std::unique_ptr<gw::Gateway> query_g_;
  std::unique_ptr<assist::Assistant> robot_;
  std::unique_ptr<world::WorldState> w_;

  int day_ = 1;
  int slot_ = 0;
  Phase phase_ = Phase::AwaitingHuman;
  std::vector<bench::HourRecord> hours_;
  std::vector<eval::HourRow> rows_;
  std::string last_query_;
  Json last_summary_ = nullptr;

  std::mutex mut_mu_;
  mutable std::mutex snap_mu_;
  std::shared_ptr<const Json> snap_;
  mutable std::mutex query_mu_;
  mutable std::mutex ev_mu_;
  mutable std::condition_variable ev_cv_;
  std::vector<Event> events_;
  bool closed_ = false;
};

// ---------------------------------------------------------------- service

Service::Service(ServiceConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.defaults.resolve_defaults();
  fs::create_directories(cfg_.root);
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(cfg_.root)) {
    if (e.is_directory() && valid_session_id(e.path().filename().string()) && fs::exists(e.path() / "journal.jsonl")) {
      dirs.push_back(e.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& d : dirs) {
    auto id = d.filename().string();
    try {
      std::ifstream f(d / "journal.jsonl");
      std::string line;
      std::shared_ptr<Session> s;
      int lineno = 0;
      while (std::getline(f, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        auto j = Json::parse(line);
        auto op = j.at("op").get<std::string>();
        if (op == "create") {
          if (s) throw LoadError("second create entry at line " + std::to_string(lineno));
          s = std::make_shared<Session>(cfg_, id, j.at("body"), false);
        } else if (!s) {
          throw LoadError("journal does not start with a create entry");
        } else if (op == "turn") {
          s->submit_turn(j.at("body"), false);
        } else if (op == "feedback") {
          s->submit_feedback(j.at("body"), false);
        } else {
          throw LoadError("unknown journal op '" + op + "' at line " + std::to_string(lineno));
        }
      }
      if (s) sessions_[id] = s;
    } catch (const std::exception& e) {
      std::cerr << "warning: could not restore session " << id << ": " << e.what() << "\n";
    }
  }
}

Service::~Service() { shutdown(); }

void Service::shutdown() {
  std::shared_lock lock(mu_);
  for (auto& [_, s] : sessions_) s->close();
}

std::shared_ptr<Session> Service::find(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFoundError("no session '" + id + "'");
  return it->second;
}

std::string Service::create_session(const Json& body) {
  auto id = new_session_id();
  auto s = std::make_shared<Session>(cfg_, id, body, true);
  std::unique_lock lock(mu_);
  sessions_[id] = s;
  return id;
}

Json Service::state(const std::string& id) const { return find(id)->state(); }
Json Service::submit_turn(const std::string& id, const Json& body) { return find(id)->submit_turn(body); }
Json Service::submit_feedback(const std::string& id, const Json& body) { return find(id)->submit_feedback(body); }
Json Service::candidates(const std::string& id, const std::string& q) const { return find(id)->candidates(q); }

std::vector<Event> Service::events(const std::string& id, std::uint64_t after, std::chrono::milliseconds wait) const {
  return find(id)->events(after, wait);
}

fs::path Service::run_dir(const std::string& id) const { return find(id)->dir(); }

std::vector<std::string> Service::session_ids() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [k, _] : sessions_) out.push_back(k);
  return out;
}

}  // namespace hrc::hitl
