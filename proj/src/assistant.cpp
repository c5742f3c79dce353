#include "hrc/assistant.hpp"

#include <algorithm>

#include "hrc/error.hpp"
#include "hrc/prompts.hpp"

namespace hrc::assist {

namespace {

constexpr const char* kAgnosticPrefix = "Unknown. Infer it from this observation: ";

const std::vector<std::pair<Policy, std::string_view>>& policy_table() {
  static const std::vector<std::pair<Policy, std::string_view>> t = {
      {Policy::Main, "main"},
      {Policy::DirectPrompting, "direct-prompting"},
      {Policy::Oracle, "oracle"},
      {Policy::Random, "random"},
      {Policy::IntentionAgnostic, "intention-agnostic"},
      {Policy::ContextAgnostic, "human-context-agnostic"}};
  return t;
}

bool uses_intention_classifier(Policy p) { return p == Policy::Main || p == Policy::ContextAgnostic; }

bool uses_task_classifier(Policy p) {
  return p == Policy::Main || p == Policy::ContextAgnostic || p == Policy::Oracle || p == Policy::IntentionAgnostic;
}

std::string strip_period(std::string s) {
  while (!s.empty() && (s.back() == '.' || s.back() == ' ')) s.pop_back();
  return s;
}

}  // namespace

std::string_view to_string(Policy p) {
  for (const auto& [k, v] : policy_table()) {
    if (k == p) return v;
  }
  return "main";
}

Policy policy_from_string(std::string_view s) {
  for (const auto& [k, v] : policy_table()) {
    if (v == s) return k;
  }
  throw ValidationError("unknown policy '" + std::string(s) + "' (expected one of " +
                        text::join(policy_names(), ", ") + ")");
}

std::vector<std::string> policy_names() {
  std::vector<std::string> out;
  for (const auto& [_, v] : policy_table()) out.emplace_back(v);
  return out;
}

std::string task_candidate_text(const rec::TaskRecord& t) { return strip_period(t.thought); }

// ---------------------------------------------------------------- observation

ObservationRecord observe(const world::Scene& scene, const rec::TaskRecord& first_task,
                          const std::vector<world::Event>& events, rec::CollabType type) {
  ObservationRecord o;
  o.day = first_task.day;
  o.hour_slot = first_task.hour_slot;
  o.type = type;
  o.events = events;
  auto room_of = [&](int id) {
    const auto* obj = scene.find(id);
    return obj ? obj->room : std::string("house");
  };
  if (const auto* a = std::get_if<rec::PickPlaceAct>(&first_task.act)) {
    std::string room = room_of(a->place_id);
    for (const auto& e : events) {
      if (e.kind == world::Event::Kind::Place && !e.room.empty()) room = e.room;
    }
    o.text_hint = strip_period(first_task.thought);
    o.text = "The human picked up " + a->pick_name + " (id " + std::to_string(a->pick_id) + ") and placed it on " +
             a->place_name + " (id " + std::to_string(a->place_id) + ") in the " + room +
             ". Description: " + *o.text_hint + ".";
  } else if (const auto* m = std::get_if<rec::MotionAct>(&first_task.act)) {
    o.text = "The human did '" + m->motion + "' near " + m->inter_obj_name + " (id " +
             std::to_string(m->inter_obj_id) + ") in the " + room_of(m->inter_obj_id) + ".";
  } else {
    throw ValidationError("an observation needs a human act");
  }
  return o;
}

Json ObservationRecord::to_json() const {
  Json ev = Json::array();
  for (const auto& e : events) ev.push_back(world::event_to_json(e));
  Json j{{"day", day}, {"hour_slot", hour_slot}, {"type", rec::as_int(type)}, {"events", ev}, {"text", text}};
  if (text_hint) j["text_hint"] = *text_hint;
  return j;
}

ObservationRecord ObservationRecord::from_json(const Json& j) {
  ObservationRecord o;
  o.day = j.at("day").get<int>();
  o.hour_slot = j.at("hour_slot").get<int>();
  o.type = rec::collab_from_int(j.at("type").get<int>());
  for (const auto& e : j.at("events")) o.events.push_back(world::event_from_json(e));
  o.text = j.at("text").get<std::string>();
  if (j.contains("text_hint")) o.text_hint = j["text_hint"].get<std::string>();
  return o;
}

Json InferredProfile::to_json() const {
  return Json{{"big5", big5.to_json()},
              {"profile", profile_text},
              {"known", known},
              {"last_updated", {{"day", last_updated.day}, {"slot", last_updated.slot}}}};
}

InferredProfile InferredProfile::from_json(const Json& j) {
  InferredProfile p;
  p.big5 = persona::BigFive::from_json(j.at("big5"));
  p.profile_text = j.value("profile", "");
  p.known = j.value("known", false);
  if (j.contains("last_updated")) p.last_updated = {j["last_updated"].at("day"), j["last_updated"].at("slot")};
  return p;
}

// ---------------------------------------------------------------- decisions

std::vector<rec::TaskRecord> HourDecision::accepted() const {
  std::vector<rec::TaskRecord> out;
  for (const auto& ic : intentions) {
    if (!ic.presented) continue;
    for (const auto& t : ic.tasks) {
      if (t.accepted) out.push_back(t.task);
    }
  }
  return out;
}

std::vector<rec::TaskRecord> HourDecision::carried_out() const {
  std::vector<rec::TaskRecord> out;
  for (const auto& ic : intentions) {
    if (!ic.presented) continue;
    for (const auto& t : ic.tasks) {
      if (t.accepted && t.executed_ok.value_or(false)) out.push_back(t.task);
    }
  }
  return out;
}

std::vector<bool> labels_for_accepted(const HourDecision& d, const std::vector<bool>& carried_out_labels) {
  std::vector<bool> out;
  std::size_t next = 0;
  for (const auto& ic : d.intentions) {
    if (!ic.presented) continue;
    for (const auto& t : ic.tasks) {
      if (!t.accepted) continue;
      if (t.executed_ok.value_or(false)) {
        if (next >= carried_out_labels.size()) break;
        out.push_back(carried_out_labels[next++]);
      } else {
        out.push_back(false);
      }
    }
  }
  if (next != carried_out_labels.size() || out.size() != d.accepted().size()) {
    throw ValidationError("expected " + std::to_string(d.carried_out().size()) + " feedback labels for day " +
                          std::to_string(d.day) + " " + world::DayClock::slot_label(d.hour_slot) + ", got " +
                          std::to_string(carried_out_labels.size()));
  }
  return out;
}

namespace {

Json context_json(const FeatureContext& c) {
  return Json{{"profile", c.profile},         {"big5", c.big5}, {"prev_intentions", c.prev_intentions},
              {"prev_tasks", c.prev_tasks}, {"time", c.time}, {"hour_slot", c.hour_slot}};
}

FeatureContext context_from_json(const Json& j) {
  return {j.value("profile", ""),    j.value("big5", ""), j.value("prev_intentions", ""),
          j.value("prev_tasks", ""), j.value("time", ""), j.value("hour_slot", 0)};
}

}  // namespace

Json HourDecision::to_json() const {
  Json ints = Json::array();
  for (const auto& ic : intentions) {
    Json tasks = Json::array();
    for (const auto& t : ic.tasks) {
      Json tj{{"task", rec::to_json(t.task)}, {"valid", t.valid}, {"score", t.score}, {"accepted", t.accepted}};
      if (t.executed_ok) tj["executed_ok"] = *t.executed_ok;
      if (!t.error.empty()) tj["error"] = t.error;
      tasks.push_back(tj);
    }
    ints.push_back({{"intention", rec::to_json(ic.intention)},
                    {"score", ic.score},
                    {"survived", ic.survived},
                    {"presented", ic.presented},
                    {"tasks", tasks}});
  }
  Json raws = Json::array();
  for (const auto& r : raw) raws.push_back(r.to_json());
  Json j{{"day", day},
         {"hour_slot", hour_slot},
         {"persona", persona},
         {"policy", policy},
         {"observation", observation.to_json()},
         {"context", context_json(context)},
         {"intentions", ints},
         {"failed", failed},
         {"warnings", warnings},
         {"raw", raws}};
  if (chosen) j["chosen"] = *chosen;
  if (!error.empty()) j["error"] = error;
  return j;
}

HourDecision HourDecision::from_json(const Json& j) {
  HourDecision d;
  d.day = j.at("day").get<int>();
  d.hour_slot = j.at("hour_slot").get<int>();
  d.persona = j.value("persona", "");
  d.policy = j.value("policy", "");
  d.observation = ObservationRecord::from_json(j.at("observation"));
  d.context = context_from_json(j.value("context", Json::object()));
  for (const auto& ij : j.at("intentions")) {
    IntentionCandidate ic;
    ic.intention = rec::intention_from_json(ij.at("intention"));
    ic.score = ij.value("score", 0.5);
    ic.survived = ij.value("survived", false);
    ic.presented = ij.value("presented", false);
    for (const auto& tj : ij.at("tasks")) {
      TaskCandidate t;
      t.task = rec::task_from_json(tj.at("task"));
      t.valid = tj.value("valid", true);
      t.score = tj.value("score", 0.5);
      t.accepted = tj.value("accepted", false);
      if (tj.contains("executed_ok")) t.executed_ok = tj["executed_ok"].get<bool>();
      t.error = tj.value("error", "");
      ic.tasks.push_back(std::move(t));
    }
    d.intentions.push_back(std::move(ic));
  }
  if (j.contains("chosen")) d.chosen = j["chosen"].get<std::size_t>();
  d.failed = j.value("failed", false);
  d.error = j.value("error", "");
  d.warnings = j.value("warnings", std::vector<std::string>{});
  for (const auto& r : j.value("raw", Json::array())) {
    d.raw.push_back({r.at("template").get<std::string>(), r.value("attempt", 0), r.at("text").get<std::string>()});
  }
  return d;
}

// ---------------------------------------------------------------- config

void AssistantConfig::validate() const {
  retrieval.validate();
  if (retries < 1) throw ValidationError("assistant retries must be at least 1");
  if (classifier != "reference" && classifier != "remote") {
    throw ValidationError("classifier must be 'reference' or 'remote'");
  }
  if (traits_window < 1) throw ValidationError("traits_window must be at least 1");
}

Json AssistantConfig::to_json() const {
  return Json{{"policy", to_string(policy)},
              {"ablation", {{"no_traits", ablation.no_traits}, {"no_context", ablation.no_context}}},
              {"retrieval", retrieval.to_json()},
              {"retries", retries},
              {"cap_proposals", cap_proposals},
              {"classifier", classifier},
              {"features", features.to_json()},
              {"train", train.to_json()},
              {"seed", seed},
              {"traits_window", traits_window}};
}

AssistantConfig AssistantConfig::from_json(const Json& j) {
  AssistantConfig c;
  if (j.contains("policy")) c.policy = policy_from_string(j["policy"].get<std::string>());
  if (j.contains("ablation")) {
    c.ablation.no_traits = j["ablation"].value("no_traits", false);
    c.ablation.no_context = j["ablation"].value("no_context", false);
  }
  if (j.contains("retrieval")) c.retrieval = memory::RetrievalConfig::from_json(j["retrieval"]);
  c.retries = j.value("retries", c.retries);
  c.cap_proposals = j.value("cap_proposals", c.cap_proposals);
  c.classifier = j.value("classifier", c.classifier);
  if (j.contains("features")) c.features = classify::FeatureConfig::from_json(j["features"]);
  if (j.contains("train")) c.train = classify::TrainConfig::from_json(j["train"]);
  c.seed = j.value("seed", c.seed);
  c.traits_window = j.value("traits_window", c.traits_window);
  c.validate();
  return c;
}

// ---------------------------------------------------------------- assistant

Assistant::Assistant(gw::Gateway& g, AssistantConfig cfg) : g_(g), cfg_(std::move(cfg)) {
  cfg_.validate();
  auto fcfg = cfg_.features;
  if (cfg_.policy == Policy::ContextAgnostic) fcfg.mask = classify::FeatureMask::time_only();
  auto make = [&](std::string_view salt) -> std::unique_ptr<classify::Classifier> {
    if (cfg_.classifier == "remote") return std::make_unique<classify::RemoteClassifier>(g_);
    auto t = cfg_.train;
    t.seed = derive_seed(cfg_.seed, salt);
    return std::make_unique<classify::ReferenceClassifier>(g_, fcfg, t);
  };
  intention_clf_ = make("classifier/intention");
  task_clf_ = make("classifier/task");
}

bool Assistant::learns() const { return uses_task_classifier(cfg_.policy); }

const InferredProfile* Assistant::profile(const std::string& persona) const {
  auto it = profiles_.find(persona);
  return it == profiles_.end() ? nullptr : &it->second;
}

Json Assistant::profiles_json() const {
  Json j = Json::object();
  for (const auto& [k, v] : profiles_) j[k] = v.to_json();
  return j;
}

FeatureContext Assistant::context_for(const HourInput& in, const gw::Vec& query) const {
  FeatureContext c;
  world::DayClock now{in.day, in.slot};
  c.time = now.label();
  c.hour_slot = in.slot;
  if (!cfg_.ablation.no_traits) {
    if (const auto* p = profile(in.persona); p && p->known) {
      c.profile = p->profile_text;
      c.big5 = p->big5.to_dict_text();
    }
  }
  if (!cfg_.ablation.no_context) {
    const auto& r = cfg_.retrieval;
    c.prev_intentions = memory::format_intentions(
        memory_.retrieve(query, now, memory::Kind::Intention, r.k_intentions, r.decay));
    c.prev_tasks = memory::format_tasks(memory_.retrieve(query, now, memory::Kind::Task, r.k_tasks, r.decay));
  }
  return c;
}

classify::ClassifierExample Assistant::example(const FeatureContext& ctx, const std::string& candidate,
                                               bool label) const {
  return {ctx.profile, ctx.big5, ctx.prev_intentions, ctx.prev_tasks, ctx.time, ctx.hour_slot, candidate, label};
}

namespace {

std::string chat_logged(gw::Gateway& g, const std::string& id, const prompts::Vars& vars, std::uint64_t seed,
                        int attempt, std::vector<rec::RawCompletion>& raw) {
  gw::ChatRequest req;
  req.template_id = id;
  req.prompt = prompts::render(id, vars);
  req.seed = seed;
  req.trial_index = attempt;
  auto out = g.chat(req);
  raw.push_back({id, attempt, out});
  return out;
}

}  // namespace

std::vector<rec::IntentionRecord> Assistant::discover_intentions(const ObservationRecord& obs,
                                                                 const FeatureContext& ctx, std::uint64_t seed,
                                                                 std::vector<rec::RawCompletion>& raw) {
  prompts::Vars vars{{"observation", obs.text},         {"time", ctx.time},
                     {"big5", ctx.big5},                {"profile", ctx.profile},
                     {"prev_intentions", ctx.prev_intentions}, {"prev_tasks", ctx.prev_tasks}};
  std::string last;
  for (int attempt = 0; attempt < cfg_.retries; ++attempt) {
    last = chat_logged(g_, "intention_discovery", vars, seed, attempt, raw);
    try {
      auto cands = rec::parse_intention_candidates(last);
      if (cands.size() == 5) {
        for (auto& c : cands) {
          c.day = obs.day;
          c.hour_slot = obs.hour_slot;
        }
        return cands;
      }
    } catch (const ParseError&) {
    }
  }
  throw EpisodeError("intention discovery did not return 5 candidates", last);
}

std::vector<TaskCandidate> Assistant::discover_tasks(const std::string& intention, const world::Scene& scene,
                                                     rec::CollabType type, const FeatureContext& ctx,
                                                     std::uint64_t seed, std::vector<rec::RawCompletion>& raw) {
  prompts::Vars vars{{"intention", intention},
                     {"time", ctx.time},
                     {"mapping", world::mapping_summary(scene, world::MappingFilter::All)},
                     {"big5", ctx.big5},
                     {"profile", ctx.profile},
                     {"prev_intentions", ctx.prev_intentions},
                     {"prev_tasks", ctx.prev_tasks},
                     {"task_rules", rec::task_rules(type, rec::Role::Robot)},
                     {"act_format", rec::act_format(type, rec::Role::Robot)}};
  std::string last;
  for (int attempt = 0; attempt < cfg_.retries; ++attempt) {
    last = chat_logged(g_, "task_discovery", vars, seed, attempt, raw);
    std::vector<rec::TaskRecord> tasks;
    try {
      tasks = rec::parse_tasks(last);
    } catch (const ParseError&) {
      continue;
    }
    if (tasks.size() != 5) continue;
    std::vector<TaskCandidate> out;
    for (auto& t : tasks) {
      TaskCandidate c;
      c.task = std::move(t);
      if (type == rec::CollabType::PickPlace) {
        const auto* a = std::get_if<rec::PickPlaceAct>(&c.task.act);
        const auto* pick = a ? scene.find(a->pick_id) : nullptr;
        const auto* place = a ? scene.find(a->place_id) : nullptr;
        c.valid = pick && place && pick->dynamic && !place->dynamic;
        if (!c.valid) c.error = "not a pick-and-place over scene objects";
      } else {
        if (const auto* m = std::get_if<rec::MotionAct>(&c.task.act)) c.task.act = rec::OfferAct{m->inhand_obj_name};
        const auto* o = std::get_if<rec::OfferAct>(&c.task.act);
        c.valid = o && !text::trim(o->obj_name).empty();
        if (!c.valid) c.error = "not an object offer";
      }
      out.push_back(std::move(c));
    }
    return out;
  }
  throw EpisodeError("task discovery did not return 5 tasks", last);
}

InferredProfile Assistant::infer_traits(const std::vector<std::string>& intentions,
                                        const std::vector<std::string>& tasks, const InferredProfile& prior,
                                        std::vector<rec::RawCompletion>& raw) {
  if (intentions.empty() && tasks.empty()) throw ValidationError("traits inference needs at least one hour of history");
  prompts::Vars vars{{"intentions", text::join(intentions, "; ")},
                     {"tasks", text::join(tasks, "; ")},
                     {"profile", prior.known ? prior.profile_text : ""}};
  std::string last;
  for (int attempt = 0; attempt < cfg_.retries; ++attempt) {
    last = chat_logged(g_, "traits_inference", vars, derive_seed(cfg_.seed, "traits"), attempt, raw);
    try {
      InferredProfile p;
      p.big5 = persona::parse_big5_dict(last);
      for (const auto& line : text::split_lines(last)) {
        auto t = text::trim(line);
        if (text::starts_with_ci(t, "Profile:")) p.profile_text = text::trim(t.substr(8));
      }
      if (p.profile_text.empty()) continue;
      // Keep at most three sentences.
      if (text::sentence_count(p.profile_text) > 3) {
        std::size_t cut = 0;
        for (int n = 0; n < 3; ++n) cut = p.profile_text.find_first_of(".!?", cut) + 1;
        p.profile_text = p.profile_text.substr(0, cut);
      }
      p.known = true;
      return p;
    } catch (const ParseError&) {
    }
  }
  throw ParseError("traits inference output did not parse", last);
}

void Assistant::score_intentions(std::vector<IntentionCandidate>& cands, const FeatureContext& ctx) {
  for (auto& c : cands) {
    auto p = intention_clf_->predict(example(ctx, c.intention.text, false));
    c.score = p.score;
    c.survived = p.label;
  }
  if (std::none_of(cands.begin(), cands.end(), [](const auto& c) { return c.survived; }) && !cands.empty()) {
    auto best = std::max_element(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return a.score < b.score; });
    best->survived = true;
  }
}

void Assistant::filter_tasks(std::vector<TaskCandidate>& tasks, const FeatureContext& ctx, bool use_classifier) {
  for (auto& t : tasks) {
    if (!t.valid) continue;
    if (!use_classifier) {
      t.accepted = true;
      continue;
    }
    auto p = task_clf_->predict(example(ctx, task_candidate_text(t.task), false));
    t.score = p.score;
    t.accepted = p.label;
  }
}

void Assistant::act(world::WorldState& w, HourDecision& d, rec::CollabType type) {
  for (auto& ic : d.intentions) {
    if (!ic.presented) continue;
    for (auto& t : ic.tasks) {
      if (!t.accepted) continue;
      try {
        if (type == rec::CollabType::PickPlace) {
          const auto& a = std::get<rec::PickPlaceAct>(t.task.act);
          world::apply_pick(w, world::Agent::Robot, a.pick_id);
          try {
            world::apply_place(w, world::Agent::Robot, a.pick_id, world::PlaceTarget::object(a.place_id));
          } catch (const WorldError&) {
            // Put it back where it came from so the gripper is free again.
            const auto* obj = w.scene.find(a.pick_id);
            world::apply_place(w, world::Agent::Robot, a.pick_id, world::PlaceTarget::in_room(obj->room));
            throw;
          }
        } else {
          world::record_offer(w, std::get<rec::OfferAct>(t.task.act).obj_name);
        }
        t.executed_ok = true;
      } catch (const WorldError& e) {
        t.executed_ok = false;
        t.error = e.what();
      }
    }
  }
}

void Assistant::update_traits(const HourInput& in, HourDecision& d) {
  auto& ints = seen_intentions_[in.persona];
  auto& tasks = seen_tasks_[in.persona];
  auto label = world::DayClock::slot_label(in.slot);
  if (d.chosen) ints.push_back(label + ": " + d.intentions[*d.chosen].intention.text);
  tasks.push_back(label + ": " + in.observation.text);
  auto window = static_cast<std::size_t>(cfg_.traits_window);
  auto tail = [&](const std::vector<std::string>& v) {
    return std::vector<std::string>(v.end() - static_cast<std::ptrdiff_t>(std::min(window, v.size())), v.end());
  };
  auto& prior = profiles_[in.persona];
  try {
    auto next = infer_traits(tail(ints), tail(tasks), prior, d.raw);
    next.last_updated = {in.day, in.slot};
    prior = next;
  } catch (const ParseError&) {
    d.warnings.push_back("traits inference did not parse; kept the previous profile");
  }
}

HourDecision Assistant::step(world::WorldState& w, const HourInput& in) {
  HourDecision d;
  d.day = in.day;
  d.hour_slot = in.slot;
  d.persona = in.persona;
  d.policy = std::string(to_string(cfg_.policy));
  d.observation = in.observation;

  auto query = g_.embed(in.observation.text);
  memory_.add({memory::Kind::Task, in.observation.text, in.day, in.slot, 0, query});
  d.context = context_for(in, query);
  auto seed = derive_seed(cfg_.seed, "robot/" + in.persona + "/" + std::to_string(in.day) + "/" + std::to_string(in.slot));

  try {
    switch (cfg_.policy) {
      case Policy::Oracle: {
        if (!in.true_intention) throw ValidationError("the oracle policy needs the true intention");
        IntentionCandidate c;
        c.intention.day = in.day;
        c.intention.hour_slot = in.slot;
        c.intention.time_label = d.context.time;
        c.intention.text = *in.true_intention;
        c.survived = c.presented = true;
        d.intentions.push_back(c);
        d.chosen = 0;
        break;
      }
      case Policy::IntentionAgnostic: {
        IntentionCandidate c;
        c.intention.day = in.day;
        c.intention.hour_slot = in.slot;
        c.intention.time_label = d.context.time;
        c.intention.text = kAgnosticPrefix + in.observation.text;
        c.survived = c.presented = true;
        d.intentions.push_back(c);
        break;
      }
      default: {
        for (auto& r : discover_intentions(in.observation, d.context, derive_seed(seed, "intentions"), d.raw)) {
          IntentionCandidate c;
          c.intention = std::move(r);
          d.intentions.push_back(std::move(c));
        }
        if (cfg_.policy == Policy::Random) {
          for (auto& c : d.intentions) c.survived = c.presented = true;
          d.chosen = 0;
        } else if (cfg_.policy == Policy::DirectPrompting) {
          d.intentions[0].survived = d.intentions[0].presented = true;
          d.chosen = 0;
        } else {
          score_intentions(d.intentions, d.context);
          std::optional<std::size_t> best;
          for (std::size_t i = 0; i < d.intentions.size(); ++i) {
            if (d.intentions[i].survived && (!best || d.intentions[i].score > d.intentions[*best].score)) best = i;
          }
          d.chosen = best;
          for (std::size_t i = 0; i < d.intentions.size(); ++i) {
            d.intentions[i].presented = d.intentions[i].survived && (!cfg_.cap_proposals || best == i);
          }
        }
      }
    }
    bool clf = uses_task_classifier(cfg_.policy);
    for (std::size_t i = 0; i < d.intentions.size(); ++i) {
      auto& ic = d.intentions[i];
      if (!ic.presented) continue;
      ic.tasks = discover_tasks(ic.intention.text, w.scene, in.type, d.context,
                                derive_seed(seed, "tasks/" + std::to_string(i)), d.raw);
      for (auto& t : ic.tasks) {
        t.task.day = in.day;
        t.task.hour_slot = in.slot;
      }
      filter_tasks(ic.tasks, d.context, clf);
    }
    std::vector<rec::Act> planned;
    for (auto& ic : d.intentions) {
      for (auto& t : ic.tasks) {
        if (!ic.presented || !t.accepted) continue;
        if (std::find(planned.begin(), planned.end(), t.task.act) != planned.end()) {
          t.accepted = false;
          t.error = "same action as an earlier accepted task";
        } else {
          planned.push_back(t.task.act);
        }
      }
    }
  } catch (const CacheMissError&) {
    throw;
  } catch (const EpisodeError& e) {
    d.failed = true;
    d.error = std::string(e.what()) + (e.raw().empty() ? "" : "\n" + e.raw());
  } catch (const GatewayError& e) {
    d.failed = true;
    d.error = e.what();
  }
  if (d.failed) {
    for (auto& ic : d.intentions) ic.presented = false;
  }

  act(w, d, in.type);
  if (d.chosen && !d.failed) {
    const auto& text = d.intentions[*d.chosen].intention.text;
    memory_.add({memory::Kind::Intention, text, in.day, in.slot, std::nullopt, g_.embed(text)});
  }
  if (!cfg_.ablation.no_traits) {
    try {
      update_traits(in, d);
    } catch (const CacheMissError&) {
      throw;
    } catch (const GatewayError& e) {
      d.warnings.push_back(std::string("traits inference failed: ") + e.what());
    }
  }
  return d;
}

LearningUpdate Assistant::learn_from_feedback(const std::vector<HourDecision>& day,
                                              const std::vector<std::vector<bool>>& labels) {
  if (day.size() != labels.size()) {
    throw ValidationError("feedback covers " + std::to_string(labels.size()) + " hours, expected " +
                          std::to_string(day.size()));
  }
  LearningUpdate up;
  if (!learns()) return up;
  for (std::size_t h = 0; h < day.size(); ++h) {
    const auto& d = day[h];
    if (d.failed) continue;
    auto acc = labels_for_accepted(d, labels[h]);
    std::size_t k = 0;
    for (const auto& ic : d.intentions) {
      if (!ic.presented) continue;
      bool any_yes = false;
      for (const auto& t : ic.tasks) {
        if (!t.accepted) continue;
        bool y = acc[k++];
        any_yes = any_yes || y;
        up.task_examples.push_back(example(d.context, task_candidate_text(t.task), y));
      }
      if (uses_intention_classifier(cfg_.policy)) {
        up.intention_examples.push_back(example(d.context, ic.intention.text, any_yes));
      }
    }
  }
  intention_pool_.insert(intention_pool_.end(), up.intention_examples.begin(), up.intention_examples.end());
  task_pool_.insert(task_pool_.end(), up.task_examples.begin(), up.task_examples.end());
  if (!intention_pool_.empty()) intention_clf_->train(intention_pool_);
  if (!task_pool_.empty()) task_clf_->train(task_pool_);
  return up;
}

}  // namespace hrc::assist
