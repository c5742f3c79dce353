#include <doctest.h>

#include <algorithm>

#include "hrc/assets.hpp"
#include "hrc/assistant.hpp"
#include "hrc/error.hpp"
#include "hrc/human.hpp"
#include "hrc/scenario.hpp"

using namespace hrc;
using namespace hrc::assist;

namespace {

const scenario::Catalog& noiseless() {
  static const scenario::Catalog c = [] {
    auto j = Json::parse(assets::get("scenario/catalog.json"));
    j["epsilon"] = 0.0;
    return scenario::Catalog::from_json(j);
  }();
  return c;
}

struct Rig {
  std::shared_ptr<gw::MockChat> mock = std::make_shared<gw::MockChat>();
  gw::Gateway g;
  Rig() : g(gw::GatewayConfig{}, mock) { scenario::install_mock(*mock, noiseless()); }
};

// Plays the scripted human's first task for (day, slot) and returns the robot input.
struct Hour {
  human::HumanTurn turn;
  HourInput input;
};

Hour first_task(world::WorldState& w, int day, int slot, rec::CollabType type = rec::CollabType::PickPlace) {
  human::ScriptedHuman h(noiseless(), "p1");
  Hour out;
  out.turn = h.propose({day, slot, type, &w.scene, 7});
  auto events = human::execute_tasks(w, {out.turn.tasks.front()});
  out.input = {day, slot, "p1", type, observe(w.scene, out.turn.tasks.front(), events, type), out.turn.intention.text};
  return out;
}

AssistantConfig with_policy(Policy p) {
  AssistantConfig c;
  c.policy = p;
  return c;
}

std::vector<rec::Act> accepted_acts(const HourDecision& d) {
  std::vector<rec::Act> out;
  for (const auto& t : d.accepted()) out.push_back(t.act);
  return out;
}

}  // namespace

TEST_CASE("policy names round trip") {
  for (const auto& n : policy_names()) CHECK(to_string(policy_from_string(n)) == n);
  CHECK_THROWS_AS(policy_from_string("telepathy"), ValidationError);
}

TEST_CASE("type 1 observation names the objects, room and hint") {
  auto w = world::WorldState(world::bundled_scene("replica_1"));
  auto h = first_task(w, 1, 0);
  const auto& act = std::get<rec::PickPlaceAct>(h.turn.tasks.front().act);
  const auto& obs = h.input.observation;
  CHECK(obs.text.find(act.pick_name) != std::string::npos);
  CHECK(obs.text.find(act.place_name) != std::string::npos);
  CHECK(obs.text.find("Description: ") != std::string::npos);
  REQUIRE(obs.text_hint);
  auto thought = h.turn.tasks.front().thought;
  if (!thought.empty() && thought.back() == '.') thought.pop_back();
  CHECK(*obs.text_hint == thought);
  CHECK(ObservationRecord::from_json(obs.to_json()).text == obs.text);
}

TEST_CASE("type 2 observation carries no hint") {
  auto w = world::WorldState(world::bundled_scene("replica_1"));
  auto h = first_task(w, 1, 0, rec::CollabType::Motion);
  CHECK_FALSE(h.input.observation.text_hint);
  CHECK(h.input.observation.text.find("Description") == std::string::npos);
  CHECK(h.input.observation.text.find("The human did '") == 0);
}

TEST_CASE("cold-start main policy keeps all five imagined intentions") {
  Rig rig;
  Assistant a(rig.g, with_policy(Policy::Main));
  auto w = world::WorldState(world::bundled_scene("replica_1"));
  auto h = first_task(w, 1, 0);
  auto d = a.step(w, h.input);
  REQUIRE_FALSE(d.failed);
  CHECK(d.intentions.size() == 5);
  for (const auto& ic : d.intentions) {
    CHECK(ic.survived);
    CHECK(ic.presented);
    CHECK(ic.score == doctest::Approx(0.5));
  }
  // The true intention is among the candidates and its tasks include the gt tasks.
  auto it = std::find_if(d.intentions.begin(), d.intentions.end(),
                         [&](const auto& ic) { return ic.intention.text == h.turn.intention.text; });
  REQUIRE(it != d.intentions.end());
  for (const auto& gt : h.turn.tasks) {
    CHECK(std::any_of(it->tasks.begin(), it->tasks.end(), [&](const auto& t) { return t.task.act == gt.act; }));
  }
}

TEST_CASE("accepted tasks never repeat an action within an hour") {
  Rig rig;
  Assistant a(rig.g, with_policy(Policy::Random));
  auto w = world::WorldState(world::bundled_scene("replica_1"));
  for (int slot = 0; slot < 4; ++slot) {
    auto h = first_task(w, 1, slot);
    auto d = a.step(w, h.input);
    auto acts = accepted_acts(d);
    for (std::size_t i = 0; i < acts.size(); ++i) {
      for (std::size_t j = i + 1; j < acts.size(); ++j) CHECK_FALSE(acts[i] == acts[j]);
    }
    world::advance_hour(w);
  }
}

TEST_CASE("random policy accepts every valid candidate and never learns") {
  Rig rig;
  Assistant a(rig.g, with_policy(Policy::Random));
  CHECK_FALSE(a.learns());
  auto w = world::WorldState(world::bundled_scene("replica_1"));
  auto h = first_task(w, 1, 0);
  auto d = a.step(w, h.input);
  std::vector<rec::Act> seen;
  for (const auto& ic : d.intentions) {
    CHECK(ic.presented);
    for (const auto& t : ic.tasks) {
      bool dup = std::find(seen.begin(), seen.end(), t.task.act) != seen.end();
      if (t.valid && !dup) CHECK(t.accepted);
      if (t.valid) seen.push_back(t.task.act);
      CHECK(t.score == doctest::Approx(0.5));  // no classifier was consulted
    }
  }
  std::vector<bool> labels(d.carried_out().size(), true);
  auto up = a.learn_from_feedback({d}, {labels});
  CHECK(up.task_examples.empty());
  CHECK(up.intention_examples.empty());
  CHECK_FALSE(a.task_classifier().trained());
}

TEST_CASE("oracle policy is handed the true intention") {
  Rig rig;
  Assistant a(rig.g, with_policy(Policy::Oracle));
  auto w = world::WorldState(world::bundled_scene("replica_1"));
  auto h = first_task(w, 1, 3);
  auto d = a.step(w, h.input);
  REQUIRE(d.intentions.size() == 1);
  CHECK(d.intentions[0].intention.text == h.turn.intention.text);
  CHECK(d.chosen == std::optional<std::size_t>(0));

  auto missing = h.input;
  missing.true_intention.reset();
  auto w2 = world::WorldState(world::bundled_scene("replica_1"));
  CHECK_THROWS_AS(a.step(w2, missing), ValidationError);
}

TEST_CASE("intention-agnostic policy imagines tasks from the observation alone") {
  Rig rig;
  Assistant a(rig.g, with_policy(Policy::IntentionAgnostic));
  auto w = world::WorldState(world::bundled_scene("replica_1"));
  auto h = first_task(w, 1, 0);
  auto d = a.step(w, h.input);
  REQUIRE(d.intentions.size() == 1);
  CHECK(d.intentions[0].intention.text.find(h.input.observation.text) != std::string::npos);
  CHECK_FALSE(d.chosen);
  CHECK_FALSE(d.intentions[0].tasks.empty());
}

TEST_CASE("human-and-context-agnostic classifiers see only time and candidate") {
  Rig rig;
  Assistant hca(rig.g, with_policy(Policy::ContextAgnostic));
  Assistant main(rig.g, with_policy(Policy::Main));
  for (auto* c : {&hca.intention_classifier(), &hca.task_classifier()}) {
    auto f = c->state()["features"];
    CHECK_FALSE(f["profile"].get<bool>());
    CHECK_FALSE(f["big5"].get<bool>());
    CHECK_FALSE(f["history"].get<bool>());
  }
  CHECK(main.intention_classifier().state()["features"]["history"].get<bool>());
}

TEST_CASE("when the classifier rejects every intention the best one still survives") {
  Rig rig;
  Assistant a(rig.g, with_policy(Policy::Main));
  std::vector<classify::ClassifierExample> neg;
  for (int i = 0; i < 12; ++i) {
    classify::ClassifierExample e;
    e.hour_slot = i;
    e.current_time = world::DayClock::slot_label(i);
    e.candidate = "Intention number " + std::to_string(i);
    e.label = false;
    neg.push_back(e);
  }
  a.intention_classifier().train(neg);
  auto w = world::WorldState(world::bundled_scene("replica_1"));
  auto h = first_task(w, 1, 0);
  auto d = a.step(w, h.input);
  auto survivors = std::count_if(d.intentions.begin(), d.intentions.end(), [](const auto& c) { return c.survived; });
  CHECK(survivors == 1);
  REQUIRE(d.chosen);
  double best = 0;
  for (const auto& c : d.intentions) best = std::max(best, c.score);
  CHECK(d.intentions[*d.chosen].score == best);
  CHECK(d.intentions[*d.chosen].survived);
}

TEST_CASE("yes/no feedback on two tasks yields two task examples") {
  Rig rig;
  Assistant a(rig.g, with_policy(Policy::Main));
  HourDecision d;
  d.hour_slot = 2;
  d.context.hour_slot = 2;
  IntentionCandidate ic;
  ic.intention.text = "Gym weights";
  ic.survived = ic.presented = true;
  for (const char* thought : {"Move the fork to the bed for gym weights.", "Move the toy to the desk for chess."}) {
    TaskCandidate t;
    t.task.thought = thought;
    t.task.act = rec::PickPlaceAct{1, "Fork", 2, "Bed"};
    t.accepted = true;
    t.executed_ok = true;
    ic.tasks.push_back(t);
  }
  d.intentions.push_back(ic);
  auto up = a.learn_from_feedback({d}, {{true, false}});
  REQUIRE(up.task_examples.size() == 2);
  CHECK(up.task_examples[0].label);
  CHECK_FALSE(up.task_examples[1].label);
  CHECK(up.task_examples[0].candidate == "Move the fork to the bed for gym weights");
  CHECK(up.task_examples[0].hour_slot == 2);
  REQUIRE(up.intention_examples.size() == 1);
  CHECK(up.intention_examples[0].label);
  CHECK(a.task_classifier().trained());

  CHECK_THROWS_AS(a.learn_from_feedback({d}, {}), ValidationError);
  CHECK_THROWS_AS(a.learn_from_feedback({d}, {{true}}), ValidationError);
}

TEST_CASE("failed executions are not shown for feedback and count as no") {
  HourDecision d;
  IntentionCandidate ic;
  ic.presented = true;
  for (int i = 0; i < 3; ++i) {
    TaskCandidate t;
    t.task.thought = "task " + std::to_string(i);
    t.accepted = true;
    t.executed_ok = i != 1;
    ic.tasks.push_back(t);
  }
  TaskCandidate rejected;
  rejected.accepted = false;
  ic.tasks.push_back(rejected);
  d.intentions.push_back(ic);
  CHECK(d.accepted().size() == 3);
  REQUIRE(d.carried_out().size() == 2);
  CHECK(d.carried_out()[1].thought == "task 2");
  CHECK(labels_for_accepted(d, {true, true}) == std::vector<bool>{true, false, true});
  CHECK_THROWS_AS(labels_for_accepted(d, {true}), ValidationError);

  auto back = HourDecision::from_json(d.to_json());
  CHECK(back.accepted().size() == 3);
  CHECK(back.carried_out().size() == 2);
}

TEST_CASE("a generation failure marks the hour failed without acting") {
  auto mock = std::make_shared<gw::MockChat>();
  gw::Gateway g(gw::GatewayConfig{}, mock);  // no responders at all
  Assistant a(g, with_policy(Policy::Main));
  auto w = world::WorldState(world::bundled_scene("replica_1"));
  auto h = first_task(w, 1, 0);
  auto snapshot = w;
  auto d = a.step(w, h.input);
  CHECK(d.failed);
  CHECK_FALSE(d.error.empty());
  CHECK(d.accepted().empty());
  CHECK(w.scene == snapshot.scene);
}

TEST_CASE("inferred profile appears after the first hour and feeds the next context") {
  Rig rig;
  Assistant a(rig.g, with_policy(Policy::Main));
  auto w = world::WorldState(world::bundled_scene("replica_1"));
  auto h0 = first_task(w, 1, 0);
  auto d0 = a.step(w, h0.input);
  CHECK(d0.context.profile.empty());
  const auto* p = a.profile("p1");
  REQUIRE(p);
  CHECK(p->known);
  auto after_first = p->profile_text;
  world::advance_hour(w);
  auto h1 = first_task(w, 1, 1);
  auto d1 = a.step(w, h1.input);
  CHECK(d1.context.profile == after_first);
  CHECK_FALSE(d1.context.prev_intentions.empty());

  AssistantConfig blind = with_policy(Policy::Main);
  blind.ablation.no_traits = true;
  Assistant b(rig.g, blind);
  auto w2 = world::WorldState(world::bundled_scene("replica_1"));
  b.step(w2, first_task(w2, 1, 0).input);
  CHECK(b.profile("p1") == nullptr);
}

TEST_CASE("assistant config validates and round trips") {
  AssistantConfig c;
  c.policy = Policy::ContextAgnostic;
  c.cap_proposals = true;
  c.traits_window = 6;
  auto back = AssistantConfig::from_json(c.to_json());
  CHECK(back.policy == Policy::ContextAgnostic);
  CHECK(back.cap_proposals);
  CHECK(back.traits_window == 6);
  c.classifier = "oracle-magic";
  CHECK_THROWS_AS(c.validate(), ValidationError);
}
