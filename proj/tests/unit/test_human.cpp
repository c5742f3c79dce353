#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hrc/assets.hpp"
#include "hrc/error.hpp"
#include "hrc/human.hpp"

using namespace hrc;
using namespace hrc::human;

namespace {

// Catalog copy without theme noise so every hour follows the base table.
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
  explicit Rig(const scenario::Catalog& cat = noiseless()) : g(gw::GatewayConfig{}, mock) {
    scenario::install_mock(*mock, cat);
  }
};

HourContext ctx_for(const world::Scene& s, int day, int slot, rec::CollabType type, std::uint64_t seed = 1) {
  return {day, slot, type, &s, seed};
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  auto p = std::filesystem::temp_directory_path() / ("hrc_human_" + name);
  std::ofstream(p) << body;
  return p;
}

std::string full_day(int day, int skip_slot = -1) {
  std::string out;
  for (int s = 0; s < 12; ++s) {
    if (s == skip_slot) continue;
    out += Json{{"day", day}, {"hour", world::DayClock::slot_label(s)}, {"intention", "Tidy up round " + std::to_string(s)}}.dump() + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("mock persona proposes its scheduled 9 am theme") {
  Rig rig;
  auto scene = world::bundled_scene("replica_1");
  for (const auto& p : noiseless().personas()) {
    LlmHuman h(rig.g, p.record());
    auto turn = h.propose(ctx_for(scene, 1, 0, rec::CollabType::PickPlace));
    const auto& fam = noiseless().families()[noiseless().family_index(p.id, 0)];
    CHECK(turn.intention.text == fam.get(scenario::Variant::Base).intention);
    CHECK(turn.intention.time_label == "9 am");
    CHECK(turn.tasks.size() == 3);
    CHECK(validate_tasks(turn.tasks, rec::CollabType::PickPlace, scene).empty());
    CHECK(turn.raw.size() == 4);  // intention, tasks, two reflections
  }
}

TEST_CASE("type-2 proposals carry five motions at fixed objects with in-hand items") {
  Rig rig;
  auto scene = world::bundled_scene("replica_4");
  LlmHuman h(rig.g, noiseless().personas()[1].record());
  auto turn = h.propose(ctx_for(scene, 1, 4, rec::CollabType::Motion));
  REQUIRE(turn.tasks.size() == 5);
  for (const auto& t : turn.tasks) {
    const auto& m = std::get<rec::MotionAct>(t.act);
    CHECK_FALSE(scene.find(m.inter_obj_id)->dynamic);
    CHECK_FALSE(m.inhand_obj_name.empty());
  }
  bool listed_motions = false;
  for (const auto& r : turn.raw) {
    if (r.template_id == "task_proposal") listed_motions = true;
  }
  CHECK(listed_motions);
}

TEST_CASE("validation rejects unknown ids, wrong kinds and wrong counts") {
  auto scene = world::bundled_scene("replica_1");
  auto b = scenario::Binder::from_scene(scene, world::MappingFilter::All);
  auto tasks = scenario::bind_theme(noiseless().families()[0].get(scenario::Variant::Base), rec::CollabType::PickPlace, b);
  CHECK(validate_tasks(tasks, rec::CollabType::PickPlace, scene).empty());
  auto bad = tasks;
  std::get<rec::PickPlaceAct>(bad[0].act).pick_id = 424242;
  CHECK(validate_tasks(bad, rec::CollabType::PickPlace, scene).size() == 1);
  bad = tasks;
  std::swap(std::get<rec::PickPlaceAct>(bad[0].act).pick_id, std::get<rec::PickPlaceAct>(bad[0].act).place_id);
  std::swap(std::get<rec::PickPlaceAct>(bad[0].act).pick_name, std::get<rec::PickPlaceAct>(bad[0].act).place_name);
  CHECK(validate_tasks(bad, rec::CollabType::PickPlace, scene).size() == 2);
  bad.pop_back();
  CHECK(validate_tasks(bad, rec::CollabType::PickPlace, scene).size() == 3);
  CHECK_FALSE(validate_tasks(tasks, rec::CollabType::Motion, scene).empty());
}

TEST_CASE("world reflection repairs a planted id so the hour validates") {
  Rig rig;
  auto scene = world::bundled_scene("replica_1");
  const auto& p = noiseless().personas()[0];
  const auto& th = noiseless().families()[noiseless().family_index(p.id, 2)].get(scenario::Variant::Base);
  auto tasks = scenario::bind_theme(th, rec::CollabType::PickPlace, scenario::Binder::from_scene(scene, world::MappingFilter::All));
  auto planted = tasks;
  std::get<rec::PickPlaceAct>(planted[2].act).place_id = 777777;
  rig.mock->add_template_fixture("task_proposal",
                                 "Time: 11 am\nIntention: " + th.intention + "\nTasks:\n" + rec::render_tasks(planted));
  LlmHuman h(rig.g, p.record());
  auto turn = h.propose(ctx_for(scene, 1, 2, rec::CollabType::PickPlace));
  CHECK(std::get<rec::PickPlaceAct>(turn.tasks[2].act).place_id == std::get<rec::PickPlaceAct>(tasks[2].act).place_id);
}

TEST_CASE("unparsable task output exhausts the retry budget") {
  Rig rig;
  rig.mock->add_template_fixture("task_proposal", "I would rather not.");
  auto scene = world::bundled_scene("replica_1");
  LlmHuman h(rig.g, noiseless().personas()[0].record());
  HumanTurn log;
  rec::IntentionRecord i;
  i.text = "Sunrise stretching";
  try {
    h.decompose(i, ctx_for(scene, 1, 0, rec::CollabType::PickPlace), log);
    FAIL("expected an episode error");
  } catch (const EpisodeError& e) {
    CHECK(std::string(e.what()).find("3 attempts") != std::string::npos);
    CHECK(e.raw().find("I would rather not.") != std::string::npos);
  }
  CHECK(log.raw.size() == 3);
}

TEST_CASE("intentions naming scene objects raise a soft warning") {
  auto scene = world::bundled_scene("replica_1");
  rec::IntentionRecord r;
  r.text = "Relax";
  CHECK_FALSE(intention_warning(r, scene));
  r.text = "Use the " + scene.objects.front().name + " for a while";
  CHECK(intention_warning(r, scene));
}

TEST_CASE("human memory resets every morning") {
  Rig rig;
  auto scene = world::bundled_scene("replica_1");
  LlmHuman h(rig.g, noiseless().personas()[2].record());
  h.start_day(1);
  for (int s = 0; s < 3; ++s) h.remember(h.propose(ctx_for(scene, 1, s, rec::CollabType::PickPlace)));
  CHECK(h.memory().visible_count(memory::Kind::Intention) == 3);
  CHECK(h.memory().visible_count(memory::Kind::Task) == 9);
  h.start_day(2);
  CHECK(h.memory().visible_count(memory::Kind::Intention) == 0);
  CHECK(h.memory().visible_count(memory::Kind::Task) == 0);
}

TEST_CASE("feedback: empty proposals skip the model, matches say yes, strangers say no") {
  Rig rig;
  auto scene = world::bundled_scene("replica_2");
  LlmHuman h(rig.g, noiseless().personas()[0].record());
  auto turn = h.propose(ctx_for(scene, 1, 5, rec::CollabType::PickPlace));
  auto before = rig.mock->calls();
  CHECK(h.feedback(turn.intention, turn.tasks, {}, nullptr).labels.empty());
  CHECK(rig.mock->calls() == before);

  const auto& other = noiseless().families()[noiseless().family_index("p2", 11)].get(scenario::Variant::Distinct);
  auto stranger = scenario::bind_task(other.type1[2], scenario::Binder::from_scene(scene, world::MappingFilter::All));
  REQUIRE_FALSE(scenario::serves(noiseless(), stranger, turn.tasks));
  std::vector<RawCompletion> raw;
  auto fb = h.feedback(turn.intention, turn.tasks, {turn.tasks[1], stranger}, &raw);
  CHECK(fb.labels == std::vector<bool>{true, false});
  CHECK(raw.size() == 1);
}

TEST_CASE("feedback label-count mismatch retries then fails") {
  Rig rig;
  rig.mock->add_template_fixture("feedback", "Tasks: [yes]\nReasons_tasks:\n1. fine");
  auto scene = world::bundled_scene("replica_2");
  LlmHuman h(rig.g, noiseless().personas()[0].record());
  auto turn = h.propose(ctx_for(scene, 1, 0, rec::CollabType::PickPlace));
  CHECK_THROWS_AS(h.feedback(turn.intention, turn.tasks, {turn.tasks[0], turn.tasks[1]}, nullptr), EpisodeError);
}

TEST_CASE("execution moves objects for type 1 and logs motions for type 2") {
  auto scene = world::bundled_scene("replica_1");
  world::WorldState w(scene);
  auto b = scenario::Binder::from_scene(scene, world::MappingFilter::All);
  auto tasks = scenario::bind_theme(noiseless().families()[3].get(scenario::Variant::Base), rec::CollabType::PickPlace, b);
  auto events = execute_tasks(w, tasks);
  CHECK(events.size() == 6);
  const auto& a = std::get<rec::PickPlaceAct>(tasks[0].act);
  CHECK(w.scene.find(a.pick_id)->room == w.scene.find(a.place_id)->room);

  auto motions = scenario::bind_theme(noiseless().families()[3].get(scenario::Variant::Base), rec::CollabType::Motion,
                                      scenario::Binder::from_scene(scene, world::MappingFilter::StaticOnly));
  world::WorldState w2(scene);
  auto ev = execute_tasks(w2, motions);
  REQUIRE(ev.size() == 5);
  CHECK(ev[0].kind == world::Event::Kind::Motion);
  CHECK(ev[0].agent == world::Agent::Human);
  CHECK(ev[0].object_id == std::get<rec::MotionAct>(motions[0].act).inter_obj_id);

  world::WorldState w3(scene);
  CHECK(execute_tasks(w3, tasks) == events);
}

TEST_CASE("scripted human is seed-stable and agrees with the mock-driven human") {
  Rig rig(scenario::Catalog::bundled());
  auto scene = world::bundled_scene("replica_3");
  ScriptedHuman s(scenario::Catalog::bundled(), "p2");
  LlmHuman l(rig.g, scenario::Catalog::bundled().persona("p2")->record());
  for (int slot = 0; slot < 12; ++slot) {
    auto seed = scenario::human_seed(9, 2, slot, "p2");
    auto a = s.propose(ctx_for(scene, 2, slot, rec::CollabType::PickPlace, seed));
    auto b = s.propose(ctx_for(scene, 2, slot, rec::CollabType::PickPlace, seed));
    CHECK(a.tasks == b.tasks);
    auto c = l.propose(ctx_for(scene, 2, slot, rec::CollabType::PickPlace, seed));
    CHECK(a.intention.text == c.intention.text);
    CHECK(a.tasks.size() == c.tasks.size());
    for (std::size_t i = 0; i < a.tasks.size(); ++i) CHECK(a.tasks[i].act == c.tasks[i].act);
  }
  CHECK_THROWS_AS(ScriptedHuman(scenario::Catalog::bundled(), "p9"), ValidationError);
}

TEST_CASE("console task grammar binds names and class words") {
  auto scene = world::bundled_scene("replica_1");
  const world::ObjectInstance* mov = nullptr;
  const world::ObjectInstance* fixed = nullptr;
  for (const auto& o : scene.objects) {
    if (o.dynamic && !mov) mov = &o;
    if (!o.dynamic && !fixed) fixed = &o;
  }
  REQUIRE(mov);
  REQUIRE(fixed);
  auto t = parse_task_text(mov->name + " -> " + fixed->name, rec::CollabType::PickPlace, scene);
  CHECK(std::get<rec::PickPlaceAct>(t.act).pick_id == mov->id);
  CHECK(std::get<rec::PickPlaceAct>(t.act).place_id == fixed->id);
  auto m = parse_task_text("stretch at " + fixed->name + " with a towel", rec::CollabType::Motion, scene);
  CHECK(std::get<rec::MotionAct>(m.act) == rec::MotionAct{fixed->id, fixed->name, "a towel", "stretch"});
  CHECK_THROWS_AS(parse_task_text("no arrow here", rec::CollabType::PickPlace, scene), ValidationError);
  CHECK_THROWS_AS(parse_task_text(fixed->name + " -> " + mov->name, rec::CollabType::PickPlace, scene), ValidationError);
  CHECK_THROWS_AS(parse_task_text("zzqx -> " + fixed->name, rec::CollabType::PickPlace, scene), ValidationError);
}

TEST_CASE("offline schedules: line-numbered errors, missing hours and replay") {
  auto good = temp_file("good.jsonl", full_day(1) + full_day(2));
  auto entries = read_schedule(good);
  CHECK(entries.size() == 24);
  CHECK(entries[13].day == 2);
  CHECK(entries[13].slot == 1);

  auto missing = temp_file("missing.jsonl", full_day(1) + full_day(2, 6));
  try {
    read_schedule(missing);
    FAIL("expected a load error");
  } catch (const LoadError& e) {
    CHECK(std::string(e.what()).find("day 2, hour 3 pm") != std::string::npos);
  }
  auto broken = temp_file("broken.jsonl", full_day(1).substr(0, 40) + "\n{\"day\": 1, \"hour\": \"13 pm\", \"intention\": \"x\"}\n");
  CHECK_THROWS_WITH_AS(read_schedule(broken), doctest::Contains(":1:"), LoadError);
  auto badhour = temp_file("badhour.jsonl", "{\"day\": 1, \"hour\": \"11 pm\", \"intention\": \"x\"}\n");
  CHECK_THROWS_WITH_AS(read_schedule(badhour), doctest::Contains(":1: 'hour'"), LoadError);

  auto scene = world::bundled_scene("replica_1");
  std::string with_tasks;
  for (int s = 0; s < 12; ++s) {
    Json j{{"day", 1}, {"hour", s}, {"intention", "Make the kitchen tidy"}};
    if (s == 0) j["tasks"] = {"mug -> table", "book -> shelf", "towel -> sink"};
    with_tasks += j.dump() + "\n";
  }
  auto p = temp_file("tasks.jsonl", with_tasks);
  auto run_day = [&] {
    Rig rig;
    OfflineScheduleHuman h(read_schedule(p), std::make_unique<LlmHuman>(rig.g, noiseless().personas()[0].record()));
    CHECK(h.days() == 1);
    std::vector<HumanTurn> turns;
    for (int s = 0; s < 12; ++s) turns.push_back(h.propose(ctx_for(scene, 1, s, rec::CollabType::PickPlace)));
    return turns;
  };
  auto first = run_day();
  auto second = run_day();
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].tasks == second[i].tasks);
    CHECK(first[i].tasks.size() == 3);
  }
  CHECK(first[0].raw.empty());
  CHECK_FALSE(first[1].raw.empty());
}
