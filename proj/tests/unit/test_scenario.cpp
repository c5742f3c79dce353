#include <doctest.h>

#include <set>

#include "hrc/error.hpp"
#include "hrc/prompts.hpp"
#include "hrc/scenario.hpp"

using namespace hrc;
using namespace hrc::scenario;

namespace {

const Catalog& cat() { return Catalog::bundled(); }

std::string complete(gw::MockChat& m, const std::string& id, const prompts::Vars& vars,
                     std::optional<std::uint64_t> seed = std::nullopt) {
  gw::ChatRequest r;
  r.template_id = id;
  r.prompt = prompts::render(id, vars);
  r.seed = seed;
  return m.complete(r);
}

prompts::Vars proposal_vars(const std::string& intention, const world::Scene& s, rec::CollabType type) {
  auto filter = type == rec::CollabType::PickPlace ? world::MappingFilter::All : world::MappingFilter::StaticOnly;
  return {{"intention", intention},
          {"time", "9 am"},
          {"mapping", world::mapping_summary(s, filter)},
          {"big5", ""},
          {"profile", ""},
          {"prev_intentions", ""},
          {"prev_tasks", ""},
          {"task_count", std::to_string(rec::human_task_count(type))},
          {"task_rules", rec::task_rules(type, rec::Role::Human)},
          {"act_format", rec::act_format(type, rec::Role::Human)}};
}

}  // namespace

TEST_CASE("bundled catalog covers every persona and slot") {
  CHECK(cat().personas().size() == 3);
  CHECK(cat().families().size() == 36);
  CHECK(cat().epsilon() == doctest::Approx(0.2));
  std::set<std::string> intentions;
  for (const auto& f : cat().families()) {
    for (const auto& t : f.themes) {
      intentions.insert(t.intention);
      CHECK(t.type1.size() == 3);
      CHECK(t.type2.size() == 5);
    }
    CHECK(f.get(Variant::Base).type1[0].pick == f.get(Variant::Lookalike).type1[0].pick);
  }
  CHECK(intentions.size() == 108);
  CHECK_THROWS_AS(cat().family_index("nobody", 0), LoadError);
}

TEST_CASE("variant draw: epsilon zero is always base, otherwise close to 1 - epsilon") {
  for (std::uint64_t s = 0; s < 500; ++s) CHECK(draw_variant(0.0, s) == Variant::Base);
  int base = 0, look = 0;
  for (std::uint64_t s = 0; s < 20000; ++s) {
    auto v = draw_variant(0.2, s);
    base += v == Variant::Base;
    look += v == Variant::Lookalike;
  }
  CHECK(base / 20000.0 == doctest::Approx(0.8).epsilon(0.02));
  CHECK(look / 20000.0 == doctest::Approx(0.1).epsilon(0.1));
}

TEST_CASE("every theme binds in every bundled scene with class-faithful objects") {
  for (const auto& name : world::bundled_scene_names()) {
    auto scene = world::bundled_scene(name);
    auto all = Binder::from_scene(scene, world::MappingFilter::All);
    for (const auto& f : cat().families()) {
      for (const auto& th : f.themes) {
        for (const auto& t : bind_theme(th, rec::CollabType::PickPlace, all)) {
          const auto& a = std::get<rec::PickPlaceAct>(t.act);
          const auto* pick = scene.find(a.pick_id);
          const auto* place = scene.find(a.place_id);
          REQUIRE(pick);
          REQUIRE(place);
          CHECK(pick->dynamic);
          CHECK_FALSE(place->dynamic);
        }
        for (std::size_t i = 0; i < th.type1.size(); ++i) {
          auto t = bind_task(th.type1[i], all);
          CHECK(scene.find(std::get<rec::PickPlaceAct>(t.act).pick_id)->cls == th.type1[i].pick);
        }
        auto motions = bind_theme(th, rec::CollabType::Motion, Binder::from_scene(scene, world::MappingFilter::StaticOnly));
        CHECK(motions.size() == 5);
      }
    }
  }
}

TEST_CASE("scripted turns are seed-stable and persona-specific") {
  auto b = Binder::from_scene(world::bundled_scene("replica_1"), world::MappingFilter::All);
  auto a1 = scripted_turn(cat(), "p1", 3, 42, rec::CollabType::PickPlace, b);
  auto a2 = scripted_turn(cat(), "p1", 3, 42, rec::CollabType::PickPlace, b);
  CHECK(a1.intention == a2.intention);
  CHECK(a1.tasks == a2.tasks);
  auto other = scripted_turn(cat(), "p2", 3, 42, rec::CollabType::PickPlace, b);
  CHECK(other.intention.text != a1.intention.text);
  CHECK(a1.intention.time_label == "12 pm");
}

TEST_CASE("human-side mock outputs parse and follow the chosen theme") {
  gw::MockChat mock;
  install_mock(mock, cat());
  const auto& p = cat().personas()[0];
  auto seed = human_seed(7, 1, 0, p.id);
  auto text = complete(mock, "intention_proposal",
                       {{"time", "9 am"}, {"rooms", "kitchen"}, {"big5", p.big5.to_dict_text()},
                        {"profile", p.extended_profile}, {"prev_intentions", ""}, {"prev_tasks", ""}},
                       seed);
  auto intention = rec::parse_intention(text);
  auto ref = cat().find_intention(intention.text);
  REQUIRE(ref);
  CHECK(*ref == ThemeRef{cat().family_index(p.id, 0), draw_variant(cat().epsilon(), seed)});

  auto scene = world::bundled_scene("replica_2");
  for (auto type : {rec::CollabType::PickPlace, rec::CollabType::Motion}) {
    auto tasks = rec::parse_tasks(complete(mock, "task_proposal", proposal_vars(intention.text, scene, type)));
    CHECK(static_cast<int>(tasks.size()) == rec::human_task_count(type));
    for (const auto& t : tasks) {
      if (type == rec::CollabType::PickPlace) CHECK(std::holds_alternative<rec::PickPlaceAct>(t.act));
      if (type == rec::CollabType::Motion) CHECK(std::holds_alternative<rec::MotionAct>(t.act));
    }
  }
}

TEST_CASE("world reflection repairs a planted id and the profile pass leaves tasks alone") {
  gw::MockChat mock;
  install_mock(mock, cat());
  auto scene = world::bundled_scene("replica_1");
  const auto& th = cat().families()[0].get(Variant::Base);
  auto tasks = bind_theme(th, rec::CollabType::PickPlace, Binder::from_scene(scene, world::MappingFilter::All));
  auto good_id = std::get<rec::PickPlaceAct>(tasks[1].act).place_id;
  auto broken = tasks;
  std::get<rec::PickPlaceAct>(broken[1].act).place_id = 99999;

  auto vars = proposal_vars(th.intention, scene, rec::CollabType::PickPlace);
  vars["tasks"] = rec::render_tasks(broken);
  prompts::Vars world_vars;
  for (const auto& k : prompts::placeholders("reflect_world")) world_vars[k] = vars[k];
  auto fixed = rec::parse_reflection(complete(mock, "reflect_world", world_vars));
  REQUIRE(fixed.revised.size() == 3);
  CHECK(std::get<rec::PickPlaceAct>(fixed.revised[1].act).place_id == good_id);
  CHECK_FALSE(fixed.unchanged());

  prompts::Vars profile_vars;
  for (const auto& k : prompts::placeholders("reflect_profile")) profile_vars[k] = vars[k];
  auto kept = rec::parse_reflection(complete(mock, "reflect_profile", profile_vars));
  CHECK(kept.unchanged());
  CHECK(std::get<rec::PickPlaceAct>(kept.revised[1].act).place_id == 99999);
}

TEST_CASE("robot-side mock: discovery lists the true intention and feedback follows serves()") {
  gw::MockChat mock;
  install_mock(mock, cat());
  auto scene = world::bundled_scene("replica_3");
  auto binder = Binder::from_scene(scene, world::MappingFilter::All);
  const auto& fam = cat().families()[5];
  const auto& th = fam.get(Variant::Distinct);
  auto human = bind_theme(th, rec::CollabType::PickPlace, binder);
  const auto& a = std::get<rec::PickPlaceAct>(human[0].act);
  std::string obs = "The human picked up " + a.pick_name + " (id " + std::to_string(a.pick_id) +
                    ") and placed it on " + a.place_name + " (id " + std::to_string(a.place_id) +
                    ") in the kitchen. Description: " + human[0].thought + ".";
  auto text = complete(mock, "intention_discovery",
                       {{"observation", obs}, {"time", world::DayClock::slot_label(fam.hour)}, {"big5", ""},
                        {"profile", ""}, {"prev_intentions", ""}, {"prev_tasks", ""}},
                       11);
  auto cands = rec::parse_intention_candidates(text);
  REQUIRE(cands.size() == 5);
  int hits = 0;
  for (const auto& c : cands) hits += cat().find_intention(c.text) == ThemeRef{5, Variant::Distinct};
  CHECK(hits == 1);

  auto vars = proposal_vars(th.intention, scene, rec::CollabType::PickPlace);
  vars["task_rules"] = rec::task_rules(rec::CollabType::PickPlace, rec::Role::Robot);
  vars["act_format"] = rec::act_format(rec::CollabType::PickPlace, rec::Role::Robot);
  vars.erase("task_count");
  auto robot = rec::parse_tasks(complete(mock, "task_discovery", vars, 3));
  REQUIRE(robot.size() == 5);
  int serving = 0;
  for (const auto& r : robot) serving += serves(cat(), r, human);
  CHECK(serving == 3);

  auto fb = rec::parse_feedback(complete(mock, "feedback", {{"intention", th.intention},
                                                             {"human_tasks", rec::render_tasks(human)},
                                                             {"robot_tasks", rec::render_tasks(robot)}}));
  REQUIRE(fb.labels.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(fb.labels[i] == serves(cat(), robot[i], human));
}

TEST_CASE("type-2 offers serve by in-hand item") {
  auto b = Binder::from_scene(world::bundled_scene("replica_1"), world::MappingFilter::StaticOnly);
  const auto& th = cat().families()[0].get(Variant::Base);
  auto human = bind_theme(th, rec::CollabType::Motion, b);
  rec::TaskRecord offer;
  offer.act = rec::OfferAct{th.type2[2].inhand};
  CHECK(serves(cat(), offer, human));
  offer.act = rec::OfferAct{"definitely not an item"};
  CHECK_FALSE(serves(cat(), offer, human));
}
