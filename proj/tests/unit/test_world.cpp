#include <doctest.h>

#include <algorithm>
#include <random>

#include "hrc/error.hpp"
#include "hrc/world.hpp"

using namespace hrc;
using namespace hrc::world;

namespace {

Json small_doc() {
  return Json::parse(R"({
    "name": "flat",
    "rooms": ["kitchen", "dining room", "living room"],
    "objects": [
      {"id": 3, "name": "Blue Mug", "category": "dining ware", "class": "mug", "room": "kitchen", "supported": false},
      {"id": 1, "name": "Kitchen Counter", "category": "support furniture", "class": "counter", "room": "kitchen", "supported": false},
      {"id": 2, "name": "Dining Table", "category": "support furniture", "class": "table", "room": "dining room", "supported": false},
      {"id": 4, "name": "Sofa", "category": "seating furniture", "room": "living room", "supported": false},
      {"id": 5, "name": "Wall Clock", "category": "decor", "room": "living room", "supported": true},
      {"id": 6, "name": "Vase", "category": "decor", "room": "living room", "supported": false}
    ]})");
}

}  // namespace

TEST_CASE("dynamic flag follows the category tables and the supported flag") {
  for (const auto& cat : dynamic_categories()) {
    for (bool supported : {false, true}) {
      Json doc = small_doc();
      doc["objects"].push_back({{"id", 99}, {"name", "x"}, {"category", cat},
                                {"room", "kitchen"}, {"supported", supported}});
      auto s = load_scene(doc);
      CHECK(s.find(99)->dynamic == !supported);
    }
  }
  for (const auto& cat : static_categories()) {
    for (bool supported : {false, true}) {
      Json doc = small_doc();
      doc["objects"].push_back({{"id", 99}, {"name", "x"}, {"category", cat},
                                {"room", "kitchen"}, {"supported", supported}});
      CHECK_FALSE(load_scene(doc).find(99)->dynamic);
    }
  }
  CHECK(dynamic_categories().size() == 14);
  CHECK(static_categories().size() == 18);
}

TEST_CASE("decor unsupported is dynamic and mirror is static") {
  auto s = load_scene(small_doc());
  CHECK(s.find(6)->dynamic);
  Json doc = small_doc();
  doc["objects"].push_back({{"id", 7}, {"name", "Hall Mirror"}, {"category", "mirror"},
                            {"room", "kitchen"}, {"supported", false}});
  CHECK_FALSE(load_scene(doc).find(7)->dynamic);
}

TEST_CASE("load errors name the offending object") {
  Json dup = small_doc();
  dup["objects"][0]["id"] = 1;
  CHECK_THROWS_WITH_AS(load_scene(dup), doctest::Contains("duplicate object id 1"), LoadError);

  Json unknown = small_doc();
  unknown["objects"][0]["category"] = "spaceship";
  CHECK_THROWS_WITH_AS(load_scene(unknown), doctest::Contains("Blue Mug"), LoadError);

  Json room = small_doc();
  room["objects"][0]["room"] = "attic";
  CHECK_THROWS_WITH_AS(load_scene(room), doctest::Contains("attic"), LoadError);

  Json empty = small_doc();
  empty["objects"] = Json::array();
  CHECK_THROWS_AS(load_scene(empty), LoadError);

  Json nosupport = small_doc();
  nosupport["objects"][0].erase("supported");
  CHECK_THROWS_WITH_AS(load_scene(nosupport), doctest::Contains("supported"), LoadError);
}

TEST_CASE("mapping summary format") {
  Json doc = Json::parse(R"({"name": "b", "rooms": ["main bedroom", "hall"], "objects": [
    {"id": 110, "name": "Lamp Shade", "category": "decor", "room": "hall", "supported": false},
    {"id": 109, "name": "Nolan Upholstered King Bed", "category": "sleeping furniture", "room": "main bedroom", "supported": false}]})");
  auto s = load_scene(doc);
  auto m = mapping_summary(s);
  CHECK(m.find("'Nolan Upholstered King Bed': [109, 'main bedroom']") != std::string::npos);
  // Two objects: exactly two entries, ascending id.
  std::string expected = "{" + py_quote("Nolan Upholstered King Bed") + ": [109, " +
                         py_quote("main bedroom") + "], " + py_quote("Lamp Shade") + ": [110, " +
                         py_quote("hall") + "]}";
  CHECK(m == expected);
  CHECK(mapping_summary(s, MappingFilter::StaticOnly) ==
        "{'Nolan Upholstered King Bed': [109, 'main bedroom']}");
  CHECK(py_quote("Kid's Chair") == "\"Kid's Chair\"");
}

TEST_CASE("pick and place transitions") {
  WorldState w(load_scene(small_doc()));
  apply_pick(w, Agent::Robot, 3);
  CHECK(w.scene.find(3)->holder == Holder::RobotGripper);
  CHECK_THROWS_AS(apply_pick(w, Agent::Robot, 6), WorldError);  // hand occupied
  CHECK_THROWS_AS(apply_pick(w, Agent::Human, 4), WorldError);  // static sofa
  CHECK_THROWS_AS(apply_pick(w, Agent::Human, 5), WorldError);  // supported decor
  CHECK_THROWS_AS(apply_pick(w, Agent::Human, 3), WorldError);  // held by robot
  apply_place(w, Agent::Robot, 3, PlaceTarget::object(2));
  CHECK(w.scene.find(3)->room == "dining room");
  CHECK(w.scene.find(3)->holder == Holder::Surface);
  CHECK_THROWS_AS(apply_place(w, Agent::Robot, 3, PlaceTarget::object(2)), WorldError);
  apply_pick(w, Agent::Human, 3);
  CHECK_THROWS_AS(apply_place(w, Agent::Human, 3, PlaceTarget::object(999)), WorldError);
  CHECK_THROWS_AS(apply_place(w, Agent::Human, 3, PlaceTarget::in_room("attic")), WorldError);
  // Placing on a dynamic object inherits that object's room.
  apply_place(w, Agent::Human, 3, PlaceTarget::object(6));
  CHECK(w.scene.find(3)->room == "living room");
  CHECK(w.events.size() == 4);
}

TEST_CASE("random pick/place sequences conserve ids and match a hand simulation") {
  std::mt19937 rng(11);
  auto base = load_scene(small_doc());
  for (int trial = 0; trial < 200; ++trial) {
    WorldState w(base);
    // Independent model: id -> (room, holder)
    std::map<int, std::pair<std::string, int>> model;
    for (const auto& o : base.objects) model[o.id] = {o.room, 0};
    int hands[2] = {-1, -1};
    for (int step = 0; step < 20; ++step) {
      int agent = static_cast<int>(rng() % 2);
      auto a = agent == 0 ? Agent::Human : Agent::Robot;
      int obj = base.objects[rng() % base.objects.size()].id;
      bool movable = base.find(obj)->dynamic;
      if (rng() % 2) {
        bool ok = movable && hands[agent] < 0 && model[obj].second == 0;
        if (ok) {
          apply_pick(w, a, obj);
          hands[agent] = obj;
          model[obj].second = agent + 1;
        } else {
          CHECK_THROWS_AS(apply_pick(w, a, obj), WorldError);
        }
      } else {
        int held = hands[agent];
        bool ok = held >= 0 && obj != held && model[obj].second == 0;
        if (held >= 0 && ok) {
          apply_place(w, a, held, PlaceTarget::object(obj));
          model[held] = {model[obj].first, 0};
          hands[agent] = -1;
        } else if (held >= 0) {
          CHECK_THROWS_AS(apply_place(w, a, held, PlaceTarget::object(obj)), WorldError);
        }
      }
    }
    REQUIRE(w.scene.objects.size() == base.objects.size());
    for (const auto& o : w.scene.objects) {
      CHECK(model.count(o.id) == 1);
      CHECK(o.room == model[o.id].first);
      CHECK(static_cast<int>(o.holder) == model[o.id].second);
    }
  }
}

TEST_CASE("pick then place back restores the scene") {
  WorldState w(load_scene(small_doc()));
  auto before = w.scene;
  apply_pick(w, Agent::Human, 3);
  apply_place(w, Agent::Human, 3, PlaceTarget::in_room("kitchen"));
  CHECK(w.scene == before);
}

TEST_CASE("clock arithmetic") {
  WorldState w(load_scene(small_doc()));
  w.clock = {1, 11};
  advance_hour(w);
  CHECK(w.clock == DayClock{2, 0});
  w.clock = {1, 0};
  advance_hour(w);
  CHECK(w.clock == DayClock{1, 1});
  for (int n = 0; n < 200; ++n) {
    WorldState v(w.scene);
    v.clock = {3, 0};
    for (int i = 0; i < n; ++i) advance_hour(v);
    CHECK(v.clock.slot == n % 12);
    CHECK(v.clock.day == 3 + n / 12);
  }
  CHECK(DayClock::slot_label(0) == "9 am");
  CHECK(DayClock::slot_label(3) == "12 pm");
  CHECK(DayClock::slot_label(11) == "8 pm");
}

TEST_CASE("bundled replica scenes respect the size ranges") {
  auto names = bundled_scene_names();
  REQUIRE(names.size() == 5);
  for (const auto& n : names) {
    auto s = bundled_scene(n);
    CHECK(s.rooms.size() >= 4);
    CHECK(s.rooms.size() <= 11);
    CHECK(s.static_count() >= 51);
    CHECK(s.static_count() <= 140);
    CHECK(s.dynamic_count() >= 33);
    CHECK(s.dynamic_count() <= 94);
  }
}

TEST_CASE("world json round trip keeps state") {
  WorldState w(load_scene(small_doc()));
  apply_pick(w, Agent::Human, 3);
  advance_hour(w);
  auto back = world_from_json(world_to_json(w));
  CHECK(back.scene == w.scene);
  CHECK(back.clock == w.clock);
  CHECK(back.events == w.events);
}
