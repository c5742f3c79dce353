#include <doctest.h>

#include "hrc/error.hpp"
#include "hrc/records.hpp"
#include "hrc/world.hpp"

using namespace hrc;
using namespace hrc::rec;

TEST_CASE("acts render and parse back to the same value") {
  Act pp = PickPlaceAct{12, "Blue Mug", 4, "Kitchen Counter"};
  CHECK(render_act(pp) ==
        "[type: 1, pick_obj_id: 12, pick_obj_name: Blue Mug, place_obj_id: 4, place_obj_name: "
        "Kitchen Counter]");
  auto body = [](const std::string& s) { return s.substr(1, s.size() - 2); };
  CHECK(parse_act(body(render_act(pp)), "") == pp);
  Act mo = MotionAct{7, "Yoga Mat", "water bottle", "stretch hamstrings"};
  CHECK(parse_act(body(render_act(mo)), "") == mo);
  Act of = OfferAct{"towel"};
  CHECK(parse_act(body(render_act(of)), "") == of);
}

TEST_CASE("act parsing tolerates quotes, spacing and commas inside names") {
  auto a = parse_act("type: 1, pick_obj_id:3 , pick_obj_name: 'Salt, Coarse', place_obj_id: 9, "
                     "place_obj_name: \"Shelf\"",
                     "");
  auto p = std::get<PickPlaceAct>(a);
  CHECK(p.pick_id == 3);
  CHECK(p.pick_name == "Salt, Coarse");
  CHECK(p.place_name == "Shelf");
  CHECK_THROWS_AS(parse_act("type: 1, pick_obj_id: x, pick_obj_name: a, place_obj_id: 2, place_obj_name: b", "raw"),
                  ParseError);
  CHECK_THROWS_AS(parse_act("type: 2, inter_obj_id: 1, inter_obj_name: Bed, inhand_obj_name: None, motion: sit", "raw"),
                  ParseError);
  CHECK_THROWS_AS(parse_act("nothing here", "raw"), ParseError);
}

TEST_CASE("task lists round-trip through render and parse") {
  std::vector<TaskRecord> tasks;
  for (int i = 0; i < 3; ++i) {
    TaskRecord t;
    t.task_index = i;
    t.thought = "Move item " + std::to_string(i) + " to the table";
    t.reason_human = "Tidy by nature";
    t.reason_intentions = "Follows breakfast";
    t.reason_tasks = "Continues the clean-up";
    t.act = PickPlaceAct{i, "Item " + std::to_string(i), 40, "Dining Table"};
    tasks.push_back(t);
  }
  auto text = "Time: 9 am\nIntention: Tidy up.\nTasks:\n" + render_tasks(tasks);
  auto back = parse_tasks(text);
  REQUIRE(back.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(back[i] == tasks[i]);
}

TEST_CASE("task parsing joins wrapped lines and strips markdown") {
  std::string text =
      "**Tasks:**\n"
      "1. Thought: Stretch near the bed.\n"
      "   Reason_human: Active. Act: [type: 2, inter_obj_id: 5, inter_obj_name: Bed,\n"
      "   inhand_obj_name: towel, motion: stretch]\n"
      "\n"
      "2) Thought: Drink. Act: [obj_name: water bottle]\n";
  auto t = parse_tasks(text);
  REQUIRE(t.size() == 2);
  CHECK(t[0].thought == "Stretch near the bed");
  CHECK(std::get<MotionAct>(t[0].act).inhand_obj_name == "towel");
  CHECK(std::get<OfferAct>(t[1].act).obj_name == "water bottle");
  CHECK_THROWS_AS(parse_tasks("Intention: x"), ParseError);
  CHECK_THROWS_AS(parse_tasks("Tasks:\n1. Thought: no act here"), ParseError);
}

TEST_CASE("intentions and candidate lists parse") {
  auto r = parse_intention(
      "Time: 10 am.\nIntention: Prepare a light snack.\nReason_human: Healthy.\nReason_intentions: "
      "After the jog.\nReason_tasks: none");
  CHECK(r.time_label == "10 am");
  CHECK(r.text == "Prepare a light snack");
  CHECK(r.reason_intentions == "After the jog.");
  CHECK(parse_intention(render_intention_block(r)).text == r.text);
  CHECK_THROWS_AS(parse_intention("Time: 9 am"), ParseError);

  auto c = parse_intention_candidates(
      "Time: 11 am\nIntention 1: Water the plants.\nReason_vis: watering can seen\n"
      "Intention 2: Read a book.\nReason_human: calm\n");
  REQUIRE(c.size() == 2);
  CHECK(c[0].text == "Water the plants");
  CHECK(c[0].reason_vis == "watering can seen");
  CHECK(c[1].time_label == "11 am");
  CHECK_THROWS_AS(parse_intention_candidates("Intention: only one"), ParseError);
}

TEST_CASE("reflections report whether anything changed") {
  std::string text =
      "Reflect Each Task:\n1. No mistake or change made.\n2. No mistake or change made.\n"
      "Revised Tasks:\n1. Thought: A. Act: [obj_name: cup]\n";
  auto r = parse_reflection(text);
  CHECK(r.unchanged());
  CHECK(r.notes.size() == 2);
  CHECK(r.revised.size() == 1);
  auto changed = parse_reflection(
      "Reflect Each Task:\n1. Wrong object, swapped the cup.\nRevised Tasks:\n1. Thought: B. Act: "
      "[obj_name: plate]\n");
  CHECK_FALSE(changed.unchanged());
}

TEST_CASE("feedback labels parse leniently but reject unknown tokens") {
  auto f = parse_feedback("Tasks: ['Yes', no, \"YES\"]\nReasons_tasks:\n1. good\n2. bad\n3. fine");
  CHECK(f.labels == std::vector<bool>{true, false, true});
  CHECK(f.reasons.size() == 3);
  CHECK(render_labels(f.labels) == "[yes, no, yes]");
  CHECK(parse_feedback("Tasks: []").labels.empty());
  CHECK_THROWS_AS(parse_feedback("Tasks: [maybe]"), ParseError);
  CHECK_THROWS_AS(parse_feedback("no labels"), ParseError);
}

TEST_CASE("records round-trip through json") {
  TaskRecord t;
  t.day = 2;
  t.hour_slot = 4;
  t.act = MotionAct{1, "Sofa", "book", "sit"};
  CHECK(task_from_json(to_json(t)) == t);
  IntentionRecord i;
  i.text = "x";
  i.reason_vis = "v";
  CHECK(intention_from_json(to_json(i)) == i);
  FeedbackRecord f{3, 1, {true, false}, {"a", "b"}};
  auto fb = feedback_from_json(to_json(f));
  CHECK(fb.labels == f.labels);
  CHECK(fb.day == 3);
}

TEST_CASE("mapping summaries parse back to their entries") {
  auto scene = world::bundled_scene("replica_1");
  auto text = world::mapping_summary(scene, world::MappingFilter::All);
  auto entries = parse_mapping(text);
  CHECK(entries.size() == scene.objects.size());
  for (const auto& e : entries) {
    const auto* o = scene.find(e.id);
    REQUIRE(o);
    CHECK(o->name == e.name);
    CHECK(o->room == e.room);
  }
  CHECK(parse_mapping("{}").empty());
  CHECK(parse_mapping(R"({"Kid's Bed": [3, 'bedroom']})")[0].name == "Kid's Bed");
  CHECK_THROWS_AS(parse_mapping("{'a': [x, 'r']}"), ParseError);
}

TEST_CASE("collaboration types map to task counts") {
  CHECK(human_task_count(collab_from_int(1)) == 3);
  CHECK(human_task_count(collab_from_int(2)) == 5);
  CHECK_THROWS_AS(collab_from_int(3), ValidationError);
}
