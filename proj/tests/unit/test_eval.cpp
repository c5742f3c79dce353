#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hrc/error.hpp"
#include "hrc/eval.hpp"

using namespace hrc;
using namespace hrc::eval;

namespace {

const std::function<bool(const std::string&, const std::string&)> kEq =
    [](const std::string& a, const std::string& b) { return a == b; };

// Spreadsheet-style reference: tp is the multiset intersection size.
double reference_f1(std::vector<std::string> acc, std::vector<std::string> gt) {
  std::sort(acc.begin(), acc.end());
  std::sort(gt.begin(), gt.end());
  std::vector<std::string> both;
  std::set_intersection(acc.begin(), acc.end(), gt.begin(), gt.end(), std::back_inserter(both));
  double tp = static_cast<double>(both.size());
  double p = acc.empty() ? 0 : tp / static_cast<double>(acc.size());
  double r = gt.empty() ? 0 : tp / static_cast<double>(gt.size());
  return p + r == 0 ? 0 : 2 * p * r / (p + r);
}

gw::Vec unit_at(double cosine) { return {cosine, std::sqrt(1 - cosine * cosine)}; }

}  // namespace

TEST_CASE("hour F1 on the hand-derived case") {
  auto s = f1_hour<std::string>({"A", "B", "C"}, {"A", "B", "D", "E"}, kEq);
  CHECK(s.tp == 2);
  CHECK(s.fp == 1);
  CHECK(s.fn == 2);
  CHECK(std::abs(s.f1 - 4.0 / 7.0) < 1e-12);
  CHECK(f1_hour<std::string>({"A"}, {"A"}, kEq).f1 == 1.0);
  CHECK(f1_hour<std::string>({}, {"A"}, kEq).f1 == 0.0);
  CHECK(f1_hour<std::string>({}, {}, kEq).f1 == 0.0);
}

TEST_CASE("hour F1 matches the reference on random cases") {
  std::mt19937_64 rng(21);
  const char* letters[] = {"A", "B", "C", "D", "E", "F"};
  for (int t = 0; t < 200; ++t) {
    std::vector<std::string> acc, gt;
    for (std::uint64_t i = 0, n = rng() % 6; i < n; ++i) acc.push_back(letters[rng() % 6]);
    for (std::uint64_t i = 0, n = 1 + rng() % 5; i < n; ++i) gt.push_back(letters[rng() % 6]);
    CHECK(std::abs(f1_hour(acc, gt, kEq).f1 - reference_f1(acc, gt)) < 1e-12);
  }
}

TEST_CASE("type-1 predicate compares classes, one to one") {
  auto scene = world::load_scene(Json::parse(R"({
    "name": "t", "rooms": ["kitchen", "dining room", "living room"],
    "objects": [
      {"id": 1, "name": "Red Mug", "category": "dining ware", "class": "mug", "room": "kitchen", "supported": false},
      {"id": 2, "name": "Blue Mug", "category": "dining ware", "class": "mug", "room": "kitchen", "supported": false},
      {"id": 3, "name": "Dining Table", "category": "support furniture", "class": "table", "room": "dining room", "supported": false},
      {"id": 4, "name": "Sofa", "category": "seating furniture", "room": "living room", "supported": false}
    ]})"));
  auto robot = key_of(scene, {1, "Red Mug", 3, "Dining Table"});
  auto gt = key_of(scene, {2, "Blue Mug", 3, "Dining Table"});
  CHECK(predicate_type1({robot}, {gt})[0].matched);
  auto sofa = key_of(scene, {1, "Red Mug", 4, "Sofa"});
  CHECK(sofa.place_class == "seating furniture");
  CHECK_FALSE(predicate_type1({sofa}, {gt})[0].matched);
  auto two = predicate_type1({robot, robot}, {gt});
  CHECK(two[0].matched);
  CHECK_FALSE(two[1].matched);
  CHECK(score_matches(two, 1).f1 == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(key_of(scene, {99, "x", 3, "y"}), ValidationError);
}

TEST_CASE("type-2 predicate applies the similarity threshold") {
  std::map<std::string, gw::Vec> table{{"wanted", {1.0, 0.0}}, {"close", unit_at(0.61)}, {"far", unit_at(0.59)}};
  auto embed = [&](const std::string& s) { return table.at(s); };
  CHECK(predicate_type2({"close"}, {"wanted"}, embed)[0].matched);
  CHECK_FALSE(predicate_type2({"far"}, {"wanted"}, embed)[0].matched);
  CHECK(predicate_type2({"wanted"}, {"wanted"}, embed)[0].matched);
  CHECK_FALSE(predicate_type2({"close"}, {"wanted"}, embed, 1.0)[0].matched);
  // Raising theta never adds matches.
  std::vector<std::string> offers{"close", "far", "wanted"};
  std::vector<std::string> desired{"wanted", "wanted", "wanted"};
  int prev = 4;
  for (double th : {0.1, 0.5, 0.6, 0.7, 1.0}) {
    int m = 0;
    for (const auto& r : predicate_type2(offers, desired, embed, th)) m += r.matched;
    CHECK(m <= prev);
    prev = m;
  }
  CHECK_THROWS_AS(predicate_type2({}, {}, embed, 0.0), ValidationError);
}

TEST_CASE("judge labels become an hour score") {
  auto mock = std::make_shared<gw::MockChat>();
  mock->add_responder("judge", [](const gw::ChatRequest& r) -> std::optional<std::string> {
    std::vector<bool> labels;
    bool in_list = false;
    for (const auto& line : text::split_lines(r.prompt)) {
      if (line.find("Tasks the robot") != std::string::npos) {
        in_list = true;
      } else if (text::trim(line).empty()) {
        in_list = false;
      } else if (in_list) {
        labels.push_back(line.find("jog") != std::string::npos);
      }
    }
    return "Tasks: " + rec::render_labels(labels) + "\nReasons_tasks:\n1. ok";
  });
  gw::Gateway g({}, mock);
  auto labels = judge_eval(g, "Sunrise jog", {"lace shoes for the jog", "bake bread"});
  CHECK(labels == std::vector<bool>{true, false});
  CHECK(judge_eval(g, "x", {}).empty());
  auto s = judge_score(labels, 3);
  CHECK(s.precision == 0.5);
  CHECK(s.recall == doctest::Approx(1.0 / 3.0));
  CHECK(judge_score({true, true, true, true}, 3).recall == 1.0);
  CHECK(judge_score({}, 3).f1 == 0.0);
}

TEST_CASE("aggregation by slot and day with L1 between evaluators") {
  std::vector<HourRow> rows;
  double pred[2][2] = {{0.5, 1.0}, {0.0, 0.5}};
  for (int d = 0; d < 2; ++d) {
    for (int h = 0; h < 2; ++h) {
      HourRow r;
      r.day = d + 1;
      r.hour_slot = h;
      r.by_evaluator["predicate"].f1 = pred[d][h];
      r.by_evaluator["judge"].f1 = pred[d][h] + (d == 1 && h == 1 ? 0.4 : 0.0);
      rows.push_back(r);
    }
  }
  auto m = aggregate(rows);
  const auto& p = m.evaluators.at("predicate");
  CHECK(p.across_days == std::vector<double>{0.75, 0.25});
  CHECK(p.within_day == std::vector<double>{0.25, 0.75});
  CHECK(p.final_day_mean == 0.25);
  CHECK(p.overall_mean == 0.5);
  CHECK(m.l1.at("predicate").at("judge") == doctest::Approx(0.1));
  CHECK(m.days == 2);
  CHECK_THROWS_AS(aggregate({}), ValidationError);
}

TEST_CASE("l1 and pearson") {
  CHECK(l1_between({0.1, 0.2}, {0.1, 0.2}) == 0.0);
  CHECK(l1_between({0.5}, {0.6}) == doctest::Approx(0.1));
  CHECK_THROWS_AS(l1_between({1}, {1, 2}), ValidationError);
  CHECK(pearson({1, 2, 3}, {1, 2, 3}) == doctest::Approx(1.0));
  CHECK(pearson({1, 2, 3}, {-1, -2, -3}) == doctest::Approx(-1.0));
  CHECK(pearson({1, 2, 3}, {2, 4, 7}) == doctest::Approx(5.0 / std::sqrt(2.0 * 38.0 / 3.0)).epsilon(1e-12));
  CHECK(pearson({1, 2, 3, 5}, {2, 4, 7, 1}) ==
        doctest::Approx(pearson({3, 5, 7, 11}, {10, 18, 30, 6})));
  CHECK_THROWS_AS(pearson({1, 1}, {1, 2}), ValidationError);
}
