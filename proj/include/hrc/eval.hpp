#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hrc/gateway.hpp"
#include "hrc/records.hpp"
#include "hrc/world.hpp"

namespace hrc::eval {

struct HourScore {
  int tp = 0, fp = 0, fn = 0;
  double precision = 0, recall = 0, f1 = 0;

  /// Standard counts-based score; every 0/0 is 0.
  static HourScore from_counts(int tp, int fp, int fn);
  Json to_json() const;
  static HourScore from_json(const Json& j);
};

double f1_of(double precision, double recall);

struct PredicateResult {
  int robot_task = 0;
  bool matched = false;
  std::optional<int> gt_task;
  std::string method;
};

/// Greedy one-to-one matching in robot order: each robot task takes the first
/// still-unmatched gt task that satisfies `pred`.
template <class R, class G>
std::vector<PredicateResult> greedy_match(const std::vector<R>& robot, const std::vector<G>& gt,
                                          const std::function<bool(const R&, const G&)>& pred,
                                          const std::string& method) {
  std::vector<bool> used(gt.size(), false);
  std::vector<PredicateResult> out;
  for (std::size_t i = 0; i < robot.size(); ++i) {
    PredicateResult r{static_cast<int>(i), false, std::nullopt, method};
    for (std::size_t j = 0; j < gt.size(); ++j) {
      if (!used[j] && pred(robot[i], gt[j])) {
        used[j] = true;
        r.matched = true;
        r.gt_task = static_cast<int>(j);
        break;
      }
    }
    out.push_back(r);
  }
  return out;
}

/// tp = matched robot tasks, fp = the rest, fn = gt tasks left unmatched.
HourScore score_matches(const std::vector<PredicateResult>& results, std::size_t n_gt);

/// Generic hour F1 under a predicate.
template <class T>
HourScore f1_hour(const std::vector<T>& accepted, const std::vector<T>& gt,
                  const std::function<bool(const T&, const T&)>& pred) {
  return score_matches(greedy_match<T, T>(accepted, gt, pred, "custom"), gt.size());
}

/// Object classes of a pick-and-place act.
struct PickPlaceKey {
  std::string pick_class;
  std::string place_class;
  bool operator==(const PickPlaceKey&) const = default;
};

/// Resolves ids against the scene (class field, falling back to category).
/// Throws ValidationError for unknown ids or objects without a class.
PickPlaceKey key_of(const world::Scene& scene, const rec::PickPlaceAct& act);

std::vector<PredicateResult> predicate_type1(const std::vector<PickPlaceKey>& robot,
                                             const std::vector<PickPlaceKey>& gt);

/// Each offer matches the most similar unmatched desired object if cosine >= theta.
std::vector<PredicateResult> predicate_type2(const std::vector<std::string>& offered,
                                             const std::vector<std::string>& desired,
                                             const std::function<gw::Vec(const std::string&)>& embed,
                                             double theta = 0.6);

/// Asks the judge template for one yes/no per robot task.
std::vector<bool> judge_eval(gw::Gateway& g, const std::string& intention,
                             const std::vector<std::string>& robot_tasks, int retries = 3);

/// Judge labels as an hour score: precision over robot tasks, recall against
/// the human's task count (yes labels beyond it do not add recall).
HourScore judge_score(const std::vector<bool>& labels, std::size_t n_gt);

/// One scored hour of a run.
struct HourRow {
  int day = 1;
  int hour_slot = 0;
  std::string persona;
  std::string scene;
  std::map<std::string, HourScore> by_evaluator;
};

struct Series {
  std::vector<double> within_day;  // mean F1 per hour slot across days
  std::vector<double> across_days; // mean F1 per day
  double final_day_mean = 0;
  double overall_mean = 0;
};

struct RunMetrics {
  std::map<std::string, Series> evaluators;
  /// Mean absolute per-hour F1 difference for each evaluator pair.
  std::map<std::string, std::map<std::string, double>> l1;
  int days = 0;
  int hours = 0;

  Json to_json() const;
};

RunMetrics aggregate(const std::vector<HourRow>& rows);

double l1_between(const std::vector<double>& a, const std::vector<double>& b);
double pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hrc::eval
