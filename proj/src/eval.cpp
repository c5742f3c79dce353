#include "hrc/eval.hpp"

#include <cmath>
#include <set>

#include "hrc/error.hpp"
#include "hrc/prompts.hpp"

namespace hrc::eval {

double f1_of(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

HourScore HourScore::from_counts(int tp, int fp, int fn) {
  HourScore s{tp, fp, fn, 0, 0, 0};
  s.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  s.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
  s.f1 = f1_of(s.precision, s.recall);
  return s;
}

Json HourScore::to_json() const {
  return Json{{"tp", tp}, {"fp", fp}, {"fn", fn}, {"precision", precision}, {"recall", recall}, {"f1", f1}};
}

HourScore HourScore::from_json(const Json& j) {
  HourScore s;
  s.tp = j.value("tp", 0);
  s.fp = j.value("fp", 0);
  s.fn = j.value("fn", 0);
  s.precision = j.value("precision", 0.0);
  s.recall = j.value("recall", 0.0);
  s.f1 = j.value("f1", 0.0);
  return s;
}

HourScore score_matches(const std::vector<PredicateResult>& results, std::size_t n_gt) {
  int tp = 0;
  for (const auto& r : results) tp += r.matched;
  int fp = static_cast<int>(results.size()) - tp;
  int fn = static_cast<int>(n_gt) - tp;
  if (fn < 0) throw ValidationError("more matches than ground-truth tasks");
  return HourScore::from_counts(tp, fp, fn);
}

PickPlaceKey key_of(const world::Scene& scene, const rec::PickPlaceAct& act) {
  auto cls = [&](int id) {
    const auto* o = scene.find(id);
    if (!o) throw ValidationError("object id " + std::to_string(id) + " is not in scene " + scene.name);
    std::string c = o->cls.empty() ? o->category : o->cls;
    if (c.empty()) throw ValidationError("object " + std::to_string(id) + " has no class or category");
    return c;
  };
  return {cls(act.pick_id), cls(act.place_id)};
}

std::vector<PredicateResult> predicate_type1(const std::vector<PickPlaceKey>& robot,
                                             const std::vector<PickPlaceKey>& gt) {
  std::function<bool(const PickPlaceKey&, const PickPlaceKey&)> eq =
      [](const PickPlaceKey& a, const PickPlaceKey& b) { return a == b; };
  return greedy_match(robot, gt, eq, "type1-category");
}

std::vector<PredicateResult> predicate_type2(const std::vector<std::string>& offered,
                                             const std::vector<std::string>& desired,
                                             const std::function<gw::Vec(const std::string&)>& embed,
                                             double theta) {
  if (!(theta > 0 && theta <= 1)) throw ValidationError("theta must lie in (0, 1]");
  std::vector<gw::Vec> want;
  for (const auto& d : desired) want.push_back(embed(d));
  std::vector<bool> used(desired.size(), false);
  std::vector<PredicateResult> out;
  for (std::size_t i = 0; i < offered.size(); ++i) {
    auto v = embed(offered[i]);
    PredicateResult r{static_cast<int>(i), false, std::nullopt, "type2-similarity"};
    double best = -2;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < want.size(); ++j) {
      if (used[j]) continue;
      double s = gw::dot(v, want[j]);
      if (s > best) {
        best = s;
        arg = j;
      }
    }
    if (best >= theta) {
      used[arg] = true;
      r.matched = true;
      r.gt_task = static_cast<int>(arg);
    }
    out.push_back(r);
  }
  return out;
}

std::vector<bool> judge_eval(gw::Gateway& g, const std::string& intention,
                             const std::vector<std::string>& robot_tasks, int retries) {
  if (robot_tasks.empty()) return {};
  std::string listed;
  for (std::size_t i = 0; i < robot_tasks.size(); ++i) {
    if (i) listed += "\n";
    listed += std::to_string(i + 1) + ". " + robot_tasks[i];
  }
  gw::ChatRequest req;
  req.template_id = "judge";
  req.prompt = prompts::render("judge", {{"intention", intention}, {"robot_tasks", listed}});
  req.temperature = 0.0;
  std::string last;
  for (int attempt = 0; attempt < retries; ++attempt) {
    req.trial_index = attempt;
    last = g.chat(req);
    try {
      auto fb = rec::parse_feedback(last);
      if (fb.labels.size() == robot_tasks.size()) return fb.labels;
    } catch (const ParseError&) {
    }
  }
  throw ParseError("judge did not return " + std::to_string(robot_tasks.size()) + " labels", last);
}

HourScore judge_score(const std::vector<bool>& labels, std::size_t n_gt) {
  int yes = 0;
  for (bool b : labels) yes += b;
  int no = static_cast<int>(labels.size()) - yes;
  HourScore s;
  s.tp = yes;
  s.fp = no;
  s.fn = std::max(0, static_cast<int>(n_gt) - yes);
  s.precision = labels.empty() ? 0.0 : static_cast<double>(yes) / static_cast<double>(labels.size());
  s.recall = n_gt == 0 ? 0.0
                       : static_cast<double>(std::min<std::size_t>(static_cast<std::size_t>(yes), n_gt)) /
                             static_cast<double>(n_gt);
  s.f1 = f1_of(s.precision, s.recall);
  return s;
}

Json RunMetrics::to_json() const {
  Json ev = Json::object();
  for (const auto& [name, s] : evaluators) {
    ev[name] = Json{{"within_day", s.within_day},
                    {"across_days", s.across_days},
                    {"final_day_mean", s.final_day_mean},
                    {"overall_mean", s.overall_mean}};
  }
  return Json{{"days", days}, {"hours", hours}, {"evaluators", ev}, {"l1", l1}};
}

RunMetrics aggregate(const std::vector<HourRow>& rows) {
  if (rows.empty()) throw ValidationError("aggregate needs at least one scored hour");
  RunMetrics m;
  std::set<std::string> names;
  std::set<int> days;
  for (const auto& r : rows) {
    days.insert(r.day);
    for (const auto& [n, _] : r.by_evaluator) names.insert(n);
  }
  m.days = static_cast<int>(days.size());
  m.hours = static_cast<int>(rows.size());
  int last_day = *days.rbegin();
  std::map<std::string, std::vector<double>> per_hour;
  for (const auto& name : names) {
    std::map<int, std::pair<double, int>> by_slot, by_day;
    double total = 0;
    int n = 0;
    for (const auto& r : rows) {
      auto it = r.by_evaluator.find(name);
      if (it == r.by_evaluator.end()) continue;
      double f = it->second.f1;
      by_slot[r.hour_slot].first += f;
      ++by_slot[r.hour_slot].second;
      by_day[r.day].first += f;
      ++by_day[r.day].second;
      total += f;
      ++n;
      per_hour[name].push_back(f);
    }
    Series s;
    for (const auto& [slot, acc] : by_slot) s.within_day.push_back(acc.first / acc.second);
    for (const auto& [day, acc] : by_day) s.across_days.push_back(acc.first / acc.second);
    auto ld = by_day.find(last_day);
    s.final_day_mean = ld == by_day.end() ? 0.0 : ld->second.first / ld->second.second;
    s.overall_mean = n ? total / n : 0.0;
    m.evaluators[name] = s;
  }
  for (const auto& a : names) {
    for (const auto& b : names) {
      if (a < b && per_hour[a].size() == per_hour[b].size()) {
        double d = l1_between(per_hour[a], per_hour[b]);
        m.l1[a][b] = d;
        m.l1[b][a] = d;
      }
    }
  }
  return m;
}

double l1_between(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw ValidationError("score sequences differ in length: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
  if (a.empty()) return 0.0;
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("pearson needs two equal series of length >= 2");
  double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) throw ValidationError("pearson is undefined for a constant series");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace hrc::eval
