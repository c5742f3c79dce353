#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include "hrc/classify.hpp"
#include "hrc/error.hpp"

using namespace hrc;
using namespace hrc::classify;

namespace {

gw::Gateway make_gateway(int dim = 64) {
  gw::GatewayConfig c;
  c.embed_dim = dim;
  return gw::Gateway(c, std::make_shared<gw::MockChat>());
}

ClassifierExample ex(const std::string& cand, int hour, bool label) {
  ClassifierExample e;
  e.profile = "Enjoys early workouts and cooking";
  e.big5 = "{'openness': 3.0, 'conscientiousness': 4.5, 'extroversion': 4.0, 'agreeableness': 3.5, 'neuroticism': 2.0}";
  e.prev_intentions = "Sunrise jog";
  e.prev_tasks = "move towel to bench";
  e.current_time = "9 am";
  e.hour_slot = hour;
  e.candidate = cand;
  e.label = label;
  return e;
}

// Twenty examples: "alpha" words are positive, "omega" words negative.
std::vector<ClassifierExample> separable() {
  std::vector<ClassifierExample> out;
  for (int i = 0; i < 10; ++i) {
    out.push_back(ex("alpha task number" + std::to_string(i), i % 12, true));
    out.push_back(ex("omega chore variant" + std::to_string(i), i % 12, false));
  }
  return out;
}

std::map<std::uint32_t, double> dense(const SparseVec& x) {
  std::map<std::uint32_t, double> m;
  for (auto [i, v] : x) m[i] = v;
  return m;
}

}  // namespace

TEST_CASE("untrained classifiers score one half and say yes") {
  auto g = make_gateway();
  ReferenceClassifier c(g);
  auto p = c.predict(ex("anything", 0, false));
  CHECK(p.score == 0.5);
  CHECK(p.label);
  LinearModel zero;
  zero.w.assign(c.featurizer().dim(), 0.0);
  CHECK(zero.predict(c.featurizer().featurize(ex("x", 3, true))).label);
}

TEST_CASE("featurize is deterministic and laid out in blocks") {
  auto g = make_gateway();
  Featurizer f(g, {});
  auto L = f.layout();
  CHECK(L.total == 5 * 64 + 12 + 7 + 64 * 12 + 1);
  auto a = f.featurize(ex("fold the towel", 2, true));
  CHECK(a == f.featurize(ex("fold the towel", 2, true)));
  CHECK(std::is_sorted(a.begin(), a.end()));

  // Only hour-dependent blocks change with the hour.
  auto da = dense(a), db = dense(f.featurize(ex("fold the towel", 7, true)));
  std::set<std::uint32_t> keys;
  for (auto& [k, _] : da) keys.insert(k);
  for (auto& [k, _] : db) keys.insert(k);
  for (auto k : keys) {
    double va = da.count(k) ? da[k] : 0.0, vb = db.count(k) ? db[k] : 0.0;
    if (va != vb) {
      bool in_hour = k >= L.hour && k < L.hour + 12;
      bool in_cross = k >= L.cross && k < L.bias;
      CHECK((in_hour || in_cross));
    }
  }
  FeatureConfig plain;
  plain.hour_cross = false;
  Featurizer p(g, plain);
  auto pa = dense(p.featurize(ex("fold the towel", 2, true)));
  auto pb = dense(p.featurize(ex("fold the towel", 7, true)));
  std::size_t diffs = 0;
  for (auto k : keys) {
    if ((pa.count(k) ? pa[k] : 0.0) != (pb.count(k) ? pb[k] : 0.0)) {
      ++diffs;
      CHECK((k >= p.layout().hour && k < p.layout().hour + 12));
    }
  }
  CHECK(diffs == 2);
}

TEST_CASE("best retrieved item word share is scored per item") {
  auto g = make_gateway();
  Featurizer f(g, {});
  auto L = f.layout();
  auto e = ex("Garden weeding", 4, true);
  e.prev_intentions = "9 am: Sunrise jog; 1 pm: Lunch salad";
  e.prev_tasks = "1 pm.1: Move the cup to the sink for lunch; 1 pm.1: The human moved a plant. Description: Move the remote to the cabinet for garden.";
  auto x = dense(f.featurize(e));
  auto at = [&](std::size_t i) { return x.count(static_cast<std::uint32_t>(L.sims + i)) ? x[static_cast<std::uint32_t>(L.sims + i)] : 0.0; };
  double s = FeatureConfig{}.similarity_scale;
  // One of the two content words appears in the second task; none in the intentions.
  CHECK(at(5) == doctest::Approx(0.0));
  CHECK(at(6) == doctest::Approx(0.5 * s).epsilon(1e-12));
  CHECK(at(4) > 0.0);

  FeatureConfig masked;
  masked.mask = FeatureMask::time_only();
  Featurizer t(g, masked);
  auto y = dense(t.featurize(e));
  for (std::size_t i = 0; i < Featurizer::kSims; ++i) CHECK(y.count(static_cast<std::uint32_t>(L.sims + i)) == 0);
}

TEST_CASE("empty sections produce zero blocks") {
  auto g = make_gateway();
  Featurizer f(g, {});
  auto e = ex("cand", 0, true);
  e.profile.clear();
  e.prev_tasks.clear();
  auto L = f.layout();
  for (auto [i, v] : f.featurize(e)) {
    CHECK_FALSE((i >= L.profile && i < L.big5));
    CHECK_FALSE((i >= L.tasks && i < L.candidate));
  }
}

TEST_CASE("time-only features ignore profile, traits and history") {
  auto g = make_gateway();
  FeatureConfig cfg;
  cfg.mask = FeatureMask::time_only();
  ReferenceClassifier c(g, cfg);
  c.train(separable());
  auto a = ex("alpha task number3", 4, true);
  auto b = a;
  b.profile = "Completely different person who paints";
  b.big5 = "{'openness': 5.0}";
  b.prev_intentions = "Night film";
  b.prev_tasks = "move vase to shelf";
  CHECK(c.featurizer().featurize(a) == c.featurizer().featurize(b));
  CHECK(c.predict(a).score == c.predict(b).score);
}

TEST_CASE("training fits a separable set and is reproducible") {
  auto g = make_gateway();
  ReferenceClassifier c(g);
  auto data = separable();
  c.train(data);
  CHECK(accuracy(c, data) == 1.0);
  ReferenceClassifier again(g);
  again.train(data);
  CHECK(again.model().w == c.model().w);
  for (const auto& e : data) {
    auto p = c.predict(e);
    CHECK(p.label == (p.score >= 0.5));
  }
}

TEST_CASE("an all-yes training set predicts yes everywhere") {
  auto g = make_gateway();
  ReferenceClassifier c(g);
  std::vector<ClassifierExample> data;
  for (int i = 0; i < 8; ++i) data.push_back(ex("thing " + std::to_string(i), i, true));
  c.train(data);
  CHECK(c.predict(ex("never seen words", 11, false)).label);
}

TEST_CASE("a poisoned candidate is rejected after training") {
  auto g = make_gateway();
  ReferenceClassifier c(g);
  std::vector<ClassifierExample> data;
  for (int i = 0; i < 6; ++i) {
    data.push_back(ex("Sunrise jog", 0, true));
    data.push_back(ex("Midnight karaoke party", 0, false));
  }
  c.train(data);
  CHECK(c.predict(ex("Sunrise jog", 0, false)).label);
  CHECK_FALSE(c.predict(ex("Midnight karaoke party", 0, false)).label);
}

TEST_CASE("logistic scores are monotone in the margin and state round-trips") {
  LinearModel m;
  m.w = {1.0, -2.0};
  double prev = 0;
  for (double x = -3; x <= 3; x += 0.5) {
    double s = m.score({{0, x}});
    CHECK(s > prev);
    prev = s;
  }
  auto g = make_gateway();
  ReferenceClassifier c(g);
  c.train(separable());
  ReferenceClassifier d(g);
  d.load_state(Json::parse(c.state().dump()));
  CHECK(d.model().w == c.model().w);
  CHECK_THROWS_AS(train_logistic({}, {}, 3, {}), ValidationError);
}

TEST_CASE("examples export in the instruction format") {
  auto e = ex("Stretch after the jog", 1, true);
  auto text = instruction_text(e);
  CHECK(text.find("### Instruction:") == 0);
  for (const char* s : {"Human Profile. ", "Big Five Traits. ", "Previous Relevant Intentions. ",
                        "Previous Relevant Tasks. ", "Current Time. ", "### Response:\nYes"}) {
    CHECK_MESSAGE(text.find(s) != std::string::npos, s);
  }
  auto f = std::filesystem::temp_directory_path() / "hrc_examples.jsonl";
  export_examples(f, {e, ex("x", 0, false)});
  auto lines = text::split_lines(fsio::read_file(f));
  CHECK(Json::parse(lines[0])["label"] == "Yes");
  CHECK(Json::parse(lines[1])["label"] == "No");
  std::filesystem::remove(f);
}

TEST_CASE("the remote classifier maps Yes/No replies") {
  auto m = std::make_shared<gw::MockChat>();
  m->add_responder("classifier_instruction", [](const gw::ChatRequest& r) -> std::optional<std::string> {
    return r.prompt.find("likely to: jog") != std::string::npos ? "Yes." : "No";
  });
  gw::Gateway g({}, m);
  RemoteClassifier c(g);
  CHECK(c.predict(ex("jog", 0, true)).label);
  CHECK_FALSE(c.predict(ex("sleep", 0, true)).label);
  m->add_template_fixture("classifier_instruction", "Perhaps");
  CHECK_THROWS_AS(c.predict(ex("jog", 0, true)), ParseError);
}
