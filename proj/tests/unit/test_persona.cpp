#include <doctest.h>

#include <filesystem>
#include <random>

#include "hrc/error.hpp"
#include "hrc/persona.hpp"

using namespace hrc;
using namespace hrc::persona;

namespace {

BigFive b5(double o, double c, double e, double a, double n) { return BigFive{{o, c, e, a, n}}; }

// Published IPIP-50 key written out item by item: trait letter and sign.
const char* kKey[50] = {"E+", "A-", "C+", "N+", "O+", "E-", "A+", "C-", "N-", "O-",
                        "E+", "A-", "C+", "N+", "O+", "E-", "A+", "C-", "N-", "O-",
                        "E+", "A-", "C+", "N+", "O+", "E-", "A+", "C-", "N+", "O-",
                        "E+", "A-", "C+", "N+", "O+", "E-", "A+", "C-", "N+", "O+",
                        "E+", "A+", "C+", "N+", "O+", "E-", "A+", "C+", "N+", "O+"};

BigFive reference_score(const std::vector<int>& a) {
  std::map<char, double> raw;
  for (int i = 0; i < 50; ++i) raw[kKey[i][0]] += kKey[i][1] == '+' ? a[i] : 6 - a[i];
  auto s = [&](char t) { return 1.0 + 4.0 * (raw[t] - 10.0) / 40.0; };
  return b5(s('O'), s('C'), s('E'), s('A'), s('N'));
}

std::shared_ptr<gw::MockChat> mock_with(const std::string& tmpl, const std::string& text) {
  auto m = std::make_shared<gw::MockChat>();
  m->add_template_fixture(tmpl, text);
  return m;
}

}  // namespace

TEST_CASE("binning rounds to halves with quarter points going up") {
  CHECK(bin_half(3.2) == 3.0);
  CHECK(bin_half(3.25) == 3.5);
  CHECK(bin_half(3.74) == 3.5);
  CHECK(bin_half(3.75) == 4.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(1, 5);
  for (int i = 0; i < 1000; ++i) {
    double x = u(rng);
    CHECK(std::abs(bin_half(x) - x) <= 0.25);
  }
}

TEST_CASE("majority vote picks the modal bin and the lowest bin on ties") {
  std::vector<BigFive> s;
  for (double x : {3.2, 3.1, 3.4, 4.0, 3.0}) s.push_back(b5(x, 4, 4, 4, 4));
  CHECK(majority_vote(s)[Trait::Openness] == 3.0);
  s.clear();
  for (double x : {3.0, 3.0, 3.5, 3.5, 4.0}) s.push_back(b5(x, x, x, x, x));
  CHECK(majority_vote(s) == b5(3, 3, 3, 3, 3));
  std::vector<BigFive> same(5, b5(4, 4, 4, 4, 4));
  CHECK(majority_vote(same) == same.front());
  CHECK(majority_vote({majority_vote(same)}) == majority_vote(same));
  CHECK_THROWS_AS(majority_vote({}), ValidationError);
}

TEST_CASE("inventory scoring agrees with the published key") {
  CHECK(score_big5_test(std::vector<int>(50, 3)) == b5(3, 3, 3, 3, 3));
  std::mt19937_64 rng(9);
  for (int t = 0; t < 300; ++t) {
    std::vector<int> a(50);
    for (auto& x : a) x = 1 + static_cast<int>(rng() % 5);
    auto got = score_big5_test(a), want = reference_score(a);
    for (int i = 0; i < 5; ++i) CHECK(got.v[i] == doctest::Approx(want.v[i]).epsilon(1e-12));
  }
  // Extremal extroversion answers.
  std::vector<int> e(50, 3);
  for (int i = 0; i < 50; ++i) {
    if (kKey[i][0] == 'E') e[i] = kKey[i][1] == '+' ? 5 : 1;
  }
  CHECK(score_big5_test(e)[Trait::Extroversion] == 5.0);
  // All-ones and all-fives mirror each other around the midpoint.
  auto lo = score_big5_test(std::vector<int>(50, 1)), hi = score_big5_test(std::vector<int>(50, 5));
  for (int i = 0; i < 5; ++i) CHECK(lo.v[i] + hi.v[i] == doctest::Approx(6.0));
  CHECK_THROWS_AS(score_big5_test(std::vector<int>(49, 3)), ValidationError);
  CHECK_THROWS_AS(score_big5_test(std::vector<int>(50, 6)), ValidationError);
}

TEST_CASE("scoring is monotone in each item according to its key") {
  for (int item = 1; item <= 50; ++item) {
    std::vector<int> a(50, 3);
    auto t = item_trait(item);
    double prev = -1;
    for (int v = 1; v <= 5; ++v) {
      a[item - 1] = v;
      double s = score_big5_test(a)[t];
      if (item_key(item) > 0) {
        CHECK(s > prev);
      } else if (prev >= 0) {
        CHECK(s < prev);
      }
      prev = s;
    }
  }
}

TEST_CASE("diversity is the mean per-trait population sd") {
  CHECK(trait_diversity({b5(2, 2, 2, 2, 2), b5(2, 2, 2, 2, 2)}) == 0.0);
  CHECK(trait_diversity({b5(1, 1, 1, 1, 1), b5(5, 5, 5, 5, 5)}) == doctest::Approx(2.0));
  std::vector<BigFive> pop{b5(1, 2, 3, 4, 5), b5(2, 2, 4, 4, 1), b5(5, 1, 1, 3, 3)};
  double d = trait_diversity(pop);
  std::swap(pop[0], pop[2]);
  CHECK(trait_diversity(pop) == doctest::Approx(d));
  CHECK_THROWS_AS(trait_diversity({b5(1, 1, 1, 1, 1)}), ValidationError);
}

TEST_CASE("trait dictionaries and inventory answers parse") {
  auto b = parse_big5_dict(
      "Sure: {'openness': 3.0, 'conscientiousness': 4.0, 'extroversion': 2.0, 'agreeableness': "
      "5.0, 'neuroticism': 1.0}");
  CHECK(b == b5(3, 4, 2, 5, 1));
  CHECK(parse_big5_dict(b.to_dict_text()) == b);
  CHECK_THROWS_AS(parse_big5_dict("{'openness': 3.0}"), ParseError);
  CHECK_THROWS_AS(parse_big5_dict("no dict"), ParseError);
  CHECK_THROWS_AS(parse_big5_dict("{'openness': 9, 'conscientiousness': 4, 'extroversion': 2, "
                                  "'agreeableness': 5, 'neuroticism': 1}"),
                  ParseError);
  std::string answers;
  for (int i = 1; i <= 50; ++i) answers += std::to_string(i) + ". 3\n";
  CHECK(parse_test_answers(answers) == std::vector<int>(50, 3));
  CHECK_THROWS_AS(parse_test_answers("1. 3\n"), ParseError);
}

TEST_CASE("big five inference through the gateway in both modes") {
  auto direct = mock_with("big5_direct", "{'openness': 3.0, 'conscientiousness': 4.0, "
                                         "'extroversion': 2.0, 'agreeableness': 5.0, 'neuroticism': 1.0}");
  gw::Gateway g({}, direct);
  CHECK(infer_big5(g, "I cook.", InferMode::Direct, 0).values == b5(3, 4, 2, 5, 1));

  std::string answers;
  for (int i = 1; i <= 50; ++i) answers += std::to_string(i) + ". 3\n";
  gw::Gateway t({}, mock_with("big5_test", answers));
  CHECK(infer_big5(t, "I cook.", InferMode::Test, 0).values == b5(3, 3, 3, 3, 3));

  gw::Gateway bad({}, mock_with("big5_direct", "{'openness': }"));
  CHECK_THROWS_AS(infer_big5(bad, "x", InferMode::Direct, 0), ParseError);
}

TEST_CASE("persona build votes over trials and survives the store") {
  auto m = std::make_shared<gw::MockChat>();
  m->add_responder("profile_extension", [](const gw::ChatRequest& r) -> std::optional<std::string> {
    return "I am someone who says: " + r.prompt.substr(r.prompt.find(": ") + 2, 20);
  });
  int trial = 0;
  m->add_responder("big5_direct", [&](const gw::ChatRequest& r) -> std::optional<std::string> {
    ++trial;
    double o = r.trial_index == 3 ? 4.0 : 3.2;
    return "{'openness': " + std::to_string(o) +
           ", 'conscientiousness': 4, 'extroversion': 2, 'agreeableness': 5, 'neuroticism': 1}";
  });
  gw::Gateway g({}, m);
  auto p = build_persona(g, "p9", "I love gardening.", "Human 1: hi\nHuman 2: hello");
  CHECK(trial == 5);
  CHECK(p.big5_samples.size() == 5);
  CHECK(p.big5 == b5(3, 4, 2, 5, 1));
  CHECK(p.extended_profile.find("I love gardening") != std::string::npos);

  auto dir = std::filesystem::temp_directory_path() / "hrc_persona_store";
  std::filesystem::create_directories(dir);
  save_persona(dir, p);
  auto back = load_persona(dir / "p9.json");
  CHECK(back.big5 == p.big5);
  CHECK(back.big5_samples.size() == 5);
  std::filesystem::remove_all(dir);

  // An empty conversation skips the extension call.
  auto q = build_persona(g, "p10", "Short.", "");
  CHECK(q.extended_profile == "Short.");
}

TEST_CASE("corpus reader and seeded sampling") {
  auto f = std::filesystem::temp_directory_path() / "hrc_corpus.jsonl";
  fsio::write_file_atomic(
      f, "{\"persona_a\": [\"I run.\", \"I cook.\"], \"persona_b\": \"I paint.\", \"dialogue\": [\"hi\", \"hey\"]}\n"
         "{\"persona_a\": \"I read.\", \"dialogue\": []}\n"
         "{\"persona_a\": \"I swim.\", \"dialogue\": [\"a\"]}\n");
  auto c = read_corpus(f);
  REQUIRE(c.size() == 3);
  CHECK(c[0].profile_a == "I run. I cook.");
  CHECK(c[0].transcript() == "Human 1: hi\nHuman 2: hey");
  auto s1 = sample_corpus(c, 2, 4), s2 = sample_corpus(c, 2, 4);
  REQUIRE(s1.size() == 2);
  CHECK(s1[0].profile_a == s2[0].profile_a);
  CHECK(s1[1].profile_a == s2[1].profile_a);
  CHECK(sample_corpus(c, 10, 1).size() == 3);
  fsio::write_file_atomic(f, "{\"persona_a\": \"ok\"}\nnot json\n");
  CHECK_THROWS_WITH_AS(read_corpus(f), doctest::Contains(":2:"), LoadError);
  std::filesystem::remove(f);
}
