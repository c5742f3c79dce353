#include "hrc/persona.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <regex>
#include <sstream>

#include "hrc/assets.hpp"
#include "hrc/error.hpp"
#include "hrc/prompts.hpp"

namespace hrc::persona {

namespace {

// IPIP-50: item i measures trait (i-1) % 5 in the order E, A, C, N, O.
constexpr std::array<Trait, 5> kCycle = {Trait::Extroversion, Trait::Agreeableness,
                                         Trait::Conscientiousness, Trait::Neuroticism,
                                         Trait::Openness};
constexpr std::array<int, 18> kReversed = {6,  16, 26, 36, 46,  // E
                                           2,  12, 22, 32,      // A
                                           8,  18, 28, 38,      // C
                                           9,  19,              // N
                                           10, 20, 30};         // O

std::string fmt1(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", x);
  return buf;
}

}  // namespace

void BigFive::validate() const {
  for (std::size_t i = 0; i < 5; ++i) {
    if (!(v[i] >= 1.0 && v[i] <= 5.0)) {
      throw ValidationError(std::string(kTraitNames[i]) + " must lie in [1, 5], got " +
                            std::to_string(v[i]));
    }
  }
}

std::string BigFive::to_dict_text() const {
  std::string out = "{";
  for (std::size_t i = 0; i < 5; ++i) {
    if (i) out += ", ";
    out += "'" + std::string(kTraitNames[i]) + "': " + fmt1(v[i]);
  }
  return out + "}";
}

Json BigFive::to_json() const {
  Json j = Json::object();
  for (std::size_t i = 0; i < 5; ++i) j[kTraitNames[i]] = v[i];
  return j;
}

BigFive BigFive::from_json(const Json& j) {
  BigFive b;
  for (std::size_t i = 0; i < 5; ++i) b.v[i] = j.at(kTraitNames[i]).get<double>();
  b.validate();
  return b;
}

double bin_half(double x) { return std::floor(x * 2.0 + 0.5) / 2.0; }

BigFive majority_vote(const std::vector<BigFive>& samples) {
  if (samples.empty()) throw ValidationError("majority vote needs at least one sample");
  BigFive out;
  for (std::size_t t = 0; t < 5; ++t) {
    std::map<double, int> counts;  // ordered, so the first maximum is the lowest bin
    for (const auto& s : samples) {
      s.validate();
      ++counts[bin_half(s.v[t])];
    }
    int best = 0;
    for (const auto& [bin, n] : counts) {
      if (n > best) {
        best = n;
        out.v[t] = bin;
      }
    }
  }
  return out;
}

Trait item_trait(int item) {
  if (item < 1 || item > 50) throw ValidationError("inventory item out of range");
  return kCycle[static_cast<std::size_t>((item - 1) % 5)];
}

int item_key(int item) {
  item_trait(item);
  return std::find(kReversed.begin(), kReversed.end(), item) != kReversed.end() ? -1 : 1;
}

BigFive score_big5_test(const std::vector<int>& answers) {
  if (answers.size() != 50) {
    throw ValidationError("inventory needs 50 answers, got " + std::to_string(answers.size()));
  }
  std::array<int, 5> raw{};
  std::array<int, 5> n{};
  for (int i = 1; i <= 50; ++i) {
    int a = answers[static_cast<std::size_t>(i - 1)];
    if (a < 1 || a > 5) {
      throw ValidationError("answer " + std::to_string(i) + " out of range: " + std::to_string(a));
    }
    auto t = static_cast<std::size_t>(item_trait(i));
    raw[t] += item_key(i) > 0 ? a : 6 - a;
    ++n[t];
  }
  BigFive b;
  for (std::size_t t = 0; t < 5; ++t) {
    double lo = n[t], hi = 5.0 * n[t];
    b.v[t] = 1.0 + 4.0 * (raw[t] - lo) / (hi - lo);
  }
  return b;
}

double trait_diversity(const std::vector<BigFive>& population) {
  if (population.size() < 2) throw ValidationError("diversity needs at least two humans");
  double total = 0;
  double n = static_cast<double>(population.size());
  for (std::size_t t = 0; t < 5; ++t) {
    double mean = 0;
    for (const auto& p : population) mean += p.v[t];
    mean /= n;
    double var = 0;
    for (const auto& p : population) var += (p.v[t] - mean) * (p.v[t] - mean);
    total += std::sqrt(var / n);
  }
  return total / 5.0;
}

BigFive parse_big5_dict(std::string_view text) {
  std::string s(text);
  auto open = s.find('{');
  auto close = s.find('}', open == std::string::npos ? 0 : open);
  if (open == std::string::npos || close == std::string::npos) {
    throw ParseError("no trait dictionary found", s);
  }
  std::string body = s.substr(open + 1, close - open - 1);
  static const std::regex entry(R"(['"]?([A-Za-z_]+)['"]?\s*:\s*(-?[0-9]+(?:\.[0-9]+)?))");
  std::map<std::string, double> found;
  for (auto it = std::sregex_iterator(body.begin(), body.end(), entry); it != std::sregex_iterator();
       ++it) {
    found[text::lower((*it)[1].str())] = std::stod((*it)[2].str());
  }
  BigFive b;
  for (std::size_t i = 0; i < 5; ++i) {
    auto it = found.find(kTraitNames[i]);
    if (it == found.end() && i == 2) it = found.find("extraversion");
    if (it == found.end()) throw ParseError(std::string("trait '") + kTraitNames[i] + "' missing", s);
    b.v[i] = it->second;
  }
  try {
    b.validate();
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), s);
  }
  return b;
}

std::vector<int> parse_test_answers(std::string_view text) {
  static const std::regex line_re(R"(^\s*(\d+)\s*[.):]\s*([1-5])\b)");
  std::vector<int> answers(50, 0);
  for (const auto& line : text::split_lines(text)) {
    std::smatch m;
    if (!std::regex_search(line, m, line_re)) continue;
    int item = std::stoi(m[1].str());
    if (item < 1 || item > 50) continue;
    auto& slot = answers[static_cast<std::size_t>(item - 1)];
    if (slot != 0) throw ParseError("item " + std::to_string(item) + " answered twice", std::string(text));
    slot = std::stoi(m[2].str());
  }
  for (int i = 0; i < 50; ++i) {
    if (answers[static_cast<std::size_t>(i)] == 0) {
      throw ParseError("item " + std::to_string(i + 1) + " unanswered", std::string(text));
    }
  }
  return answers;
}

std::string_view to_string(InferMode m) { return m == InferMode::Direct ? "direct" : "test"; }

InferMode infer_mode_from_string(std::string_view s) {
  if (s == "direct") return InferMode::Direct;
  if (s == "test") return InferMode::Test;
  throw ValidationError("unknown Big Five inference mode '" + std::string(s) + "'");
}

std::string extend_profile(gw::Gateway& g, const std::string& short_profile,
                           const std::string& conversation, const std::string& partner_profile) {
  if (text::trim(short_profile).empty()) throw ValidationError("profile must not be empty");
  gw::ChatRequest req;
  req.template_id = "profile_extension";
  req.prompt = prompts::render("profile_extension", {{"profile", short_profile},
                                                     {"partner_profile", partner_profile},
                                                     {"conversation", conversation}});
  auto out = text::trim(g.chat(req));
  if (out.empty()) throw ParseError("empty profile extension", out);
  return out;
}

Big5Sample infer_big5(gw::Gateway& g, const std::string& profile, InferMode mode, int trial) {
  gw::ChatRequest req;
  req.trial_index = trial;
  Big5Sample s{mode, trial, {}};
  if (mode == InferMode::Direct) {
    req.template_id = "big5_direct";
    req.prompt = prompts::render("big5_direct", {{"profile", profile}});
    s.values = parse_big5_dict(g.chat(req));
  } else {
    auto items = text::split_lines(assets::get("big5_items.txt"));
    std::string numbered;
    int n = 0;
    for (const auto& it : items) {
      if (text::trim(it).empty()) continue;
      numbered += std::to_string(++n) + ". " + text::trim(it) + "\n";
    }
    req.template_id = "big5_test";
    req.prompt = prompts::render("big5_test", {{"profile", profile}, {"items", text::trim(numbered)}});
    s.values = score_big5_test(parse_test_answers(g.chat(req)));
  }
  return s;
}

Json PersonaRecord::to_json() const {
  Json samples = Json::array();
  for (const auto& s : big5_samples) {
    samples.push_back({{"mode", to_string(s.mode)}, {"trial", s.trial}, {"values", s.values.to_json()}});
  }
  return Json{{"persona_id", persona_id},
              {"short_profile", short_profile},
              {"extended_profile", extended_profile},
              {"big5", big5.to_json()},
              {"big5_samples", samples}};
}

PersonaRecord PersonaRecord::from_json(const Json& j) {
  PersonaRecord p;
  p.persona_id = j.at("persona_id").get<std::string>();
  p.short_profile = j.value("short_profile", "");
  p.extended_profile = j.value("extended_profile", "");
  p.big5 = BigFive::from_json(j.at("big5"));
  for (const auto& s : j.value("big5_samples", Json::array())) {
    p.big5_samples.push_back({infer_mode_from_string(s.at("mode").get<std::string>()),
                              s.value("trial", 0), BigFive::from_json(s.at("values"))});
  }
  if (!p.big5_samples.empty()) {
    std::vector<BigFive> v;
    for (const auto& s : p.big5_samples) v.push_back(s.values);
    if (majority_vote(v) != p.big5) {
      throw ValidationError("persona " + p.persona_id + ": big5 differs from the vote over its samples");
    }
  }
  return p;
}

PersonaRecord build_persona(gw::Gateway& g, const std::string& id, const std::string& short_profile,
                            const std::string& conversation, const BuildOptions& opt,
                            const std::string& partner_profile) {
  if (opt.trials < 1 || opt.modes.empty()) throw ValidationError("need at least one trial and mode");
  PersonaRecord p;
  p.persona_id = id;
  p.short_profile = short_profile;
  p.extended_profile = text::trim(conversation).empty()
                           ? short_profile
                           : extend_profile(g, short_profile, conversation, partner_profile);
  std::vector<BigFive> values;
  for (int t = 0; t < opt.trials; ++t) {
    auto mode = opt.modes[static_cast<std::size_t>(t) % opt.modes.size()];
    p.big5_samples.push_back(infer_big5(g, p.extended_profile, mode, t));
    values.push_back(p.big5_samples.back().values);
  }
  p.big5 = majority_vote(values);
  return p;
}

void save_persona(const std::filesystem::path& dir, const PersonaRecord& p) {
  fsio::write_json(dir / (p.persona_id + ".json"), p.to_json());
}

PersonaRecord load_persona(const std::filesystem::path& file) {
  return PersonaRecord::from_json(fsio::read_json(file));
}

std::string Conversation::transcript() const {
  std::string out;
  for (std::size_t i = 0; i < turns.size(); ++i) {
    if (i) out += "\n";
    out += (i % 2 == 0 ? "Human 1: " : "Human 2: ") + turns[i];
  }
  return out;
}

std::vector<Conversation> read_corpus(const std::filesystem::path& file) {
  auto join_field = [](const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    std::vector<std::string> parts = v.get<std::vector<std::string>>();
    return text::join(parts, " ");
  };
  std::vector<Conversation> out;
  int lineno = 0;
  for (const auto& line : text::split_lines(fsio::read_file(file))) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      auto j = Json::parse(line);
      Conversation c;
      c.profile_a = join_field(j.at("persona_a"));
      c.profile_b = join_field(j.value("persona_b", Json("")));
      c.turns = j.value("dialogue", std::vector<std::string>{});
      if (text::trim(c.profile_a).empty()) throw LoadError("persona_a is empty");
      out.push_back(std::move(c));
    } catch (const Json::exception& e) {
      throw LoadError(file.string() + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const LoadError& e) {
      throw LoadError(file.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Conversation> sample_corpus(const std::vector<Conversation>& corpus, std::size_t n,
                                        std::uint64_t seed) {
  std::vector<std::size_t> idx(corpus.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates with explicit modulo so the order is portable.
  std::size_t take = std::min(n, idx.size());
  for (std::size_t i = 0; i < take; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<Conversation> out;
  for (std::size_t i = 0; i < take; ++i) out.push_back(corpus[idx[i]]);
  return out;
}

}  // namespace hrc::persona
