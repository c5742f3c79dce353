#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hrc/gateway.hpp"
#include "hrc/util.hpp"

namespace hrc::persona {

/// Trait order used everywhere a vector view is needed.
enum class Trait { Openness, Conscientiousness, Extroversion, Agreeableness, Neuroticism };
inline constexpr std::array<const char*, 5> kTraitNames = {
    "openness", "conscientiousness", "extroversion", "agreeableness", "neuroticism"};

struct BigFive {
  std::array<double, 5> v{3, 3, 3, 3, 3};

  double& operator[](Trait t) { return v[static_cast<std::size_t>(t)]; }
  double operator[](Trait t) const { return v[static_cast<std::size_t>(t)]; }
  bool operator==(const BigFive&) const = default;

  /// Throws ValidationError when any component leaves [1, 5].
  void validate() const;
  /// `{'openness': 3.0, 'conscientiousness': ...}` with one decimal.
  std::string to_dict_text() const;
  Json to_json() const;
  static BigFive from_json(const Json& j);
};

/// Nearest multiple of 0.5, exact quarter points rounding up.
double bin_half(double x);

/// Per trait: bin every sample, return the most frequent bin (lowest on ties).
BigFive majority_vote(const std::vector<BigFive>& samples);

/// Keyed IPIP-50 scoring rescaled to [1, 5]. Needs 50 answers in 1..5.
BigFive score_big5_test(const std::vector<int>& answers);

/// +1 for a positively keyed item, -1 for reverse keyed; items are 1-based.
int item_key(int item);
Trait item_trait(int item);

/// Mean over traits of the population standard deviation.
double trait_diversity(const std::vector<BigFive>& population);

/// Parses the first `{'openness': a, ...}` dictionary found in `text`.
BigFive parse_big5_dict(std::string_view text);
/// Collects "<n>. <rating>" lines; all 50 items must be present exactly once.
std::vector<int> parse_test_answers(std::string_view text);

enum class InferMode { Direct, Test };
std::string_view to_string(InferMode m);
InferMode infer_mode_from_string(std::string_view s);

struct Big5Sample {
  InferMode mode = InferMode::Direct;
  int trial = 0;
  BigFive values;
};

std::string extend_profile(gw::Gateway& g, const std::string& short_profile,
                           const std::string& conversation,
                           const std::string& partner_profile = "");

Big5Sample infer_big5(gw::Gateway& g, const std::string& profile, InferMode mode, int trial);

struct PersonaRecord {
  std::string persona_id;
  std::string short_profile;
  std::string extended_profile;
  BigFive big5;
  std::vector<Big5Sample> big5_samples;

  Json to_json() const;
  static PersonaRecord from_json(const Json& j);
};

struct BuildOptions {
  /// Modes are used round-robin across trials.
  std::vector<InferMode> modes{InferMode::Direct};
  int trials = 5;
};

/// Extends the profile (when a conversation is given) and votes over inferred traits.
PersonaRecord build_persona(gw::Gateway& g, const std::string& id, const std::string& short_profile,
                            const std::string& conversation, const BuildOptions& opt = {},
                            const std::string& partner_profile = "");

/// One file per persona: `<dir>/<persona_id>.json`.
void save_persona(const std::filesystem::path& dir, const PersonaRecord& p);
PersonaRecord load_persona(const std::filesystem::path& file);

/// A profile-plus-dialogue record from a persona-chat style corpus.
struct Conversation {
  std::string profile_a;
  std::string profile_b;
  std::vector<std::string> turns;

  /// Turns rendered alternately as "Human 1: ..." / "Human 2: ...".
  std::string transcript() const;
};

/// JSONL with `persona_a`, `persona_b` (string or list of sentences) and `dialogue`.
std::vector<Conversation> read_corpus(const std::filesystem::path& file);
/// Seeded sample without replacement; returns min(n, size) records.
std::vector<Conversation> sample_corpus(const std::vector<Conversation>& corpus, std::size_t n,
                                        std::uint64_t seed);

}  // namespace hrc::persona
