#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hrc/gateway.hpp"
#include "hrc/persona.hpp"
#include "hrc/records.hpp"
#include "hrc/world.hpp"

// Synthetic household scenario: a catalog of hourly intention themes per
// persona, seeded theme choice, binding of catalog classes to scene objects,
// and template-aware mock responders that stand in for the chat backend.
namespace hrc::scenario {

enum class Variant { Base = 0, Lookalike = 1, Distinct = 2 };
std::string_view to_string(Variant v);

struct PickPlaceSpec {
  std::string pick;   // class word of a movable object
  std::string place;  // class word of a fixed object
  std::string thought;
};

struct MotionSpec {
  std::string motion;
  std::string fixed;  // class word of the fixed object next to the motion
  std::string inhand;
  std::string thought;
};

struct Theme {
  std::string intention;
  std::string context;
  std::vector<PickPlaceSpec> type1;
  std::vector<MotionSpec> type2;
};

/// Themes of one persona at one hour. Base and lookalike share the context
/// and the first task; distinct has its own.
struct Family {
  std::string persona;
  int hour = 0;
  std::array<Theme, 3> themes;
  const Theme& get(Variant v) const { return themes[static_cast<std::size_t>(v)]; }
};

struct ThemeRef {
  std::size_t family = 0;
  Variant variant = Variant::Base;
  bool operator==(const ThemeRef&) const = default;
};

struct CatalogPersona {
  std::string id;
  std::string name;
  std::string short_profile;
  std::string extended_profile;
  persona::BigFive big5;

  persona::PersonaRecord record() const;
};

class Catalog {
 public:
  static Catalog from_json(const Json& j);
  static const Catalog& bundled();

  double epsilon() const { return epsilon_; }
  const std::vector<CatalogPersona>& personas() const { return personas_; }
  const std::vector<Family>& families() const { return families_; }
  const std::map<std::string, std::string>& pick_classes() const { return pick_; }
  const std::map<std::string, std::string>& place_classes() const { return place_; }
  const std::vector<std::string>& inhand_items() const { return inhand_; }

  const CatalogPersona* persona(std::string_view id) const;
  /// Persona whose short or extended profile occurs in `text`.
  const CatalogPersona* persona_in(std::string_view text) const;
  std::size_t family_index(std::string_view persona, int hour) const;
  const Theme& theme(ThemeRef r) const { return families_.at(r.family).get(r.variant); }

  /// Exact (case-insensitive, trailing period ignored) intention lookup.
  std::optional<ThemeRef> find_intention(std::string_view text) const;
  /// Theme sharing the most content words with `text`; ties go to catalog order.
  ThemeRef nearest_theme(std::string_view text) const;

  std::optional<std::size_t> family_by_first_pickplace(std::string_view pick, std::string_view place) const;
  std::optional<std::size_t> family_by_first_motion(std::string_view motion, std::string_view fixed) const;

  /// Class words of the given table that occur as whole words in `text`, in text order.
  std::vector<std::string> pick_words_in(std::string_view text) const;
  std::vector<std::string> place_words_in(std::string_view text) const;

 private:
  double epsilon_ = 0.2;
  std::vector<CatalogPersona> personas_;
  std::vector<Family> families_;
  std::map<std::string, std::string> pick_, place_;
  std::vector<std::string> inhand_;
};

/// Base with probability 1-eps, otherwise lookalike or distinct evenly.
Variant draw_variant(double eps, std::uint64_t seed);
std::uint64_t human_seed(std::uint64_t run_seed, int day, int slot, std::string_view persona);

/// Resolves class words and names to entries of an object mapping.
class Binder {
 public:
  explicit Binder(std::vector<rec::MappingEntry> mapping);
  static Binder from_scene(const world::Scene& s, world::MappingFilter f = world::MappingFilter::All);
  /// Lowest-id entry whose name contains `word` as a whole word.
  std::optional<rec::MappingEntry> first_with_word(std::string_view word) const;
  std::optional<rec::MappingEntry> by_name(std::string_view name) const;
  std::optional<rec::MappingEntry> by_id(int id) const;
  const std::vector<rec::MappingEntry>& entries() const { return entries_; }

 private:
  std::vector<rec::MappingEntry> entries_;
};

/// Whole-word, case-insensitive containment.
bool contains_word(std::string_view text, std::string_view word);

rec::TaskRecord bind_task(const PickPlaceSpec& s, const Binder& b);
rec::TaskRecord bind_task(const MotionSpec& s, const Binder& b);
/// All human tasks of a theme for the collaboration type; throws WorldError
/// when the scene lacks a needed class.
std::vector<rec::TaskRecord> bind_theme(const Theme& t, rec::CollabType type, const Binder& b);
rec::IntentionRecord make_intention(const Theme& t, const std::string& time_label);

/// Deterministic human turn straight from the catalog (no chat calls).
struct ScriptedTurn {
  ThemeRef ref;
  rec::IntentionRecord intention;
  std::vector<rec::TaskRecord> tasks;
};
ScriptedTurn scripted_turn(const Catalog& cat, std::string_view persona, int slot, std::uint64_t seed,
                           rec::CollabType type, const Binder& b);

/// Judge/feedback rule shared by the mock evaluators: does a robot task serve
/// any of the given human tasks (class pair for type 1, in-hand name for type 2)?
bool serves(const Catalog& cat, const rec::TaskRecord& robot, const std::vector<rec::TaskRecord>& human);

/// Registers responders for every generation template on `mock`.
void install_mock(gw::MockChat& mock, const Catalog& cat = Catalog::bundled());

}  // namespace hrc::scenario
