#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hrc/util.hpp"

namespace hrc::world {

enum class Holder { Surface, HumanHand, RobotGripper };
enum class Agent { Human, Robot };

std::string_view to_string(Holder h);
std::string_view to_string(Agent a);
Agent agent_from_string(std::string_view s);

const std::vector<std::string>& dynamic_categories();
const std::vector<std::string>& static_categories();
bool is_known_category(std::string_view category);
bool is_dynamic_category(std::string_view category);

struct ObjectInstance {
  int id = 0;
  std::string name;
  std::string category;
  /// Fine-grained semantic class ("mug", "table"). Falls back to category.
  std::string cls;
  std::string room;
  bool supported = false;
  bool dynamic = false;
  Holder holder = Holder::Surface;

  bool operator==(const ObjectInstance&) const = default;
};

struct Scene {
  std::string name;
  std::vector<std::string> rooms;
  std::vector<ObjectInstance> objects;  // ascending id

  const ObjectInstance* find(int id) const;
  ObjectInstance* find(int id);
  bool has_room(std::string_view room) const;
  std::size_t static_count() const;
  std::size_t dynamic_count() const;

  bool operator==(const Scene&) const = default;
};

/// Twelve one-hour slots per day; slot 0 starts at 9 am, slot 11 at 8 pm.
struct DayClock {
  static constexpr int kSlots = 12;
  static constexpr int kFirstHour = 9;

  int day = 1;
  int slot = 0;

  /// Hour slots elapsed since day 1 slot 0.
  long ordinal() const { return static_cast<long>(kSlots) * (day - 1) + slot; }
  std::string label() const { return slot_label(slot); }
  static std::string slot_label(int slot);
  /// Inverse of slot_label; accepts "9 am", "9am", "9:00 am" and 24-hour "14:00".
  static std::optional<int> parse_slot_label(std::string_view label);

  auto operator<=>(const DayClock&) const = default;
};

struct Event {
  enum class Kind { Pick, Place, Motion, Offer };
  Kind kind = Kind::Pick;
  Agent agent = Agent::Human;
  DayClock at;
  int object_id = -1;     // pick/place subject; motion: interacted static object
  int target_id = -1;     // place target object, -1 when placed on a room
  std::string room;       // resulting room for place, location for motion
  std::string motion;     // motion label (Motion)
  std::string item;       // offered or in-hand object name (Offer, Motion)

  bool operator==(const Event&) const = default;
};

std::string_view to_string(Event::Kind k);
Json event_to_json(const Event& e);
Event event_from_json(const Json& j);

struct PlaceTarget {
  std::optional<int> object_id;
  std::string room;

  static PlaceTarget object(int id) { return {id, {}}; }
  static PlaceTarget in_room(std::string r) { return {std::nullopt, std::move(r)}; }
};

struct WorldState {
  Scene scene;
  DayClock clock;
  std::vector<Event> events;

  explicit WorldState(Scene s = {}) : scene(std::move(s)) {}
  /// Object currently held by `agent`, if any.
  const ObjectInstance* held_by(Agent agent) const;
};

Scene load_scene(const Json& doc);
Scene load_scene_file(const std::string& path);
Json scene_to_json(const Scene& scene);

/// Names of the scenes compiled into the library.
std::vector<std::string> bundled_scene_names();
Scene bundled_scene(std::string_view name);

enum class MappingFilter { All, StaticOnly, DynamicOnly };

/// Dict-style text `{'name': [id, 'room'], ...}` in ascending id order.
std::string mapping_summary(const Scene& scene, MappingFilter filter = MappingFilter::All);

/// Quote a string the way a Python repr would for the mapping dict.
std::string py_quote(std::string_view s);

void apply_pick(WorldState& w, Agent agent, int object_id);
void apply_place(WorldState& w, Agent agent, int object_id, const PlaceTarget& target);
void record_motion(WorldState& w, Agent agent, std::string motion, int at_object_id,
                   std::string inhand);
void record_offer(WorldState& w, std::string item);
void advance_hour(WorldState& w);

Json world_to_json(const WorldState& w);
WorldState world_from_json(const Json& j);

}  // namespace hrc::world
