#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hrc/util.hpp"
#include "hrc/world.hpp"

// Structured records exchanged between the human agent, the robot and the
// scorers, plus the text formats used to render and parse them.
namespace hrc::rec {

/// 1: pick-and-place with a textual hint. 2: free-form motion with offered objects.
enum class CollabType { PickPlace = 1, Motion = 2 };
int as_int(CollabType t);
CollabType collab_from_int(int v);
/// Tasks per intention for the human: 3 pick-and-place or 5 motion tasks.
int human_task_count(CollabType t);

struct PickPlaceAct {
  int pick_id = -1;
  std::string pick_name;
  int place_id = -1;
  std::string place_name;
  bool operator==(const PickPlaceAct&) const = default;
};

struct MotionAct {
  int inter_obj_id = -1;
  std::string inter_obj_name;
  std::string inhand_obj_name;
  std::string motion;
  bool operator==(const MotionAct&) const = default;
};

/// Robot offer of a hand-held object (collaboration type 2).
struct OfferAct {
  std::string obj_name;
  bool operator==(const OfferAct&) const = default;
};

using Act = std::variant<PickPlaceAct, MotionAct, OfferAct>;

struct TaskRecord {
  int day = 1;
  int hour_slot = 0;
  int task_index = 0;
  std::string thought;
  std::string reason_human;
  std::string reason_intentions;
  std::string reason_tasks;
  Act act;

  bool operator==(const TaskRecord&) const = default;
};

struct IntentionRecord {
  int day = 1;
  int hour_slot = 0;
  std::string time_label;
  std::string text;
  std::string reason_human;
  std::string reason_intentions;
  std::string reason_tasks;
  std::string reason_vis;

  bool operator==(const IntentionRecord&) const = default;
};

struct FeedbackRecord {
  int day = 1;
  int hour_slot = 0;
  std::vector<bool> labels;
  std::vector<std::string> reasons;
};

/// One raw model completion kept for the day log.
struct RawCompletion {
  std::string template_id;
  int attempt = 0;
  std::string text;
  Json to_json() const;
};

struct Reflection {
  std::vector<std::string> notes;
  std::vector<TaskRecord> revised;
  /// True when every note says nothing was changed.
  bool unchanged() const;
};

// ---- prompt fragments

enum class Role { Human, Robot };
/// Bracketed act schema shown to the generator.
std::string act_format(CollabType type, Role role);
/// One-sentence task rule for the given type and role.
std::string task_rules(CollabType type, Role role);

// ---- rendering

std::string render_act(const Act& act);
std::string render_task(int number, const TaskRecord& t);
std::string render_tasks(const std::vector<TaskRecord>& tasks);
/// One-line human readable description used for embeddings and logs.
std::string describe(const TaskRecord& t);
std::string render_intention_block(const IntentionRecord& r);
std::string render_labels(const std::vector<bool>& labels);

// ---- parsing (throw ParseError carrying the raw text)

Act parse_act(std::string_view bracket_body, std::string_view raw);
IntentionRecord parse_intention(std::string_view text);
/// Tasks listed under `header` ("Tasks:" or "Revised Tasks:").
std::vector<TaskRecord> parse_tasks(std::string_view text, std::string_view header = "Tasks:");
std::vector<IntentionRecord> parse_intention_candidates(std::string_view text);
Reflection parse_reflection(std::string_view text);
/// `Tasks: [yes, no, ...]` plus the numbered reasons that follow.
FeedbackRecord parse_feedback(std::string_view text);

// ---- json

Json to_json(const Act& a);
Act act_from_json(const Json& j);
Json to_json(const TaskRecord& t);
TaskRecord task_from_json(const Json& j);
Json to_json(const IntentionRecord& r);
IntentionRecord intention_from_json(const Json& j);
Json to_json(const FeedbackRecord& f);
FeedbackRecord feedback_from_json(const Json& j);

/// Parses a dict-style mapping summary back into (name, id, room) entries.
struct MappingEntry {
  std::string name;
  int id = -1;
  std::string room;
};
std::vector<MappingEntry> parse_mapping(std::string_view dict_text);

}  // namespace hrc::rec
