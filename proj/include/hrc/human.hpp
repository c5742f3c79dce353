#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <memory>
#include <string>
#include <vector>

#include "hrc/gateway.hpp"
#include "hrc/memory.hpp"
#include "hrc/persona.hpp"
#include "hrc/records.hpp"
#include "hrc/scenario.hpp"
#include "hrc/world.hpp"

namespace hrc::human {

/// Everything a human source needs to produce one hour.
struct HourContext {
  int day = 1;
  int slot = 0;
  rec::CollabType type = rec::CollabType::PickPlace;
  const world::Scene* scene = nullptr;
  /// Sampling seed for this (persona, day, slot).
  std::uint64_t seed = 0;
};

using RawCompletion = rec::RawCompletion;

struct HumanTurn {
  rec::IntentionRecord intention;
  std::vector<rec::TaskRecord> tasks;
  std::vector<std::string> warnings;
  std::vector<RawCompletion> raw;
};

/// Schema and scene checks for a task list. Returns one message per problem.
std::vector<std::string> validate_tasks(const std::vector<rec::TaskRecord>& tasks, rec::CollabType type,
                                        const world::Scene& scene);

/// Soft check: intention text naming a scene object yields a warning.
std::optional<std::string> intention_warning(const rec::IntentionRecord& r, const world::Scene& scene);

/// Applies the human's tasks to the world. Type 1 picks and places; type 2
/// records a motion next to the interacted object. World errors propagate.
std::vector<world::Event> execute_tasks(world::WorldState& w, const std::vector<rec::TaskRecord>& tasks);

/// Bundled motion labels for collaboration type 2, one per line of motions.txt.
const std::vector<std::string>& motion_labels();

/// Parses the console task grammar into a task bound to `scene`:
///   type 1: `<object> -> <target>`
///   type 2: `<motion> at <static object> with <in-hand object>`
/// Object references match a scene name exactly or by class word (lowest id).
rec::TaskRecord parse_task_text(std::string_view line, rec::CollabType type, const world::Scene& scene);

class HumanSource {
 public:
  virtual ~HumanSource() = default;
  virtual std::string persona_id() const = 0;
  /// Called before slot 0 of every day.
  virtual void start_day(int day) = 0;
  /// Intention and validated tasks for the hour. Throws EpisodeError when the
  /// hour cannot be produced.
  virtual HumanTurn propose(const HourContext& ctx) = 0;
  /// Stores the finished hour in the source's own memory, if any.
  virtual void remember(const HumanTurn& turn) = 0;
  /// One label per robot task. Zero robot tasks never reach the model.
  virtual rec::FeedbackRecord feedback(const rec::IntentionRecord& intention,
                                       const std::vector<rec::TaskRecord>& human_tasks,
                                       const std::vector<rec::TaskRecord>& robot_tasks,
                                       std::vector<RawCompletion>* raw) = 0;
};

struct LlmHumanConfig {
  int retries = 3;
  memory::RetrievalConfig retrieval;
  /// Motion labels offered to the type-2 task prompt.
  int motion_choices = 10;
};

/// Prompt-driven human: proposal, two reflection passes and feedback through
/// the gateway, with a private memory that resets every morning.
class LlmHuman final : public HumanSource {
 public:
  LlmHuman(gw::Gateway& g, persona::PersonaRecord persona, LlmHumanConfig cfg = {});

  std::string persona_id() const override { return persona_.persona_id; }
  void start_day(int day) override;
  HumanTurn propose(const HourContext& ctx) override;
  void remember(const HumanTurn& turn) override;
  rec::FeedbackRecord feedback(const rec::IntentionRecord& intention,
                               const std::vector<rec::TaskRecord>& human_tasks,
                               const std::vector<rec::TaskRecord>& robot_tasks,
                               std::vector<RawCompletion>* raw) override;

  /// Decomposes a given intention into validated tasks (also used by offline schedules).
  std::vector<rec::TaskRecord> decompose(const rec::IntentionRecord& intention, const HourContext& ctx,
                                         HumanTurn& log);
  const memory::MemoryStore& memory() const { return memory_; }

 private:
  std::pair<std::string, std::string> history(const std::string& query, world::DayClock now);
  std::string chat(const std::string& template_id, const std::map<std::string, std::string>& vars, const HourContext& ctx,
                   int attempt, HumanTurn& log);

  gw::Gateway& g_;
  persona::PersonaRecord persona_;
  LlmHumanConfig cfg_;
  memory::MemoryStore memory_;
};

/// Gateway-free human driven straight from the scenario catalog.
class ScriptedHuman final : public HumanSource {
 public:
  ScriptedHuman(const scenario::Catalog& cat, std::string persona_id);

  std::string persona_id() const override { return persona_id_; }
  void start_day(int) override {}
  HumanTurn propose(const HourContext& ctx) override;
  void remember(const HumanTurn&) override {}
  rec::FeedbackRecord feedback(const rec::IntentionRecord& intention,
                               const std::vector<rec::TaskRecord>& human_tasks,
                               const std::vector<rec::TaskRecord>& robot_tasks,
                               std::vector<RawCompletion>* raw) override;

 private:
  const scenario::Catalog& cat_;
  std::string persona_id_;
};

/// One recorded hour of a real person's schedule.
struct ScheduleEntry {
  int day = 1;
  int slot = 0;
  std::string intention;
  /// Console-grammar task lines; empty means the tasks are generated.
  std::vector<std::string> tasks;
};

/// Reads a JSONL schedule (`{"day", "hour", "intention", "tasks"?}` per line).
/// `hour` is a slot index or a clock label such as "9 am". Every listed day
/// must cover all twelve slots exactly once.
std::vector<ScheduleEntry> read_schedule(const std::filesystem::path& p);

/// Replays a recorded schedule; missing task lists are decomposed by `decomposer`.
class OfflineScheduleHuman final : public HumanSource {
 public:
  OfflineScheduleHuman(std::vector<ScheduleEntry> entries, std::unique_ptr<LlmHuman> decomposer);

  std::string persona_id() const override { return decomposer_->persona_id(); }
  int days() const;
  void start_day(int day) override { decomposer_->start_day(day); }
  HumanTurn propose(const HourContext& ctx) override;
  void remember(const HumanTurn& turn) override { decomposer_->remember(turn); }
  rec::FeedbackRecord feedback(const rec::IntentionRecord& intention,
                               const std::vector<rec::TaskRecord>& human_tasks,
                               const std::vector<rec::TaskRecord>& robot_tasks,
                               std::vector<RawCompletion>* raw) override {
    return decomposer_->feedback(intention, human_tasks, robot_tasks, raw);
  }

 private:
  std::vector<ScheduleEntry> entries_;
  std::unique_ptr<LlmHuman> decomposer_;
};

}  // namespace hrc::human
