#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hrc/classify.hpp"
#include "hrc/gateway.hpp"
#include "hrc/memory.hpp"
#include "hrc/persona.hpp"
#include "hrc/records.hpp"
#include "hrc/world.hpp"

// The robot side of an hour: observe the human's first task, imagine and
// filter intentions and tasks, act in the world, keep an inferred model of
// each human, and learn from end-of-day feedback.
namespace hrc::assist {

enum class Policy { Main, DirectPrompting, Oracle, Random, IntentionAgnostic, ContextAgnostic };
std::string_view to_string(Policy p);
Policy policy_from_string(std::string_view s);
std::vector<std::string> policy_names();

struct Ablation {
  bool no_traits = false;   // drop inferred Big Five and profile from prompts and features
  bool no_context = false;  // drop retrieved history from prompts and features
  bool operator==(const Ablation&) const = default;
};

/// What the robot sees of the human's first task.
struct ObservationRecord {
  int day = 1;
  int hour_slot = 0;
  rec::CollabType type = rec::CollabType::PickPlace;
  std::vector<world::Event> events;
  /// Task thought; present for type 1 only.
  std::optional<std::string> text_hint;
  /// Sentence form used in prompts and memory.
  std::string text;

  Json to_json() const;
  static ObservationRecord from_json(const Json& j);
};

/// Builds the observation from the executed first task and its events.
ObservationRecord observe(const world::Scene& scene, const rec::TaskRecord& first_task,
                          const std::vector<world::Event>& events, rec::CollabType type);

struct InferredProfile {
  persona::BigFive big5;
  std::string profile_text;
  bool known = false;
  world::DayClock last_updated;

  Json to_json() const;
  static InferredProfile from_json(const Json& j);
};

struct TaskCandidate {
  rec::TaskRecord task;
  bool valid = true;
  double score = 0.5;
  bool accepted = false;
  /// Set once the robot tried to carry the task out.
  std::optional<bool> executed_ok;
  std::string error;
};

struct IntentionCandidate {
  rec::IntentionRecord intention;
  double score = 0.5;
  bool survived = false;
  /// Its tasks were generated and (if accepted) carried out.
  bool presented = false;
  std::vector<TaskCandidate> tasks;
};

/// Context snapshot the robot used for prompts and classifier features.
struct FeatureContext {
  std::string profile;
  std::string big5;
  std::string prev_intentions;
  std::string prev_tasks;
  std::string time;
  int hour_slot = 0;
};

/// Everything the robot decided and did in one hour.
struct HourDecision {
  int day = 1;
  int hour_slot = 0;
  std::string persona;
  std::string policy;
  ObservationRecord observation;
  FeatureContext context;
  std::vector<IntentionCandidate> intentions;
  /// Index into `intentions` of the intention written to memory.
  std::optional<std::size_t> chosen;
  bool failed = false;
  std::string error;
  std::vector<std::string> warnings;
  std::vector<rec::RawCompletion> raw;

  /// Accepted tasks of presented intentions, in order (failed executions included).
  std::vector<rec::TaskRecord> accepted() const;
  /// Accepted tasks that were actually carried out; these go to the human for feedback.
  std::vector<rec::TaskRecord> carried_out() const;

  Json to_json() const;
  static HourDecision from_json(const Json& j);
};

/// Labels the human gave to `carried_out()`, spread back over all accepted
/// tasks: failed executions count as "no".
std::vector<bool> labels_for_accepted(const HourDecision& d, const std::vector<bool>& carried_out_labels);

struct AssistantConfig {
  Policy policy = Policy::Main;
  Ablation ablation;
  memory::RetrievalConfig retrieval;
  int retries = 3;
  /// Execute only the best-scoring surviving intention's tasks.
  bool cap_proposals = false;
  /// "reference" (local logistic model) or "remote" (chat-backed yes/no).
  std::string classifier = "reference";
  classify::FeatureConfig features;
  classify::TrainConfig train;
  std::uint64_t seed = 0;
  /// Most recent intentions and observations passed to traits inference.
  int traits_window = 24;

  void validate() const;
  Json to_json() const;
  static AssistantConfig from_json(const Json& j);
};

/// Examples produced by one day of feedback.
struct LearningUpdate {
  std::vector<classify::ClassifierExample> intention_examples;
  std::vector<classify::ClassifierExample> task_examples;
};

struct HourInput {
  int day = 1;
  int slot = 0;
  std::string persona;
  rec::CollabType type = rec::CollabType::PickPlace;
  ObservationRecord observation;
  /// The human's true intention; only the oracle policy reads it.
  std::optional<std::string> true_intention;
};

class Assistant {
 public:
  Assistant(gw::Gateway& g, AssistantConfig cfg);

  /// Runs the policy for one hour and carries out the accepted tasks in `w`.
  /// Generation failures mark the decision failed instead of throwing.
  HourDecision step(world::WorldState& w, const HourInput& in);

  /// Turns one day of decisions and per-hour feedback labels into training
  /// examples, adds them to the cumulative pool and refits the classifiers.
  LearningUpdate learn_from_feedback(const std::vector<HourDecision>& day,
                                     const std::vector<std::vector<bool>>& labels);

  const InferredProfile* profile(const std::string& persona) const;
  const memory::MemoryStore& memory() const { return memory_; }
  classify::Classifier& intention_classifier() { return *intention_clf_; }
  classify::Classifier& task_classifier() { return *task_clf_; }
  const AssistantConfig& config() const { return cfg_; }
  bool learns() const;

  /// Inferred profiles keyed by persona id.
  Json profiles_json() const;

  // Individual stages, exposed for tests and the session service.
  std::vector<rec::IntentionRecord> discover_intentions(const ObservationRecord& obs, const FeatureContext& ctx,
                                                        std::uint64_t seed, std::vector<rec::RawCompletion>& raw);
  std::vector<TaskCandidate> discover_tasks(const std::string& intention, const world::Scene& scene,
                                            rec::CollabType type, const FeatureContext& ctx, std::uint64_t seed,
                                            std::vector<rec::RawCompletion>& raw);
  InferredProfile infer_traits(const std::vector<std::string>& intentions, const std::vector<std::string>& tasks,
                               const InferredProfile& prior, std::vector<rec::RawCompletion>& raw);

 private:
  FeatureContext context_for(const HourInput& in, const gw::Vec& query) const;
  classify::ClassifierExample example(const FeatureContext& ctx, const std::string& candidate, bool label) const;
  void score_intentions(std::vector<IntentionCandidate>& cands, const FeatureContext& ctx);
  void filter_tasks(std::vector<TaskCandidate>& tasks, const FeatureContext& ctx, bool use_classifier);
  void act(world::WorldState& w, HourDecision& d, rec::CollabType type);
  void update_traits(const HourInput& in, HourDecision& d);

  gw::Gateway& g_;
  AssistantConfig cfg_;
  memory::MemoryStore memory_;
  std::unique_ptr<classify::Classifier> intention_clf_;
  std::unique_ptr<classify::Classifier> task_clf_;
  std::vector<classify::ClassifierExample> intention_pool_;
  std::vector<classify::ClassifierExample> task_pool_;
  std::map<std::string, InferredProfile> profiles_;
  std::map<std::string, std::vector<std::string>> seen_intentions_;
  std::map<std::string, std::vector<std::string>> seen_tasks_;
};

/// Candidate text the classifiers see for a task.
std::string task_candidate_text(const rec::TaskRecord& t);

}  // namespace hrc::assist
