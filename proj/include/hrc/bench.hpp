#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hrc/assistant.hpp"
#include "hrc/eval.hpp"
#include "hrc/gateway.hpp"
#include "hrc/human.hpp"
#include "hrc/scenario.hpp"

namespace hrc::bench {

/// One simulated day: which house and which human.
struct ScheduleDay {
  int day = 1;
  std::string scene;
  std::string persona;
  bool operator==(const ScheduleDay&) const = default;
};

/// Days per evaluation setting: 5, 5, 9, 9.
int setting_days(int setting);
std::size_t setting_scene_count(int setting);
std::size_t setting_persona_count(int setting);

/// Setting 1 repeats one pair, 2 walks through five scenes, 3 cycles three
/// personas in one scene, 4 cycles the personas inside each of three scenes.
std::vector<ScheduleDay> schedule(int setting, const std::vector<std::string>& scenes,
                                  const std::vector<std::string>& personas);

struct RunConfig {
  int setting = 1;
  rec::CollabType collab_type = rec::CollabType::PickPlace;
  /// Bundled scene names or scene JSON paths. Empty picks the setting default.
  std::vector<std::string> scenes;
  /// Catalog persona ids or persona-record JSON paths. Empty picks the default.
  std::vector<std::string> personas;
  std::uint64_t seed = 0;
  gw::GatewayConfig gateway;
  assist::AssistantConfig assistant;
  /// "llm" (prompted human), "scripted" (catalog table), "offline" (recorded schedule)
  /// or "hitl" (a person, through the session service).
  std::string human = "llm";
  std::string schedule_file;
  /// Alternate scenario catalog (JSON path); empty uses the bundled one.
  std::string catalog;
  double theta = 0.6;
  /// Evaluators to compute; "predicate", "judge", "feedback".
  std::vector<std::string> evaluators = {"predicate", "judge", "feedback"};
  /// Stop after this many days (0 = the setting's full length).
  int max_days = 0;

  /// Fills in default scenes and personas for the setting.
  void resolve_defaults();
  void validate() const;
  Json to_json() const;
  static RunConfig from_json(const Json& j);
};

/// Scores of one hour for every evaluator, computed from stored records.
struct HourInputs {
  std::string true_intention;
  std::vector<rec::TaskRecord> human_tasks;
  std::vector<rec::TaskRecord> robot_accepted;
  std::vector<bool> feedback_accepted;  // aligned with robot_accepted
  std::vector<bool> judge_labels;       // aligned with robot_accepted
};
std::map<std::string, eval::HourScore> score_hour(const HourInputs& in, const world::Scene& scene,
                                                  rec::CollabType type, gw::Gateway& g, double theta,
                                                  const std::vector<std::string>& evaluators);

/// One played hour before end-of-day feedback.
struct HourRecord {
  int slot = 0;
  /// The human side failed; the hour is logged but not scored.
  bool skipped = false;
  std::string error;
  human::HumanTurn turn;
  assist::HourDecision decision;
  std::vector<bool> judge;
  std::vector<std::string> warnings;
};

/// The human executes the first task, the robot observes and acts, the human
/// executes the rest, and the judge (if enabled) labels the robot's tasks.
HourRecord play_hour(const RunConfig& cfg, world::WorldState& w, assist::Assistant& robot, gw::Gateway& g,
                     const std::string& persona, int day, int slot, human::HumanTurn turn);

/// Labels for one hour's `decision.carried_out()`.
using FeedbackFn = std::function<rec::FeedbackRecord(HourRecord&, std::vector<rec::RawCompletion>& raw)>;

struct DayOutcome {
  Json log;
  std::vector<eval::HourRow> rows;
  assist::LearningUpdate update;
};

/// Collects feedback for every played hour, trains the robot once and scores the day.
DayOutcome finish_day(const RunConfig& cfg, const ScheduleDay& day, const world::Scene& scene,
                      std::vector<HourRecord>& hours, const FeedbackFn& feedback, assist::Assistant& robot,
                      gw::Gateway& g);

/// Writes the day log, classifier states, examples, profiles and robot memory.
void persist_day(const std::filesystem::path& dir, int day, const DayOutcome& out, assist::Assistant& robot);

/// Header fields written at the top of metrics/summary.json.
Json run_header(const RunConfig& cfg, int days);

struct RunResult {
  std::filesystem::path dir;
  std::vector<eval::HourRow> rows;
  eval::RunMetrics metrics;
  /// Exact bytes of metrics/summary.json.
  std::string summary;
};

struct RunOptions {
  /// Where recorded responses live; defaults to `<run dir>/cache`.
  std::optional<std::filesystem::path> cache_dir;
  /// Called after every finished day.
  std::function<void(int day, const eval::RunMetrics&)> on_day;
};

const scenario::Catalog& load_catalog(const RunConfig& cfg);
world::Scene resolve_scene(const std::string& name_or_path);
persona::PersonaRecord resolve_persona(const std::string& id_or_path, const scenario::Catalog& cat);

/// Builds the gateway a run uses (the mock responders come from the catalog).
std::unique_ptr<gw::Gateway> make_gateway(const RunConfig& cfg, const std::optional<std::filesystem::path>& cache_dir);

/// Runs every scheduled day and writes the run directory.
RunResult run(const RunConfig& cfg, const std::filesystem::path& dir, const RunOptions& opt = {});

/// Re-runs `src` against its recorded responses only (strict replay) into `dst`.
RunResult replay(const std::filesystem::path& src, const std::filesystem::path& dst);

/// Recomputes metrics from the day logs of a run directory.
eval::RunMetrics rescore(const std::filesystem::path& dir);
std::vector<eval::HourRow> rescore_rows(const std::filesystem::path& dir);

/// Writes summary.json, hours.csv, within_day.csv, across_days.csv and report.txt
/// under `<dir>/metrics`; returns the summary bytes.
std::string write_metrics(const std::filesystem::path& dir, const std::vector<eval::HourRow>& rows,
                          const eval::RunMetrics& m, const Json& header);

/// Human-readable report of a finished run directory.
std::string report(const std::filesystem::path& dir);

}  // namespace hrc::bench
