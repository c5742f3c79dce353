// Command line front end: run, schedule, replay, report, serve.
#include <CLI11.hpp>

#include <iostream>

#include "hrc/bench.hpp"
#include "hrc/error.hpp"
#include "hrc/hitl.hpp"
#include "hrc/util.hpp"

using namespace hrc;
namespace fs = std::filesystem;

namespace {

struct Flags {
  int setting = 1;
  int type = 1;
  std::vector<std::string> scenes;
  std::vector<std::string> personas;
  std::uint64_t seed = 0;
  std::string policy = "main";
  std::string gateway = "mock";
  std::string backend = "mock";
  std::string base_url;
  std::string model;
  std::string api_key_env;
  bool live_embeddings = false;
  std::string human = "llm";
  std::string schedule_file;
  std::string catalog;
  double theta = 0.6;
  std::vector<std::string> evaluators;
  int max_days = 0;
  bool no_traits = false;
  bool no_context = false;
  bool cap = false;
  std::string classifier = "reference";
  std::string config_file;
};

void add_run_flags(CLI::App* app, Flags& f) {
  app->add_option("--setting", f.setting, "Evaluation setting 1-4")->check(CLI::Range(1, 4));
  app->add_option("--type", f.type, "Collaboration type: 1 pick-and-place, 2 hand-over")->check(CLI::Range(1, 2));
  app->add_option("--scene", f.scenes, "Scene name or JSON path (repeat for multi-scene settings)");
  app->add_option("--persona", f.personas, "Persona id or JSON path (repeat for multi-persona settings)");
  app->add_option("--seed", f.seed, "Run seed");
  app->add_option("--policy", f.policy, "Robot policy")->check(CLI::IsMember(assist::policy_names()));
  app->add_option("--gateway", f.gateway, "Gateway mode: mock, record, replay, live")
      ->check(CLI::IsMember({"mock", "record", "replay", "live"}));
  app->add_option("--backend", f.backend, "Backend recorded or replayed: mock or live")
      ->check(CLI::IsMember({"mock", "live"}));
  app->add_option("--base-url", f.base_url, "OpenAI-compatible endpoint for the live backend");
  app->add_option("--model", f.model, "Chat model for the live backend");
  app->add_option("--api-key-env", f.api_key_env, "Environment variable holding the API key");
  app->add_flag("--live-embeddings", f.live_embeddings, "Use the live embeddings endpoint");
  app->add_option("--human", f.human, "Human source: llm, scripted, offline")
      ->check(CLI::IsMember({"llm", "scripted", "offline"}));
  app->add_option("--schedule", f.schedule_file, "Recorded JSONL schedule for --human offline");
  app->add_option("--catalog", f.catalog, "Alternate scenario catalog JSON");
  app->add_option("--theta", f.theta, "Similarity threshold of the type-2 predicate");
  app->add_option("--evaluators", f.evaluators, "Subset of predicate, judge, feedback")->delimiter(',');
  app->add_option("--max-days", f.max_days, "Stop after this many days");
  app->add_flag("--no-traits", f.no_traits, "Ablation: ignore the inferred traits");
  app->add_flag("--no-context", f.no_context, "Ablation: ignore retrieved history");
  app->add_flag("--cap", f.cap, "Carry out only the best surviving intention's tasks");
  app->add_option("--classifier", f.classifier, "reference or remote")->check(CLI::IsMember({"reference", "remote"}));
  app->add_option("--config", f.config_file, "JSON config; its fields override the flags");
}

bench::RunConfig to_config(const Flags& f) {
  bench::RunConfig c;
  c.setting = f.setting;
  c.collab_type = rec::collab_from_int(f.type);
  c.scenes = f.scenes;
  c.personas = f.personas;
  c.seed = f.seed;
  c.gateway.mode = gw::mode_from_string(f.gateway);
  c.gateway.backend = f.backend;
  if (!f.base_url.empty()) c.gateway.live.base_url = f.base_url;
  if (!f.model.empty()) c.gateway.live.model = f.model;
  if (!f.api_key_env.empty()) c.gateway.live.api_key_env = f.api_key_env;
  c.gateway.live_embeddings = f.live_embeddings;
  c.assistant.policy = assist::policy_from_string(f.policy);
  c.assistant.ablation = {f.no_traits, f.no_context};
  c.assistant.cap_proposals = f.cap;
  c.assistant.classifier = f.classifier;
  c.human = f.human;
  c.schedule_file = f.schedule_file;
  c.catalog = f.catalog;
  c.theta = f.theta;
  if (!f.evaluators.empty()) c.evaluators = f.evaluators;
  c.max_days = f.max_days;
  if (!f.config_file.empty()) {
    Json merged = c.to_json();
    merged.merge_patch(fsio::read_json(f.config_file));
    return bench::RunConfig::from_json(merged);
  }
  c.resolve_defaults();
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Household human-robot collaboration benchmark"};
  app.require_subcommand(1);

  Flags run_flags;
  std::string out_dir;
  std::string cache_dir;
  auto* run = app.add_subcommand("run", "Run a benchmark and write a run directory");
  add_run_flags(run, run_flags);
  run->add_option("-o,--out", out_dir, "Run directory")->required();
  run->add_option("--cache", cache_dir, "Recorded-response directory (default <out>/cache)");

  Flags sched_flags;
  auto* sched = app.add_subcommand("schedule", "Print the (day, scene, persona) schedule");
  add_run_flags(sched, sched_flags);

  std::string replay_src, replay_dst;
  auto* rep = app.add_subcommand("replay", "Re-run a recorded run strictly from its cache");
  rep->add_option("src", replay_src, "Recorded run directory")->required()->check(CLI::ExistingDirectory);
  rep->add_option("dst", replay_dst, "Output run directory")->required();

  std::string report_dir;
  bool rescore = false;
  auto* rpt = app.add_subcommand("report", "Print the report of a run directory");
  rpt->add_option("dir", report_dir, "Run directory")->required()->check(CLI::ExistingDirectory);
  rpt->add_flag("--rescore", rescore, "Recompute metrics from the day logs first");

  Flags serve_flags;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string sessions_dir = "hitl_sessions";
  auto* serve = app.add_subcommand("serve", "Start the human-in-the-loop session service");
  add_run_flags(serve, serve_flags);
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");
  serve->add_option("--sessions", sessions_dir, "Directory for session checkpoints and run directories");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto cfg = to_config(run_flags);
      bench::RunOptions opt;
      if (!cache_dir.empty()) opt.cache_dir = fs::path(cache_dir);
      opt.on_day = [](int day, const eval::RunMetrics& m) {
        std::cerr << "day " << day << " done";
        for (const auto& [ev, s] : m.evaluators) {
          if (!s.across_days.empty()) std::cerr << "  " << ev << " F1 " << s.across_days.back();
        }
        std::cerr << "\n";
      };
      bench::run(cfg, out_dir, opt);
      std::cout << bench::report(out_dir);
    } else if (*sched) {
      auto cfg = to_config(sched_flags);
      for (const auto& d : bench::schedule(cfg.setting, cfg.scenes, cfg.personas)) {
        std::cout << d.day << "\t" << d.scene << "\t" << d.persona << "\n";
      }
    } else if (*rep) {
      bench::replay(replay_src, replay_dst);
      std::cout << bench::report(replay_dst);
    } else if (*rpt) {
      if (rescore) {
        auto rows = bench::rescore_rows(report_dir);
        auto summary = fsio::read_json(fs::path(report_dir) / "metrics" / "summary.json");
        summary.erase("metrics");
        bench::write_metrics(report_dir, rows, eval::aggregate(rows), summary);
      }
      std::cout << bench::report(report_dir);
    } else if (*serve) {
      hitl::ServiceConfig sc;
      sc.defaults = to_config(serve_flags);
      sc.root = sessions_dir;
      hitl::Service service(sc);
      std::cerr << "listening on http://" << host << ":" << port << "/v1\n";
      hitl::HttpServer server(service);
      if (!server.listen(host, port)) {
        std::cerr << "error: cannot bind " << host << ":" << port << "\n";
        return 1;
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
