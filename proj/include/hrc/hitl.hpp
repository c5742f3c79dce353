#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "hrc/bench.hpp"

// Session service that lets a real person play the human role. Sessions are
// addressed by random ids, advance through a fixed phase machine, journal
// every accepted mutation and rebuild themselves from that journal on restart.
namespace hrc::hitl {

enum class Phase { AwaitingHuman, RobotActing, AwaitingFeedback, DayComplete };
std::string_view to_string(Phase p);

struct ServiceConfig {
  /// Base run configuration; session bodies override scene, type, policy, persona and seed.
  bench::RunConfig defaults;
  std::filesystem::path root = "hitl_sessions";
  /// Object and motion candidates listed in the state document.
  int top_k = 5;
  /// Test hook: adjusts each session's mock backend after the catalog responders are installed.
  std::function<void(gw::MockChat&)> customize_mock;
};

struct Event {
  std::uint64_t seq = 0;
  std::string type;
  Json data;
};

class Session;

class Service {
 public:
  /// Restores every session journaled under `cfg.root`.
  explicit Service(ServiceConfig cfg);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Body: {"scene", "collab_type"?, "policy"?, "persona"?, "seed"?}. Returns the new id.
  std::string create_session(const Json& body);
  /// Snapshot of the session state document.
  Json state(const std::string& id) const;
  /// Body: {"intention": text, "tasks": [task text, ...]}. Returns the robot's proposals.
  Json submit_turn(const std::string& id, const Json& body);
  /// Body: {"labels": [yes/no per proposal of the day, in state order], "reasons"?: [...]}.
  Json submit_feedback(const std::string& id, const Json& body);
  /// Object and motion candidates closest to `query`.
  Json candidates(const std::string& id, const std::string& query) const;
  /// Events with seq > `after`, waiting up to `wait` when there are none yet.
  std::vector<Event> events(const std::string& id, std::uint64_t after, std::chrono::milliseconds wait) const;
  std::filesystem::path run_dir(const std::string& id) const;
  std::vector<std::string> session_ids() const;
  /// Wakes every waiting event reader; used on shutdown.
  void shutdown();

 private:
  std::shared_ptr<Session> find(const std::string& id) const;

  ServiceConfig cfg_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// HTTP front end for the /v1 API, with the event stream served as SSE.
class HttpServer {
 public:
  explicit HttpServer(Service& s);
  ~HttpServer();
  /// Blocks serving requests until stop().
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it; call listen_after_bind() next.
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hrc::hitl
