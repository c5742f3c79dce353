#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hrc/util.hpp"

namespace hrc::gw {

using Vec = std::vector<double>;

struct ChatRequest {
  std::string template_id;
  std::string prompt;
  double temperature = 0.7;
  std::optional<std::uint64_t> seed;
  int max_tokens = 1024;
  /// Distinguishes repeated trials of the same prompt (Big-5 voting).
  int trial_index = 0;

  Json to_json() const;
};

/// Content address of a request against a given backend label.
std::string cache_key(const std::string& backend_id, const ChatRequest& req);
std::string embed_cache_key(const std::string& backend_id, std::string_view text);

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string id() const = 0;
  virtual std::string complete(const ChatRequest& req) = 0;
};

class EmbedBackend {
 public:
  virtual ~EmbedBackend() = default;
  virtual std::string id() const = 0;
  virtual Vec embed(std::string_view text) = 0;
};

/// Signed feature hashing over lowercase content words, L2-normalised.
/// Function words the hash embedder ignores.
bool is_stopword(const std::string& w);

class HashEmbedder final : public EmbedBackend {
 public:
  explicit HashEmbedder(int dim = 256, std::uint64_t seed = 0);
  std::string id() const override;
  Vec embed(std::string_view text) override;
  int dim() const { return dim_; }

 private:
  int dim_;
  std::uint64_t seed_;
};

/// Deterministic template-aware chat backend for offline runs.
class MockChat final : public ChatBackend {
 public:
  using Responder = std::function<std::optional<std::string>(const ChatRequest&)>;

  std::string id() const override { return "mock"; }
  std::string complete(const ChatRequest& req) override;

  /// Exact (template, prompt) fixture. Takes precedence over everything else.
  void add_fixture(const std::string& template_id, const std::string& prompt, std::string text);
  /// Fixture for any prompt of a template.
  void add_template_fixture(const std::string& template_id, std::string text);
  /// Responders are tried in registration order; the first engaged result wins.
  /// `front` puts `r` ahead of the responders already registered.
  void add_responder(const std::string& template_id, Responder r, bool front = false);

  std::size_t calls() const { return calls_.load(); }

 private:
  std::map<std::pair<std::string, std::string>, std::string> exact_;
  std::map<std::string, std::string> by_template_;
  std::map<std::string, std::vector<Responder>> responders_;
  std::atomic<std::size_t> calls_{0};
};

struct LiveConfig {
  std::string base_url = "http://127.0.0.1:8000/v1";
  std::string model = "gpt-4o-mini";
  std::string embed_model = "all-MiniLM-L6-v2";
  std::string api_key_env = "OPENAI_API_KEY";
  double timeout_s = 60.0;
};

/// OpenAI-compatible client for /chat/completions and /embeddings.
class LiveChat final : public ChatBackend {
 public:
  explicit LiveChat(LiveConfig cfg) : cfg_(std::move(cfg)) {}
  std::string id() const override { return "live:" + cfg_.model; }
  std::string complete(const ChatRequest& req) override;

 private:
  LiveConfig cfg_;
};

class LiveEmbed final : public EmbedBackend {
 public:
  explicit LiveEmbed(LiveConfig cfg) : cfg_(std::move(cfg)) {}
  std::string id() const override { return "live:" + cfg_.embed_model; }
  Vec embed(std::string_view text) override;

 private:
  LiveConfig cfg_;
};

/// Content-addressed response store; one file per key.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::optional<Json> get(const std::string& key) const;
  void put(const std::string& key, const Json& value) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path path_for(const std::string& key) const;
  std::filesystem::path dir_;
};

enum class Mode { Mock, Replay, Record, Live };
std::string_view to_string(Mode m);
Mode mode_from_string(std::string_view s);

struct GatewayConfig {
  Mode mode = Mode::Mock;
  /// Backend used in record mode and the label replay looks up: "mock" or "live".
  std::string backend = "mock";
  LiveConfig live;
  int retries = 3;
  int embed_dim = 256;
  std::uint64_t embed_seed = 0;
  /// Live embeddings instead of the local hash embedder.
  bool live_embeddings = false;

  Json to_json() const;
  static GatewayConfig from_json(const Json& j);
};

struct GatewayStats {
  std::size_t chat_calls = 0;
  std::size_t backend_calls = 0;
  std::size_t cache_hits = 0;
  std::size_t embed_calls = 0;
};

/// Uniform entry point for chat and embeddings with optional record/replay.
class Gateway {
 public:
  /// `mock` supplies responses in mock mode and for record mode with backend "mock".
  Gateway(GatewayConfig cfg, std::shared_ptr<MockChat> mock,
          std::optional<std::filesystem::path> cache_dir = std::nullopt);

  std::string chat(const ChatRequest& req);
  Vec embed(std::string_view text);

  const GatewayConfig& config() const { return cfg_; }
  std::string chat_backend_id() const;
  std::string embed_backend_id() const;
  GatewayStats stats() const;
  MockChat* mock() const { return mock_.get(); }

 private:
  std::string call_with_retry(const ChatRequest& req);

  GatewayConfig cfg_;
  std::shared_ptr<MockChat> mock_;
  std::unique_ptr<ChatBackend> live_chat_;
  std::unique_ptr<EmbedBackend> embedder_;
  std::optional<ResponseCache> chat_cache_;
  std::optional<ResponseCache> embed_cache_;

  mutable std::mutex embed_mu_;
  std::unordered_map<std::string, Vec> embed_memo_;
  std::atomic<std::size_t> chat_calls_{0}, backend_calls_{0}, cache_hits_{0}, embed_calls_{0};
};

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);

}  // namespace hrc::gw
