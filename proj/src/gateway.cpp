#include "hrc/gateway.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <unordered_set>

#include <httplib.h>

#include "hrc/error.hpp"

namespace hrc::gw {

Json ChatRequest::to_json() const {
  Json j{{"template_id", template_id},
         {"prompt", prompt},
         {"temperature", temperature},
         {"max_tokens", max_tokens},
         {"trial_index", trial_index}};
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  return j;
}

std::string cache_key(const std::string& backend_id, const ChatRequest& req) {
  // nlohmann::json objects are key-sorted, so dump() is canonical.
  Json j = req.to_json();
  j["backend"] = backend_id;
  return sha256_hex(j.dump());
}

std::string embed_cache_key(const std::string& backend_id, std::string_view text) {
  return sha256_hex(Json{{"backend", backend_id}, {"text", text}}.dump());
}

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    throw ValidationError("vector dimension mismatch: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

// ---------------------------------------------------------------- embedder

namespace {

const std::unordered_set<std::string>& stopwords() {
  static const std::unordered_set<std::string> s = {
      "a",    "an",   "the",  "to",   "for",  "of",   "and",  "or",   "on",  "in",
      "at",   "with", "by",   "from", "into", "is",   "are",  "was",  "be",  "it",
      "its",  "this", "that", "as",   "i",    "my",   "me",   "you",  "your"};
  return s;
}

}  // namespace

bool is_stopword(const std::string& w) { return stopwords().count(w) > 0; }

HashEmbedder::HashEmbedder(int dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim < 2) throw ValidationError("embedding dimension must be at least 2");
}

std::string HashEmbedder::id() const {
  return "hash:" + std::to_string(dim_) + ":" + std::to_string(seed_);
}

Vec HashEmbedder::embed(std::string_view text) {
  auto tokens = text::words(text);
  std::vector<std::string> content;
  for (auto& t : tokens) {
    if (!stopwords().count(t)) content.push_back(t);
  }
  if (content.empty()) content = tokens;
  if (content.empty()) {
    auto t = text::trim(text);
    if (t.empty()) throw ValidationError("cannot embed empty text");
    content.push_back(t);
  }
  Vec v(static_cast<std::size_t>(dim_), 0.0);
  for (const auto& w : content) {
    std::uint64_t x = mix64(fnv1a64(w) ^ mix64(seed_));
    double sign = (x >> 40) & 1 ? 1.0 : -1.0;
    v[x % static_cast<std::uint64_t>(dim_)] += sign;
  }
  double n = norm(v);
  if (n == 0) {
    // Every token cancelled out; fall back to a single deterministic axis.
    v[fnv1a64(text) % static_cast<std::uint64_t>(dim_)] = 1.0;
    return v;
  }
  for (auto& x : v) x /= n;
  return v;
}

// ---------------------------------------------------------------- mock

std::string MockChat::complete(const ChatRequest& req) {
  ++calls_;
  if (auto it = exact_.find({req.template_id, req.prompt}); it != exact_.end()) return it->second;
  if (auto it = by_template_.find(req.template_id); it != by_template_.end()) return it->second;
  if (auto it = responders_.find(req.template_id); it != responders_.end()) {
    for (const auto& r : it->second) {
      if (auto out = r(req)) return *out;
    }
  }
  throw GatewayError("mock backend has no response for template '" + req.template_id + "'",
                     false, 1);
}

void MockChat::add_fixture(const std::string& template_id, const std::string& prompt,
                           std::string text) {
  exact_[{template_id, prompt}] = std::move(text);
}

void MockChat::add_template_fixture(const std::string& template_id, std::string text) {
  by_template_[template_id] = std::move(text);
}

void MockChat::add_responder(const std::string& template_id, Responder r, bool front) {
  auto& list = responders_[template_id];
  if (front) {
    list.insert(list.begin(), std::move(r));
  } else {
    list.push_back(std::move(r));
  }
}

// ---------------------------------------------------------------- live

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix, e.g. /v1
};

Endpoint split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ValidationError("base_url needs a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  Endpoint e;
  e.origin = url.substr(0, path_start);
  e.prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!e.prefix.empty() && e.prefix.back() == '/') e.prefix.pop_back();
  return e;
}

Json post_json(const LiveConfig& cfg, const std::string& path, const Json& body) {
  auto ep = split_url(cfg.base_url);
  httplib::Client cli(ep.origin);
  auto secs = static_cast<time_t>(cfg.timeout_s);
  auto usecs = static_cast<time_t>((cfg.timeout_s - static_cast<double>(secs)) * 1e6);
  cli.set_connection_timeout(secs, usecs);
  cli.set_read_timeout(secs, usecs);
  cli.set_write_timeout(secs, usecs);
  httplib::Headers headers;
  if (const char* key = std::getenv(cfg.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  auto res = cli.Post(ep.prefix + path, headers, body.dump(), "application/json");
  if (!res) {
    throw GatewayError("request to " + cfg.base_url + path +
                           " failed: " + httplib::to_string(res.error()),
                       true, 1);
  }
  if (res->status == 429 || res->status >= 500) {
    throw GatewayError("backend returned HTTP " + std::to_string(res->status), true, 1);
  }
  if (res->status != 200) {
    throw GatewayError("backend returned HTTP " + std::to_string(res->status) + ": " + res->body,
                       false, 1);
  }
  try {
    return Json::parse(res->body);
  } catch (const Json::parse_error& e) {
    throw GatewayError(std::string("malformed backend response: ") + e.what(), true, 1);
  }
}

}  // namespace

std::string LiveChat::complete(const ChatRequest& req) {
  Json body{{"model", cfg_.model},
            {"messages", Json::array({{{"role", "user"}, {"content", req.prompt}}})},
            {"temperature", req.temperature},
            {"max_tokens", req.max_tokens}};
  if (req.seed) body["seed"] = *req.seed;
  auto res = post_json(cfg_, "/chat/completions", body);
  try {
    return res.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const Json::exception& e) {
    throw GatewayError(std::string("chat response lacks choices[0].message.content: ") + e.what(),
                       false, 1);
  }
}

Vec LiveEmbed::embed(std::string_view text) {
  if (text::trim(text).empty()) throw ValidationError("cannot embed empty text");
  auto res = post_json(cfg_, "/embeddings", Json{{"model", cfg_.embed_model}, {"input", text}});
  Vec v;
  try {
    v = res.at("data").at(0).at("embedding").get<Vec>();
  } catch (const Json::exception& e) {
    throw GatewayError(std::string("embedding response malformed: ") + e.what(), false, 1);
  }
  double n = norm(v);
  if (n == 0) throw GatewayError("backend returned a zero embedding", false, 1);
  for (auto& x : v) x /= n;
  return v;
}

// ---------------------------------------------------------------- cache

std::filesystem::path ResponseCache::path_for(const std::string& key) const {
  return dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<Json> ResponseCache::get(const std::string& key) const {
  auto p = path_for(key);
  if (!std::filesystem::exists(p)) return std::nullopt;
  return fsio::read_json(p);
}

void ResponseCache::put(const std::string& key, const Json& value) const {
  fsio::write_file_atomic(path_for(key), value.dump());
}

// ---------------------------------------------------------------- gateway

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Mock: return "mock";
    case Mode::Replay: return "replay";
    case Mode::Record: return "record";
    case Mode::Live: return "live";
  }
  return "?";
}

Mode mode_from_string(std::string_view s) {
  if (s == "mock") return Mode::Mock;
  if (s == "replay") return Mode::Replay;
  if (s == "record") return Mode::Record;
  if (s == "live") return Mode::Live;
  throw ValidationError("unknown gateway mode '" + std::string(s) + "'");
}

Json GatewayConfig::to_json() const {
  return Json{{"mode", to_string(mode)},
              {"backend", backend},
              {"base_url", live.base_url},
              {"model", live.model},
              {"embed_model", live.embed_model},
              {"api_key_env", live.api_key_env},
              {"timeout_s", live.timeout_s},
              {"retries", retries},
              {"embed_dim", embed_dim},
              {"embed_seed", embed_seed},
              {"live_embeddings", live_embeddings}};
}

GatewayConfig GatewayConfig::from_json(const Json& j) {
  GatewayConfig c;
  c.mode = mode_from_string(j.value("mode", "mock"));
  c.backend = j.value("backend", c.mode == Mode::Live ? "live" : "mock");
  c.live.base_url = j.value("base_url", c.live.base_url);
  c.live.model = j.value("model", c.live.model);
  c.live.embed_model = j.value("embed_model", c.live.embed_model);
  c.live.api_key_env = j.value("api_key_env", c.live.api_key_env);
  c.live.timeout_s = j.value("timeout_s", c.live.timeout_s);
  c.retries = j.value("retries", c.retries);
  c.embed_dim = j.value("embed_dim", c.embed_dim);
  c.embed_seed = j.value("embed_seed", c.embed_seed);
  c.live_embeddings = j.value("live_embeddings", c.live_embeddings);
  if (c.backend != "mock" && c.backend != "live") {
    throw ValidationError("gateway backend must be 'mock' or 'live'");
  }
  if (c.retries < 1) throw ValidationError("gateway retries must be at least 1");
  return c;
}

Gateway::Gateway(GatewayConfig cfg, std::shared_ptr<MockChat> mock,
                 std::optional<std::filesystem::path> cache_dir)
    : cfg_(std::move(cfg)), mock_(std::move(mock)) {
  bool wants_live = cfg_.mode == Mode::Live || (cfg_.mode == Mode::Record && cfg_.backend == "live");
  if (wants_live) live_chat_ = std::make_unique<LiveChat>(cfg_.live);
  if (!wants_live && cfg_.mode != Mode::Replay && !mock_) {
    throw ValidationError("gateway mode '" + std::string(to_string(cfg_.mode)) +
                          "' needs a mock backend");
  }
  if (cfg_.live_embeddings) {
    embedder_ = std::make_unique<LiveEmbed>(cfg_.live);
  } else {
    embedder_ = std::make_unique<HashEmbedder>(cfg_.embed_dim, cfg_.embed_seed);
  }
  if (cfg_.mode == Mode::Record || cfg_.mode == Mode::Replay) {
    if (!cache_dir) throw ValidationError("record/replay gateway needs a cache directory");
    chat_cache_.emplace(*cache_dir / "chat");
    if (cfg_.live_embeddings) embed_cache_.emplace(*cache_dir / "embed");
  }
}

std::string Gateway::chat_backend_id() const {
  return cfg_.backend == "live" ? "live:" + cfg_.live.model : "mock";
}

std::string Gateway::embed_backend_id() const { return embedder_->id(); }

std::string Gateway::call_with_retry(const ChatRequest& req) {
  ChatBackend* backend = live_chat_ ? live_chat_.get() : static_cast<ChatBackend*>(mock_.get());
  for (int attempt = 1;; ++attempt) {
    try {
      ++backend_calls_;
      return backend->complete(req);
    } catch (const GatewayError& e) {
      if (!e.retryable() || attempt >= cfg_.retries) {
        throw GatewayError(e.what(), e.retryable(), attempt);
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50 * attempt));
    }
  }
}

std::string Gateway::chat(const ChatRequest& req) {
  if (text::trim(req.prompt).empty()) throw ValidationError("chat request has an empty prompt");
  ++chat_calls_;
  switch (cfg_.mode) {
    case Mode::Mock:
    case Mode::Live:
      return call_with_retry(req);
    case Mode::Replay: {
      auto key = cache_key(chat_backend_id(), req);
      auto hit = chat_cache_->get(key);
      if (!hit) throw CacheMissError(key);
      ++cache_hits_;
      return hit->at("response").get<std::string>();
    }
    case Mode::Record: {
      auto key = cache_key(chat_backend_id(), req);
      if (auto hit = chat_cache_->get(key)) {
        ++cache_hits_;
        return hit->at("response").get<std::string>();
      }
      auto text = call_with_retry(req);
      Json rec = req.to_json();
      rec["backend"] = chat_backend_id();
      rec["response"] = text;
      chat_cache_->put(key, rec);
      return text;
    }
  }
  throw Error("unreachable gateway mode");
}

Vec Gateway::embed(std::string_view text) {
  ++embed_calls_;
  std::string key(text);
  {
    std::lock_guard lock(embed_mu_);
    if (auto it = embed_memo_.find(key); it != embed_memo_.end()) return it->second;
  }
  Vec v;
  if (embed_cache_) {
    auto ckey = embed_cache_key(embedder_->id(), text);
    if (auto hit = embed_cache_->get(ckey)) {
      v = hit->at("embedding").get<Vec>();
    } else if (cfg_.mode == Mode::Replay) {
      throw CacheMissError(ckey);
    } else {
      v = embedder_->embed(text);
      embed_cache_->put(ckey, Json{{"text", text}, {"embedding", v}});
    }
  } else {
    v = embedder_->embed(text);
  }
  std::lock_guard lock(embed_mu_);
  embed_memo_.emplace(std::move(key), v);
  return v;
}

GatewayStats Gateway::stats() const {
  return {chat_calls_.load(), backend_calls_.load(), cache_hits_.load(), embed_calls_.load()};
}

}  // namespace hrc::gw
