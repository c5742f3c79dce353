#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hrc/gateway.hpp"
#include "hrc/world.hpp"

namespace hrc::memory {

enum class Kind { Intention, Task };
std::string_view to_string(Kind k);
Kind kind_from_string(std::string_view s);

struct MemoryItem {
  Kind kind = Kind::Intention;
  std::string text;
  int day = 1;
  int hour_slot = 0;
  std::optional<int> task_index;
  gw::Vec embedding;

  world::DayClock clock() const { return {day, hour_slot}; }
};

struct RetrievalConfig {
  double decay = 0.95;
  int k_intentions = 3;
  int k_tasks = 5;

  void validate() const;
  Json to_json() const;
  static RetrievalConfig from_json(const Json& j);
};

/// Cosine of two unit vectors.
double relevance(const gw::Vec& query, const gw::Vec& item);

/// decay^(elapsed hour slots). Throws when `then` is after `now`.
double recency(world::DayClock now, world::DayClock then, double decay);

struct Scored {
  const MemoryItem* item = nullptr;
  double score = 0;
};

class MemoryStore {
 public:
  /// Appends an item; the embedding must be unit-norm.
  const MemoryItem& add(MemoryItem item);

  /// Top-k of `kind` by recency x relevance; ties prefer newer, then lower task index.
  std::vector<Scored> retrieve(const gw::Vec& query, world::DayClock now, Kind kind, int k,
                               double decay = 0.95) const;

  /// Hides every item of the given kinds dated before `day` from retrieval.
  void reset_daily(const std::vector<Kind>& kinds, int day);

  const std::vector<MemoryItem>& items() const { return items_; }
  std::size_t visible_count(Kind kind) const;

  /// Append-only JSONL: one record per item, embedding included.
  void save_jsonl(const std::filesystem::path& p) const;
  static MemoryStore load_jsonl(const std::filesystem::path& p);

 private:
  bool visible(const MemoryItem& m) const;

  std::vector<MemoryItem> items_;
  int intention_floor_ = 0;  // items with day < floor are masked
  int task_floor_ = 0;
};

/// Top-k candidates by cosine to the query; ties keep input order.
std::vector<std::size_t> search(const gw::Vec& query, const std::vector<gw::Vec>& candidates,
                                int k);
std::vector<std::string> search(gw::Gateway& gw, const std::string& query,
                                const std::vector<std::string>& candidates, int k);

/// "9 am: text; 10 am: text" rendering of retrieved intentions.
std::string format_intentions(const std::vector<Scored>& items);
/// "9 am.1: text; ..." rendering of retrieved tasks (task index is 1-based).
std::string format_tasks(const std::vector<Scored>& items);

}  // namespace hrc::memory
