#include "hrc/memory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "hrc/error.hpp"

namespace hrc::memory {

std::string_view to_string(Kind k) { return k == Kind::Intention ? "intention" : "task"; }

Kind kind_from_string(std::string_view s) {
  if (s == "intention") return Kind::Intention;
  if (s == "task") return Kind::Task;
  throw ValidationError("unknown memory kind '" + std::string(s) + "'");
}

void RetrievalConfig::validate() const {
  if (!(decay > 0 && decay <= 1)) throw ValidationError("decay must lie in (0, 1]");
  if (k_intentions < 1 || k_tasks < 1) throw ValidationError("retrieval k must be at least 1");
}

Json RetrievalConfig::to_json() const {
  return Json{{"decay", decay}, {"k_intentions", k_intentions}, {"k_tasks", k_tasks}};
}

RetrievalConfig RetrievalConfig::from_json(const Json& j) {
  RetrievalConfig c;
  c.decay = j.value("decay", c.decay);
  c.k_intentions = j.value("k_intentions", c.k_intentions);
  c.k_tasks = j.value("k_tasks", c.k_tasks);
  c.validate();
  return c;
}

double relevance(const gw::Vec& query, const gw::Vec& item) { return gw::dot(query, item); }

double recency(world::DayClock now, world::DayClock then, double decay) {
  long delta = now.ordinal() - then.ordinal();
  if (delta < 0) throw ValidationError("memory item is dated after the query time");
  return std::pow(decay, static_cast<double>(delta));
}

const MemoryItem& MemoryStore::add(MemoryItem item) {
  if (item.hour_slot < 0 || item.hour_slot >= world::DayClock::kSlots) {
    throw ValidationError("memory item hour slot out of range");
  }
  if (std::abs(gw::norm(item.embedding) - 1.0) > 1e-6) {
    throw ValidationError("memory item embedding must be unit norm");
  }
  items_.push_back(std::move(item));
  return items_.back();
}

bool MemoryStore::visible(const MemoryItem& m) const {
  int floor = m.kind == Kind::Intention ? intention_floor_ : task_floor_;
  return m.day >= floor;
}

std::size_t MemoryStore::visible_count(Kind kind) const {
  return static_cast<std::size_t>(std::count_if(items_.begin(), items_.end(), [&](const auto& m) {
    return m.kind == kind && visible(m);
  }));
}

std::vector<Scored> MemoryStore::retrieve(const gw::Vec& query, world::DayClock now, Kind kind,
                                          int k, double decay) const {
  if (k < 1) throw ValidationError("retrieve needs k >= 1");
  std::vector<Scored> pool;
  for (const auto& m : items_) {
    if (m.kind != kind || !visible(m)) continue;
    if (m.clock() > now) continue;  // future items are not yet memories
    pool.push_back({&m, 0.0});
  }
  for (auto& s : pool) {
    s.score = recency(now, s.item->clock(), decay) * relevance(query, s.item->embedding);
  }
  std::stable_sort(pool.begin(), pool.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.item->clock() != b.item->clock()) return a.item->clock() > b.item->clock();
    return a.item->task_index.value_or(-1) < b.item->task_index.value_or(-1);
  });
  if (pool.size() > static_cast<std::size_t>(k)) pool.resize(static_cast<std::size_t>(k));
  return pool;
}

void MemoryStore::reset_daily(const std::vector<Kind>& kinds, int day) {
  for (auto k : kinds) {
    int& floor = k == Kind::Intention ? intention_floor_ : task_floor_;
    floor = std::max(floor, day);
  }
}

void MemoryStore::save_jsonl(const std::filesystem::path& p) const {
  std::string out;
  for (const auto& m : items_) {
    Json j{{"kind", to_string(m.kind)},
           {"text", m.text},
           {"day", m.day},
           {"hour_slot", m.hour_slot},
           {"embedding", m.embedding}};
    if (m.task_index) j["task_index"] = *m.task_index;
    out += j.dump() + "\n";
  }
  Json floors{{"_floors", {{"intention", intention_floor_}, {"task", task_floor_}}}};
  out += floors.dump() + "\n";
  fsio::write_file_atomic(p, out);
}

MemoryStore MemoryStore::load_jsonl(const std::filesystem::path& p) {
  MemoryStore s;
  auto lines = text::split_lines(fsio::read_file(p));
  int lineno = 0;
  for (const auto& line : lines) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      auto j = Json::parse(line);
      if (j.contains("_floors")) {
        s.intention_floor_ = j["_floors"].value("intention", 0);
        s.task_floor_ = j["_floors"].value("task", 0);
        continue;
      }
      MemoryItem m;
      m.kind = kind_from_string(j.at("kind").get<std::string>());
      m.text = j.at("text").get<std::string>();
      m.day = j.at("day").get<int>();
      m.hour_slot = j.at("hour_slot").get<int>();
      if (j.contains("task_index")) m.task_index = j["task_index"].get<int>();
      m.embedding = j.at("embedding").get<gw::Vec>();
      s.items_.push_back(std::move(m));
    } catch (const Json::exception& e) {
      throw LoadError(p.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return s;
}

std::vector<std::size_t> search(const gw::Vec& query, const std::vector<gw::Vec>& candidates,
                                int k) {
  if (k < 1) throw ValidationError("search needs k >= 1");
  std::vector<double> sims(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) sims[i] = gw::dot(query, candidates[i]);
  std::vector<std::size_t> idx(candidates.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return sims[a] > sims[b]; });
  if (idx.size() > static_cast<std::size_t>(k)) idx.resize(static_cast<std::size_t>(k));
  return idx;
}

std::vector<std::string> search(gw::Gateway& gw, const std::string& query,
                                const std::vector<std::string>& candidates, int k) {
  std::vector<gw::Vec> embs;
  embs.reserve(candidates.size());
  for (const auto& c : candidates) embs.push_back(gw.embed(c));
  std::vector<std::string> out;
  for (auto i : search(gw.embed(query), embs, k)) out.push_back(candidates[i]);
  return out;
}

std::string format_intentions(const std::vector<Scored>& items) {
  std::vector<std::string> parts;
  for (const auto& s : items) parts.push_back(world::DayClock::slot_label(s.item->hour_slot) + ": " + s.item->text);
  return text::join(parts, "; ");
}

std::string format_tasks(const std::vector<Scored>& items) {
  std::vector<std::string> parts;
  for (const auto& s : items) {
    parts.push_back(world::DayClock::slot_label(s.item->hour_slot) + "." +
                    std::to_string(s.item->task_index.value_or(0) + 1) + ": " + s.item->text);
  }
  return text::join(parts, "; ");
}

}  // namespace hrc::memory
