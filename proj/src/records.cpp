#include "hrc/records.hpp"

#include <algorithm>
#include <cctype>

#include "hrc/error.hpp"

namespace hrc::rec {

int as_int(CollabType t) { return static_cast<int>(t); }

CollabType collab_from_int(int v) {
  if (v == 1) return CollabType::PickPlace;
  if (v == 2) return CollabType::Motion;
  throw ValidationError("collaboration type must be 1 or 2, got " + std::to_string(v));
}

int human_task_count(CollabType t) { return t == CollabType::PickPlace ? 3 : 5; }

bool Reflection::unchanged() const {
  return std::all_of(notes.begin(), notes.end(), [](const std::string& n) {
    auto l = text::lower(n);
    return l.find("no mistake") != std::string::npos || l.find("no change") != std::string::npos;
  });
}

// ------------------------------------------------------------------ prompt fragments

Json RawCompletion::to_json() const {
  return Json{{"template", template_id}, {"attempt", attempt}, {"text", text}};
}

std::string act_format(CollabType type, Role role) {
  if (type == CollabType::PickPlace) {
    return "[type: 1, pick_obj_id: <id>, pick_obj_name: <name>, place_obj_id: <id>, "
           "place_obj_name: <name>]";
  }
  if (role == Role::Robot) return "[obj_name: <object>]";
  return "[type: 2, inter_obj_id: <id>, inter_obj_name: <name>, inhand_obj_name: <object>, "
         "motion: <motion>]";
}

std::string task_rules(CollabType type, Role role) {
  if (type == CollabType::PickPlace) {
    return "Each task picks up one movable object from the object dict and places it on a fixed "
           "object from the dict.";
  }
  if (role == Role::Robot) {
    return "Each task hands the human one small object taken from a box of household items. The "
           "object does not have to be in the house.";
  }
  return "Each task is a body motion next to a fixed object from the object dict while holding one "
         "small object. Name both objects.";
}

// ------------------------------------------------------------------ render

std::string render_act(const Act& act) {
  if (const auto* p = std::get_if<PickPlaceAct>(&act)) {
    return "[type: 1, pick_obj_id: " + std::to_string(p->pick_id) +
           ", pick_obj_name: " + p->pick_name + ", place_obj_id: " + std::to_string(p->place_id) +
           ", place_obj_name: " + p->place_name + "]";
  }
  if (const auto* m = std::get_if<MotionAct>(&act)) {
    return "[type: 2, inter_obj_id: " + std::to_string(m->inter_obj_id) +
           ", inter_obj_name: " + m->inter_obj_name + ", inhand_obj_name: " + m->inhand_obj_name +
           ", motion: " + m->motion + "]";
  }
  return "[obj_name: " + std::get<OfferAct>(act).obj_name + "]";
}

static std::string sentence(const std::string& s) {
  auto t = text::trim(s);
  if (t.empty()) return t;
  if (t.back() != '.' && t.back() != '!' && t.back() != '?') t.push_back('.');
  return t;
}

std::string render_task(int number, const TaskRecord& t) {
  std::string out = std::to_string(number) + ". Thought: " + sentence(t.thought);
  if (!t.reason_human.empty()) out += " Reason_human: " + sentence(t.reason_human);
  if (!t.reason_intentions.empty()) out += " Reason_intentions: " + sentence(t.reason_intentions);
  if (!t.reason_tasks.empty()) out += " Reason_tasks: " + sentence(t.reason_tasks);
  out += " Act: " + render_act(t.act);
  return out;
}

std::string render_tasks(const std::vector<TaskRecord>& tasks) {
  std::string out;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (i) out += "\n";
    out += render_task(static_cast<int>(i) + 1, tasks[i]);
  }
  return out;
}

std::string describe(const TaskRecord& t) {
  if (const auto* p = std::get_if<PickPlaceAct>(&t.act)) {
    return "move " + p->pick_name + " to " + p->place_name;
  }
  if (const auto* m = std::get_if<MotionAct>(&t.act)) {
    return m->motion + " near " + m->inter_obj_name + " holding " + m->inhand_obj_name;
  }
  return "offer " + std::get<OfferAct>(t.act).obj_name;
}

std::string render_intention_block(const IntentionRecord& r) {
  std::string out = "Time: " + r.time_label + "\nIntention: " + sentence(r.text);
  out += "\nReason_human: " + r.reason_human;
  out += "\nReason_intentions: " + r.reason_intentions;
  out += "\nReason_tasks: " + r.reason_tasks;
  return out;
}

std::string render_labels(const std::vector<bool>& labels) {
  std::string out = "[";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ", ";
    out += labels[i] ? "yes" : "no";
  }
  return out + "]";
}

// ------------------------------------------------------------------ parse

namespace {

/// Strips list bullets and markdown emphasis that chat models like to add.
std::string clean_line(std::string_view line) {
  auto t = text::trim(line);
  while (!t.empty() && (t.front() == '*' || t.front() == '-' || t.front() == '#')) {
    t.erase(t.begin());
    t = text::trim(t);
  }
  return text::replace_all(t, "**", "");
}

bool key_at_start(std::string_view line, std::string_view key, std::string& rest) {
  if (!text::starts_with_ci(line, key)) return false;
  rest = text::trim(line.substr(key.size()));
  return true;
}

std::string strip_trailing_period(std::string s) {
  s = text::trim(s);
  while (!s.empty() && s.back() == '.') s.pop_back();
  return text::trim(s);
}

/// Position of the numbered-item prefix "12." / "12)" at the start of a line.
std::optional<std::size_t> item_prefix(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i == 0 || i >= line.size() || (line[i] != '.' && line[i] != ')')) return std::nullopt;
  // A bare decimal such as "3.5" is not an item marker.
  if (i + 1 < line.size() && std::isdigit(static_cast<unsigned char>(line[i + 1]))) {
    return std::nullopt;
  }
  return i + 1;
}

/// Collects numbered items from lines[begin, end); continuation lines are joined.
std::vector<std::string> numbered_items(const std::vector<std::string>& lines, std::size_t begin,
                                        std::size_t end) {
  std::vector<std::string> items;
  for (std::size_t i = begin; i < end; ++i) {
    auto t = clean_line(lines[i]);
    if (t.empty()) continue;
    if (auto p = item_prefix(t)) {
      items.push_back(text::trim(std::string_view(t).substr(*p)));
    } else if (!items.empty()) {
      items.back() += " " + t;
    }
  }
  return items;
}

std::optional<std::size_t> find_header(const std::vector<std::string>& lines, std::string_view header,
                                       std::size_t from = 0) {
  for (std::size_t i = from; i < lines.size(); ++i) {
    if (text::starts_with_ci(clean_line(lines[i]), header)) return i;
  }
  return std::nullopt;
}

const std::vector<std::string>& act_keys() {
  static const std::vector<std::string> k = {
      "type",           "pick_obj_id",     "pick_obj_name", "place_obj_id", "place_obj_name",
      "inter_obj_id",   "inter_obj_name",  "inhand_obj_name", "motion",     "obj_name"};
  return k;
}

int parse_id(const std::map<std::string, std::string>& kv, const std::string& key,
             std::string_view raw) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ParseError("act lacks " + key, std::string(raw));
  try {
    std::size_t used = 0;
    int v = std::stoi(it->second, &used);
    if (text::trim(it->second.substr(used)).size() != 0) throw std::invalid_argument("junk");
    return v;
  } catch (const std::exception&) {
    throw ParseError("act field " + key + " is not an integer: '" + it->second + "'",
                     std::string(raw));
  }
}

std::string need(const std::map<std::string, std::string>& kv, const std::string& key,
                 std::string_view raw) {
  auto it = kv.find(key);
  if (it == kv.end() || it->second.empty()) {
    throw ParseError("act lacks a value for " + key, std::string(raw));
  }
  return it->second;
}

}  // namespace

Act parse_act(std::string_view body, std::string_view raw) {
  // Locate "key:" occurrences at the start or after a comma.
  struct Hit {
    std::size_t pos;
    std::string key;
  };
  std::vector<Hit> hits;
  std::string lower = text::lower(body);
  for (const auto& key : act_keys()) {
    std::size_t pos = 0;
    while ((pos = lower.find(key, pos)) != std::string::npos) {
      std::size_t after = pos + key.size();
      while (after < lower.size() && lower[after] == ' ') ++after;
      bool colon = after < lower.size() && lower[after] == ':';
      std::size_t before = pos;
      while (before > 0 && lower[before - 1] == ' ') --before;
      bool boundary = before == 0 || lower[before - 1] == ',';
      if (colon && boundary) hits.push_back({pos, key});
      pos += key.size();
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.pos < b.pos; });
  std::map<std::string, std::string> kv;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    auto start = body.find(':', hits[i].pos) + 1;
    auto end = i + 1 < hits.size() ? hits[i + 1].pos : body.size();
    std::string v = text::trim(body.substr(start, end - start));
    while (!v.empty() && (v.back() == ',' || v.back() == ' ')) v.pop_back();
    if (v.size() >= 2 && (v.front() == '\'' || v.front() == '"') && v.back() == v.front()) {
      v = v.substr(1, v.size() - 2);
    }
    kv[hits[i].key] = text::trim(v);
  }
  if (kv.count("pick_obj_id") || kv.count("place_obj_id")) {
    PickPlaceAct a;
    a.pick_id = parse_id(kv, "pick_obj_id", raw);
    a.pick_name = need(kv, "pick_obj_name", raw);
    a.place_id = parse_id(kv, "place_obj_id", raw);
    a.place_name = need(kv, "place_obj_name", raw);
    return a;
  }
  if (kv.count("inter_obj_id") || kv.count("motion")) {
    MotionAct a;
    a.inter_obj_id = parse_id(kv, "inter_obj_id", raw);
    a.inter_obj_name = need(kv, "inter_obj_name", raw);
    a.inhand_obj_name = need(kv, "inhand_obj_name", raw);
    a.motion = need(kv, "motion", raw);
    auto low = text::lower(a.inhand_obj_name);
    if (low == "none" || low == "null" || low == "nothing") {
      throw ParseError("in-hand object must be specified", std::string(raw));
    }
    return a;
  }
  if (kv.count("obj_name")) return OfferAct{need(kv, "obj_name", raw)};
  throw ParseError("unrecognised act: [" + std::string(body) + "]", std::string(raw));
}

IntentionRecord parse_intention(std::string_view src) {
  IntentionRecord r;
  std::string* current = nullptr;
  bool have_intention = false;
  for (const auto& raw_line : text::split_lines(src)) {
    auto line = clean_line(raw_line);
    std::string rest;
    if (key_at_start(line, "Time:", rest)) {
      r.time_label = strip_trailing_period(rest);
      current = nullptr;
    } else if (key_at_start(line, "Intention:", rest)) {
      r.text = rest;
      current = &r.text;
      have_intention = true;
    } else if (key_at_start(line, "Reason_human:", rest)) {
      r.reason_human = rest;
      current = &r.reason_human;
    } else if (key_at_start(line, "Reason_intentions:", rest)) {
      r.reason_intentions = rest;
      current = &r.reason_intentions;
    } else if (key_at_start(line, "Reason_tasks:", rest)) {
      r.reason_tasks = rest;
      current = &r.reason_tasks;
    } else if (current && !line.empty()) {
      *current += " " + line;
    }
  }
  r.text = strip_trailing_period(r.text);
  if (!have_intention || r.text.empty()) {
    throw ParseError("response has no 'Intention:' line", std::string(src));
  }
  return r;
}

std::vector<TaskRecord> parse_tasks(std::string_view src, std::string_view header) {
  auto lines = text::split_lines(src);
  auto h = find_header(lines, header);
  if (!h) throw ParseError("response has no '" + std::string(header) + "' section", std::string(src));
  std::vector<TaskRecord> out;
  static const std::vector<std::string> keys = {"Thought:", "Reason_human:", "Reason_intentions:",
                                                "Reason_tasks:", "Act:"};
  for (const auto& item : numbered_items(lines, *h + 1, lines.size())) {
    std::string low = text::lower(item);
    std::vector<std::pair<std::size_t, std::string>> found;
    for (const auto& k : keys) {
      auto p = low.find(text::lower(k));
      if (p != std::string::npos) found.emplace_back(p, k);
    }
    std::sort(found.begin(), found.end());
    auto value_of = [&](const std::string& key) -> std::string {
      for (std::size_t i = 0; i < found.size(); ++i) {
        if (found[i].second != key) continue;
        auto start = found[i].first + key.size();
        auto end = i + 1 < found.size() ? found[i + 1].first : item.size();
        return text::trim(std::string_view(item).substr(start, end - start));
      }
      return {};
    };
    auto act_pos = low.find("act:");
    // "Act:" must not be the tail of another word such as "contact:".
    while (act_pos != std::string::npos && act_pos > 0 &&
           std::isalpha(static_cast<unsigned char>(low[act_pos - 1]))) {
      act_pos = low.find("act:", act_pos + 4);
    }
    if (act_pos == std::string::npos) throw ParseError("task lacks an Act", std::string(src));
    auto open = item.find('[', act_pos);
    auto close = item.rfind(']');
    if (open == std::string::npos || close == std::string::npos || close < open) {
      throw ParseError("task Act is not bracketed", std::string(src));
    }
    TaskRecord t;
    t.thought = strip_trailing_period(found.empty() || found.front().second != "Thought:"
                                          ? item.substr(0, found.empty() ? act_pos : found.front().first)
                                          : value_of("Thought:"));
    t.reason_human = strip_trailing_period(value_of("Reason_human:"));
    t.reason_intentions = strip_trailing_period(value_of("Reason_intentions:"));
    t.reason_tasks = strip_trailing_period(value_of("Reason_tasks:"));
    t.act = parse_act(std::string_view(item).substr(open + 1, close - open - 1), src);
    t.task_index = static_cast<int>(out.size());
    out.push_back(std::move(t));
  }
  if (out.empty()) throw ParseError("no tasks listed", std::string(src));
  return out;
}

std::vector<IntentionRecord> parse_intention_candidates(std::string_view src) {
  std::vector<IntentionRecord> out;
  std::string time_label;
  std::string* current = nullptr;
  for (const auto& raw_line : text::split_lines(src)) {
    auto line = clean_line(raw_line);
    std::string rest;
    if (key_at_start(line, "Time:", rest)) {
      time_label = strip_trailing_period(rest);
      current = nullptr;
      continue;
    }
    if (text::starts_with_ci(line, "Intention")) {
      auto colon = line.find(':');
      auto label = colon == std::string::npos ? std::string() : text::trim(line.substr(9, colon - 9));
      bool numbered = !label.empty() &&
                      std::all_of(label.begin(), label.end(), [](unsigned char c) { return std::isdigit(c); });
      if (numbered) {
        IntentionRecord r;
        r.time_label = time_label;
        r.text = text::trim(line.substr(colon + 1));
        out.push_back(std::move(r));
        current = &out.back().text;
        continue;
      }
    }
    if (out.empty()) continue;
    auto& r = out.back();
    if (key_at_start(line, "Reason_human:", rest)) {
      r.reason_human = rest;
      current = &r.reason_human;
    } else if (key_at_start(line, "Reason_intentions:", rest)) {
      r.reason_intentions = rest;
      current = &r.reason_intentions;
    } else if (key_at_start(line, "Reason_tasks:", rest)) {
      r.reason_tasks = rest;
      current = &r.reason_tasks;
    } else if (key_at_start(line, "Reason_vis:", rest)) {
      r.reason_vis = rest;
      current = &r.reason_vis;
    } else if (current && !line.empty()) {
      *current += " " + line;
    }
  }
  for (auto& r : out) r.text = strip_trailing_period(r.text);
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& r) { return r.text.empty(); }),
            out.end());
  if (out.empty()) throw ParseError("no 'Intention N:' entries found", std::string(src));
  return out;
}

Reflection parse_reflection(std::string_view src) {
  auto lines = text::split_lines(src);
  auto notes_at = find_header(lines, "Reflect Each Task:");
  auto revised_at = find_header(lines, "Revised Tasks:");
  if (!revised_at) throw ParseError("reflection has no 'Revised Tasks:' section", std::string(src));
  Reflection r;
  if (notes_at && *notes_at < *revised_at) r.notes = numbered_items(lines, *notes_at + 1, *revised_at);
  r.revised = parse_tasks(src, "Revised Tasks:");
  return r;
}

FeedbackRecord parse_feedback(std::string_view src) {
  auto lines = text::split_lines(src);
  FeedbackRecord f;
  bool found = false;
  std::size_t at = 0;
  for (std::size_t i = 0; i < lines.size() && !found; ++i) {
    auto line = clean_line(lines[i]);
    std::string rest;
    if (!key_at_start(line, "Tasks:", rest)) continue;
    auto open = rest.find('[');
    auto close = rest.find(']');
    if (open == std::string::npos || close == std::string::npos || close < open) {
      throw ParseError("feedback labels must be a bracketed list", std::string(src));
    }
    auto body = text::trim(rest.substr(open + 1, close - open - 1));
    if (!body.empty()) {
      for (auto tok : text::split(body, ',')) {
        auto t = text::lower(text::trim(tok));
        t.erase(std::remove_if(t.begin(), t.end(), [](char c) { return c == '\'' || c == '"'; }),
                t.end());
        if (t == "yes") {
          f.labels.push_back(true);
        } else if (t == "no") {
          f.labels.push_back(false);
        } else {
          throw ParseError("feedback label '" + t + "' is neither yes nor no", std::string(src));
        }
      }
    }
    found = true;
    at = i;
  }
  if (!found) throw ParseError("feedback has no 'Tasks: [...]' line", std::string(src));
  if (auto r = find_header(lines, "Reasons_tasks:", at + 1)) {
    f.reasons = numbered_items(lines, *r + 1, lines.size());
  }
  return f;
}

// ------------------------------------------------------------------ json

Json to_json(const Act& a) {
  if (const auto* p = std::get_if<PickPlaceAct>(&a)) {
    return Json{{"type", 1},
                {"pick_obj_id", p->pick_id},
                {"pick_obj_name", p->pick_name},
                {"place_obj_id", p->place_id},
                {"place_obj_name", p->place_name}};
  }
  if (const auto* m = std::get_if<MotionAct>(&a)) {
    return Json{{"type", 2},
                {"inter_obj_id", m->inter_obj_id},
                {"inter_obj_name", m->inter_obj_name},
                {"inhand_obj_name", m->inhand_obj_name},
                {"motion", m->motion}};
  }
  return Json{{"type", "offer"}, {"obj_name", std::get<OfferAct>(a).obj_name}};
}

Act act_from_json(const Json& j) {
  if (j.contains("pick_obj_id")) {
    return PickPlaceAct{j.at("pick_obj_id").get<int>(), j.at("pick_obj_name").get<std::string>(),
                        j.at("place_obj_id").get<int>(), j.at("place_obj_name").get<std::string>()};
  }
  if (j.contains("inter_obj_id")) {
    return MotionAct{j.at("inter_obj_id").get<int>(), j.at("inter_obj_name").get<std::string>(),
                     j.at("inhand_obj_name").get<std::string>(), j.at("motion").get<std::string>()};
  }
  return OfferAct{j.at("obj_name").get<std::string>()};
}

Json to_json(const TaskRecord& t) {
  return Json{{"day", t.day},
              {"hour_slot", t.hour_slot},
              {"task_index", t.task_index},
              {"thought", t.thought},
              {"reason_human", t.reason_human},
              {"reason_intentions", t.reason_intentions},
              {"reason_tasks", t.reason_tasks},
              {"act", to_json(t.act)}};
}

TaskRecord task_from_json(const Json& j) {
  TaskRecord t;
  t.day = j.value("day", 1);
  t.hour_slot = j.value("hour_slot", 0);
  t.task_index = j.value("task_index", 0);
  t.thought = j.value("thought", "");
  t.reason_human = j.value("reason_human", "");
  t.reason_intentions = j.value("reason_intentions", "");
  t.reason_tasks = j.value("reason_tasks", "");
  t.act = act_from_json(j.at("act"));
  return t;
}

Json to_json(const IntentionRecord& r) {
  Json j{{"day", r.day},
         {"hour_slot", r.hour_slot},
         {"time", r.time_label},
         {"text", r.text},
         {"reason_human", r.reason_human},
         {"reason_intentions", r.reason_intentions},
         {"reason_tasks", r.reason_tasks}};
  if (!r.reason_vis.empty()) j["reason_vis"] = r.reason_vis;
  return j;
}

IntentionRecord intention_from_json(const Json& j) {
  IntentionRecord r;
  r.day = j.value("day", 1);
  r.hour_slot = j.value("hour_slot", 0);
  r.time_label = j.value("time", "");
  r.text = j.at("text").get<std::string>();
  r.reason_human = j.value("reason_human", "");
  r.reason_intentions = j.value("reason_intentions", "");
  r.reason_tasks = j.value("reason_tasks", "");
  r.reason_vis = j.value("reason_vis", "");
  return r;
}

Json to_json(const FeedbackRecord& f) {
  return Json{{"day", f.day}, {"hour_slot", f.hour_slot}, {"labels", f.labels}, {"reasons", f.reasons}};
}

FeedbackRecord feedback_from_json(const Json& j) {
  FeedbackRecord f;
  f.day = j.value("day", 1);
  f.hour_slot = j.value("hour_slot", 0);
  f.labels = j.at("labels").get<std::vector<bool>>();
  f.reasons = j.value("reasons", std::vector<std::string>{});
  return f;
}

std::vector<MappingEntry> parse_mapping(std::string_view s) {
  std::vector<MappingEntry> out;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  auto read_quoted = [&]() -> std::string {
    skip_ws();
    if (i >= s.size() || (s[i] != '\'' && s[i] != '"')) throw ParseError("mapping: expected a quoted string", std::string(s));
    char q = s[i++];
    std::string v;
    while (i < s.size() && s[i] != q) {
      if (s[i] == '\\' && i + 1 < s.size()) ++i;
      v.push_back(s[i++]);
    }
    if (i >= s.size()) throw ParseError("mapping: unterminated string", std::string(s));
    ++i;
    return v;
  };
  auto expect = [&](char c) {
    skip_ws();
    if (i >= s.size() || s[i] != c) {
      throw ParseError(std::string("mapping: expected '") + c + "'", std::string(s));
    }
    ++i;
  };
  expect('{');
  skip_ws();
  if (i < s.size() && s[i] == '}') return out;
  while (true) {
    MappingEntry e;
    e.name = read_quoted();
    expect(':');
    expect('[');
    skip_ws();
    std::size_t start = i;
    while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '-')) ++i;
    if (start == i) throw ParseError("mapping: expected an id", std::string(s));
    e.id = std::stoi(std::string(s.substr(start, i - start)));
    expect(',');
    e.room = read_quoted();
    expect(']');
    out.push_back(std::move(e));
    skip_ws();
    if (i < s.size() && s[i] == ',') {
      ++i;
      continue;
    }
    expect('}');
    break;
  }
  return out;
}

}  // namespace hrc::rec
