#include "hrc/scenario.hpp"

#include <algorithm>
#include <random>
#include <regex>
#include <set>

#include "hrc/assets.hpp"
#include "hrc/error.hpp"

namespace hrc::scenario {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Base: return "base";
    case Variant::Lookalike: return "lookalike";
    case Variant::Distinct: return "distinct";
  }
  return "base";
}

persona::PersonaRecord CatalogPersona::record() const {
  persona::PersonaRecord r;
  r.persona_id = id;
  r.short_profile = short_profile;
  r.extended_profile = extended_profile;
  r.big5 = big5;
  return r;
}

// ---------------------------------------------------------------- catalog

namespace {

Theme theme_from_json(const Json& j) {
  Theme t;
  t.intention = j.at("intention").get<std::string>();
  t.context = j.at("context").get<std::string>();
  for (const auto& x : j.at("type1")) {
    t.type1.push_back({x.at("pick").get<std::string>(), x.at("place").get<std::string>(),
                       x.at("thought").get<std::string>()});
  }
  for (const auto& x : j.at("type2")) {
    t.type2.push_back({x.at("motion").get<std::string>(), x.at("static").get<std::string>(),
                       x.at("inhand").get<std::string>(), x.at("thought").get<std::string>()});
  }
  return t;
}

std::string norm_intention(std::string_view s) {
  auto t = text::lower(text::trim(s));
  while (!t.empty() && (t.back() == '.' || t.back() == ' ')) t.pop_back();
  return t;
}

std::set<std::string> word_set(std::string_view s) {
  auto w = text::words(s);
  return {w.begin(), w.end()};
}

}  // namespace

Catalog Catalog::from_json(const Json& j) {
  Catalog c;
  c.epsilon_ = j.value("epsilon", 0.2);
  for (const auto& p : j.at("personas")) {
    CatalogPersona cp;
    cp.id = p.at("id").get<std::string>();
    cp.name = p.value("name", cp.id);
    cp.short_profile = p.at("short_profile").get<std::string>();
    cp.extended_profile = p.value("extended_profile", cp.short_profile);
    cp.big5 = persona::BigFive::from_json(p.at("big5"));
    c.personas_.push_back(std::move(cp));
  }
  c.pick_ = j.at("pick_classes").get<std::map<std::string, std::string>>();
  c.place_ = j.at("place_classes").get<std::map<std::string, std::string>>();
  c.inhand_ = j.at("inhand_items").get<std::vector<std::string>>();
  for (const auto& f : j.at("families")) {
    Family fam;
    fam.persona = f.at("persona").get<std::string>();
    fam.hour = f.at("hour").get<int>();
    fam.themes[0] = theme_from_json(f.at("base"));
    fam.themes[1] = theme_from_json(f.at("lookalike"));
    fam.themes[2] = theme_from_json(f.at("distinct"));
    c.families_.push_back(std::move(fam));
  }
  for (const auto& p : c.personas_) {
    for (int h = 0; h < world::DayClock::kSlots; ++h) c.family_index(p.id, h);
  }
  return c;
}

const Catalog& Catalog::bundled() {
  static const Catalog c = from_json(Json::parse(assets::get("scenario/catalog.json")));
  return c;
}

const CatalogPersona* Catalog::persona(std::string_view id) const {
  for (const auto& p : personas_) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const CatalogPersona* Catalog::persona_in(std::string_view text) const {
  for (const auto& p : personas_) {
    if (text.find(p.extended_profile) != std::string_view::npos ||
        text.find(p.short_profile) != std::string_view::npos) {
      return &p;
    }
  }
  return nullptr;
}

std::size_t Catalog::family_index(std::string_view persona, int hour) const {
  for (std::size_t i = 0; i < families_.size(); ++i) {
    if (families_[i].persona == persona && families_[i].hour == hour) return i;
  }
  throw LoadError("catalog has no themes for persona " + std::string(persona) + " at slot " +
                  std::to_string(hour));
}

std::optional<ThemeRef> Catalog::find_intention(std::string_view text) const {
  auto key = norm_intention(text);
  for (std::size_t f = 0; f < families_.size(); ++f) {
    for (int v = 0; v < 3; ++v) {
      if (norm_intention(families_[f].themes[static_cast<std::size_t>(v)].intention) == key) {
        return ThemeRef{f, static_cast<Variant>(v)};
      }
    }
  }
  return std::nullopt;
}

ThemeRef Catalog::nearest_theme(std::string_view text) const {
  auto words = word_set(text);
  ThemeRef best{0, Variant::Base};
  std::size_t best_n = 0;
  for (std::size_t f = 0; f < families_.size(); ++f) {
    for (int v = 0; v < 3; ++v) {
      const auto& t = families_[f].themes[static_cast<std::size_t>(v)];
      std::size_t n = 0;
      for (const auto& w : word_set(t.intention + " " + t.context)) n += words.count(w);
      if (n > best_n) {
        best_n = n;
        best = {f, static_cast<Variant>(v)};
      }
    }
  }
  if (best_n == 0) {
    // No shared words: spread deterministically over the catalog.
    auto h = fnv1a64(text);
    best = {static_cast<std::size_t>(h % families_.size()), static_cast<Variant>((h >> 32) % 3)};
  }
  return best;
}

std::optional<std::size_t> Catalog::family_by_first_pickplace(std::string_view pick,
                                                              std::string_view place) const {
  for (std::size_t f = 0; f < families_.size(); ++f) {
    for (const auto& t : families_[f].themes) {
      if (!t.type1.empty() && t.type1[0].pick == pick && t.type1[0].place == place) return f;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> Catalog::family_by_first_motion(std::string_view motion,
                                                           std::string_view fixed) const {
  for (std::size_t f = 0; f < families_.size(); ++f) {
    for (const auto& t : families_[f].themes) {
      if (!t.type2.empty() && t.type2[0].motion == motion && t.type2[0].fixed == fixed) return f;
    }
  }
  return std::nullopt;
}

bool contains_word(std::string_view text, std::string_view word) {
  if (word.empty()) return false;
  auto hay = text::lower(text);
  auto w = text::lower(word);
  auto is_alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  for (std::size_t pos = hay.find(w); pos != std::string::npos; pos = hay.find(w, pos + 1)) {
    bool left = pos == 0 || !is_alnum(hay[pos - 1]);
    std::size_t end = pos + w.size();
    bool right = end == hay.size() || !is_alnum(hay[end]);
    if (left && right) return true;
  }
  return false;
}

namespace {

std::vector<std::string> words_in(std::string_view text, const std::map<std::string, std::string>& table) {
  std::vector<std::pair<std::size_t, std::string>> hits;
  auto low = text::lower(text);
  for (const auto& [w, _] : table) {
    if (!contains_word(text, w)) continue;
    hits.emplace_back(low.find(w), w);
  }
  std::sort(hits.begin(), hits.end());
  std::vector<std::string> out;
  for (auto& [_, w] : hits) out.push_back(w);
  return out;
}

}  // namespace

std::vector<std::string> Catalog::pick_words_in(std::string_view text) const { return words_in(text, pick_); }
std::vector<std::string> Catalog::place_words_in(std::string_view text) const { return words_in(text, place_); }

Variant draw_variant(double eps, std::uint64_t seed) {
  std::uint64_t x = mix64(seed);
  double u = static_cast<double>(x >> 11) * 0x1.0p-53;
  if (u < 1.0 - eps) return Variant::Base;
  return (mix64(x) & 1) ? Variant::Lookalike : Variant::Distinct;
}

std::uint64_t human_seed(std::uint64_t run_seed, int day, int slot, std::string_view persona) {
  return derive_seed(run_seed, "human/" + std::string(persona) + "/" + std::to_string(day) + "/" +
                                   std::to_string(slot));
}

// ---------------------------------------------------------------- binding

Binder::Binder(std::vector<rec::MappingEntry> mapping) : entries_(std::move(mapping)) {
  std::stable_sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
}

Binder Binder::from_scene(const world::Scene& s, world::MappingFilter f) {
  return Binder(rec::parse_mapping(world::mapping_summary(s, f)));
}

std::optional<rec::MappingEntry> Binder::first_with_word(std::string_view word) const {
  for (const auto& e : entries_) {
    if (contains_word(e.name, word)) return e;
  }
  return std::nullopt;
}

std::optional<rec::MappingEntry> Binder::by_name(std::string_view name) const {
  auto key = text::lower(text::trim(name));
  for (const auto& e : entries_) {
    if (text::lower(e.name) == key) return e;
  }
  return std::nullopt;
}

std::optional<rec::MappingEntry> Binder::by_id(int id) const {
  for (const auto& e : entries_) {
    if (e.id == id) return e;
  }
  return std::nullopt;
}

namespace {

rec::MappingEntry need(const Binder& b, const std::string& word) {
  auto e = b.first_with_word(word);
  if (!e) throw WorldError("scene has no object of class '" + word + "'");
  return *e;
}

std::string purpose_of(const std::string& thought) {
  auto pos = thought.rfind(" for ");
  std::string p = pos == std::string::npos ? std::string() : thought.substr(pos + 5);
  while (!p.empty() && p.back() == '.') p.pop_back();
  return p;
}

}  // namespace

rec::TaskRecord bind_task(const PickPlaceSpec& s, const Binder& b) {
  auto pick = need(b, s.pick), place = need(b, s.place);
  rec::TaskRecord t;
  t.thought = s.thought;
  while (!t.thought.empty() && t.thought.back() == '.') t.thought.pop_back();
  t.act = rec::PickPlaceAct{pick.id, pick.name, place.id, place.name};
  return t;
}

rec::TaskRecord bind_task(const MotionSpec& s, const Binder& b) {
  auto fixed = need(b, s.fixed);
  rec::TaskRecord t;
  t.thought = s.thought;
  while (!t.thought.empty() && t.thought.back() == '.') t.thought.pop_back();
  t.act = rec::MotionAct{fixed.id, fixed.name, s.inhand, s.motion};
  return t;
}

std::vector<rec::TaskRecord> bind_theme(const Theme& th, rec::CollabType type, const Binder& b) {
  std::vector<rec::TaskRecord> out;
  if (type == rec::CollabType::PickPlace) {
    for (const auto& s : th.type1) out.push_back(bind_task(s, b));
  } else {
    for (const auto& s : th.type2) out.push_back(bind_task(s, b));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].task_index = static_cast<int>(i);
    out[i].reason_human = "Part of my usual " + th.context + " routine";
    out[i].reason_intentions = i == 0 ? "Starts the current intention" : "Continues the current intention";
    out[i].reason_tasks = i == 0 ? "First task of the hour" : "Follows task " + std::to_string(i);
  }
  return out;
}

rec::IntentionRecord make_intention(const Theme& t, const std::string& time_label) {
  rec::IntentionRecord r;
  r.time_label = time_label;
  r.text = t.intention;
  r.reason_human = "It matches my habits around " + t.context;
  r.reason_intentions = "It follows what I did earlier today";
  r.reason_tasks = "It builds on my earlier tasks";
  return r;
}

ScriptedTurn scripted_turn(const Catalog& cat, std::string_view persona, int slot, std::uint64_t seed,
                           rec::CollabType type, const Binder& b) {
  ScriptedTurn s;
  s.ref = {cat.family_index(persona, slot), draw_variant(cat.epsilon(), seed)};
  const auto& th = cat.theme(s.ref);
  s.intention = make_intention(th, world::DayClock::slot_label(slot));
  s.tasks = bind_theme(th, type, b);
  return s;
}

namespace {

std::optional<std::pair<std::string, std::string>> pickplace_classes(const Catalog& cat,
                                                                     const rec::PickPlaceAct& a) {
  auto p = cat.pick_words_in(a.pick_name);
  auto q = cat.place_words_in(a.place_name);
  if (p.empty() || q.empty()) return std::nullopt;
  return std::make_pair(p.front(), q.front());
}

}  // namespace

bool serves(const Catalog& cat, const rec::TaskRecord& robot, const std::vector<rec::TaskRecord>& human) {
  if (const auto* r = std::get_if<rec::PickPlaceAct>(&robot.act)) {
    auto rc = pickplace_classes(cat, *r);
    if (!rc) return false;
    for (const auto& h : human) {
      const auto* a = std::get_if<rec::PickPlaceAct>(&h.act);
      if (a && pickplace_classes(cat, *a) == rc) return true;
    }
    return false;
  }
  std::string item;
  if (const auto* o = std::get_if<rec::OfferAct>(&robot.act)) item = o->obj_name;
  if (const auto* m = std::get_if<rec::MotionAct>(&robot.act)) item = m->inhand_obj_name;
  for (const auto& h : human) {
    const auto* a = std::get_if<rec::MotionAct>(&h.act);
    if (a && text::lower(text::trim(a->inhand_obj_name)) == text::lower(text::trim(item))) return true;
  }
  return false;
}

// ---------------------------------------------------------------- mock

namespace {

/// Rest of the line following `label`, or empty.
std::string field(std::string_view prompt, std::string_view label) {
  auto pos = prompt.find(label);
  if (pos == std::string_view::npos) return {};
  auto start = pos + label.size();
  auto end = prompt.find('\n', start);
  return text::trim(prompt.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
}

/// Lines following the line that contains `label`, up to the next blank line
/// or the line containing `stop`.
std::string section(std::string_view prompt, std::string_view label, std::string_view stop = {}) {
  auto pos = prompt.find(label);
  if (pos == std::string_view::npos) return {};
  auto start = prompt.find('\n', pos);
  if (start == std::string_view::npos) return {};
  std::string out;
  for (const auto& line : text::split_lines(prompt.substr(start + 1))) {
    if (text::trim(line).empty()) break;
    if (!stop.empty() && line.find(stop) != std::string::npos) break;
    out += line + "\n";
  }
  return out;
}

std::mt19937_64 rng_for(const gw::ChatRequest& r) {
  return std::mt19937_64(r.seed.value_or(fnv1a64(r.prompt)));
}

int slot_of(std::string_view prompt) {
  auto t = field(prompt, "Current time: ");
  return world::DayClock::parse_slot_label(t).value_or(0);
}

rec::CollabType type_of(std::string_view prompt) {
  if (prompt.find("inter_obj_id: <id>") != std::string_view::npos) return rec::CollabType::Motion;
  if (prompt.find("[obj_name: <object>]") != std::string_view::npos) return rec::CollabType::Motion;
  return rec::CollabType::PickPlace;
}

Binder binder_of(std::string_view prompt) {
  auto m = field(prompt, "Object dict (name: [id, room]): ");
  if (m.empty()) return Binder({});
  return Binder(rec::parse_mapping(m));
}

std::string intention_reply(const rec::IntentionRecord& r) { return rec::render_intention_block(r) + "\n"; }

std::string tasks_reply(const std::string& time, const std::string& intention,
                        const std::vector<rec::TaskRecord>& tasks) {
  return "Time: " + time + "\nIntention: " + intention + ".\nTasks:\n" + rec::render_tasks(tasks) + "\n";
}

/// Family implied by an observation sentence, if any.
std::optional<std::size_t> family_from_observation(const Catalog& cat, std::string_view obs) {
  auto event = obs.substr(0, obs.find("Description:"));
  static const std::regex quoted("'([^']+)'");
  std::string ev(event);
  std::smatch m;
  if (std::regex_search(ev, m, quoted)) {
    auto places = cat.place_words_in(ev);
    for (const auto& p : places) {
      if (auto f = cat.family_by_first_motion(m[1].str(), p)) return f;
    }
  }
  auto picks = cat.pick_words_in(ev);
  auto places = cat.place_words_in(ev);
  for (const auto& a : picks) {
    for (const auto& b : places) {
      if (auto f = cat.family_by_first_pickplace(a, b)) return f;
    }
  }
  return std::nullopt;
}

std::vector<std::string> top_words(std::string_view text, std::size_t k) {
  static const std::set<std::string> skip = {"am", "pm", "the", "a", "and", "of", "to", "for", "in", "on"};
  std::map<std::string, int> count;
  std::vector<std::string> order;
  for (const auto& w : text::words(text)) {
    if (skip.count(w) || std::isdigit(static_cast<unsigned char>(w[0]))) continue;
    if (count[w]++ == 0) order.push_back(w);
  }
  std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) { return count[a] > count[b]; });
  if (order.size() > k) order.resize(k);
  return order;
}

rec::TaskRecord robot_offer(const MotionSpec& s, const std::string& context) {
  rec::TaskRecord t;
  auto purpose = purpose_of(s.thought);
  t.thought = "Hand over a " + s.inhand + " for " + (purpose.empty() ? context : purpose);
  t.act = rec::OfferAct{s.inhand};
  return t;
}

void add_reasons(std::vector<rec::TaskRecord>& tasks) {
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    tasks[i].task_index = static_cast<int>(i);
    tasks[i].reason_human = "Suits the inferred habits";
    tasks[i].reason_intentions = "Serves the inferred intention";
    tasks[i].reason_tasks = "Consistent with the observed task";
  }
}

std::vector<rec::TaskRecord> parse_listed_tasks(std::string_view prompt, std::string_view label,
                                               std::string_view stop = {}) {
  auto body = section(prompt, label, stop);
  if (text::trim(body).empty()) return {};
  return rec::parse_tasks("Tasks:\n" + body);
}

}  // namespace

void install_mock(gw::MockChat& mock, const Catalog& cat) {
  const Catalog* c = &cat;

  mock.add_responder("profile_extension", [c](const gw::ChatRequest& r) -> std::optional<std::string> {
    auto profile = field(r.prompt, "1. Human 1 profile: ");
    if (const auto* p = c->persona_in(profile)) return p->extended_profile;
    auto first = field(r.prompt, "Human 1: ");
    return "About me: " + profile + (first.empty() ? "" : " I once said: " + first);
  });

  auto big5_for = [c](std::string_view prompt) {
    if (const auto* p = c->persona_in(prompt)) return p->big5;
    auto h = fnv1a64(prompt);
    persona::BigFive b;
    for (std::size_t i = 0; i < 5; ++i) b.v[i] = 1.0 + 0.5 * static_cast<double>((h >> (8 * i)) % 9);
    return b;
  };

  mock.add_responder("big5_direct", [big5_for](const gw::ChatRequest& r) -> std::optional<std::string> {
    return big5_for(r.prompt).to_dict_text();
  });

  mock.add_responder("big5_test", [big5_for](const gw::ChatRequest& r) -> std::optional<std::string> {
    auto b = big5_for(r.prompt);
    std::string out;
    for (int i = 1; i <= 50; ++i) {
      int a = static_cast<int>(std::lround(b[persona::item_trait(i)]));
      if (persona::item_key(i) < 0) a = 6 - a;
      out += std::to_string(i) + ". " + std::to_string(a) + "\n";
    }
    return out;
  });

  mock.add_responder("intention_proposal", [c](const gw::ChatRequest& r) -> std::optional<std::string> {
    int slot = slot_of(r.prompt);
    const auto* p = c->persona_in(r.prompt);
    const auto& pid = p ? p->id : c->personas()[fnv1a64(r.prompt) % c->personas().size()].id;
    ThemeRef ref{c->family_index(pid, slot), draw_variant(c->epsilon(), r.seed.value_or(0))};
    return intention_reply(make_intention(c->theme(ref), world::DayClock::slot_label(slot)));
  });

  mock.add_responder("task_proposal", [c](const gw::ChatRequest& r) -> std::optional<std::string> {
    auto intention = field(r.prompt, "1. Intention for the current hour: ");
    auto ref = c->find_intention(intention).value_or(c->nearest_theme(intention));
    auto tasks = bind_theme(c->theme(ref), type_of(r.prompt), binder_of(r.prompt));
    return tasks_reply(field(r.prompt, "Current time: "), intention, tasks);
  });

  auto reflect = [](bool fix_ids) {
    return [fix_ids](const gw::ChatRequest& r) -> std::optional<std::string> {
      auto tasks = parse_listed_tasks(r.prompt, "Proposed tasks:");
      auto b = binder_of(r.prompt);
      std::vector<std::string> notes;
      for (auto& t : tasks) {
        std::string note = "No mistake or change made.";
        if (fix_ids) {
          auto fix = [&](int& id, std::string& name) {
            auto by_name = b.by_name(name);
            if (by_name && by_name->id != id) {
              note = "Corrected the id of " + name + " to " + std::to_string(by_name->id) + ".";
              id = by_name->id;
            } else if (!by_name) {
              if (auto by_id = b.by_id(id)) {
                note = "Corrected the name of object " + std::to_string(id) + ".";
                name = by_id->name;
              }
            }
          };
          if (auto* a = std::get_if<rec::PickPlaceAct>(&t.act)) {
            fix(a->pick_id, a->pick_name);
            fix(a->place_id, a->place_name);
          } else if (auto* m = std::get_if<rec::MotionAct>(&t.act)) {
            fix(m->inter_obj_id, m->inter_obj_name);
          }
        }
        notes.push_back(note);
      }
      std::string out = "Time: " + field(r.prompt, "Current time: ") + "\nIntention: " +
                        field(r.prompt, "1. Intention for the current hour: ") + "\nReflect Each Task:\n";
      for (std::size_t i = 0; i < notes.size(); ++i) out += std::to_string(i + 1) + ". " + notes[i] + "\n";
      return out + "Revised Tasks:\n" + rec::render_tasks(tasks) + "\n";
    };
  };
  mock.add_responder("reflect_profile", reflect(false));
  mock.add_responder("reflect_world", reflect(true));

  mock.add_responder("feedback", [c](const gw::ChatRequest& r) -> std::optional<std::string> {
    auto human = parse_listed_tasks(r.prompt, "2. Your tasks for the hour:", "3. Tasks the robot");
    auto robot = parse_listed_tasks(r.prompt, "3. Tasks the robot carried out to help you:");
    std::vector<bool> labels;
    std::string reasons;
    for (std::size_t i = 0; i < robot.size(); ++i) {
      labels.push_back(serves(*c, robot[i], human));
      reasons += std::to_string(i + 1) + (labels.back() ? ". It helped one of my tasks.\n" : ". I did not need it.\n");
    }
    return "Tasks: " + rec::render_labels(labels) + "\nReasons_tasks:\n" + reasons;
  });

  mock.add_responder("intention_discovery", [c](const gw::ChatRequest& r) -> std::optional<std::string> {
    auto obs = field(r.prompt, "1. Observation of the human: ");
    int slot = slot_of(r.prompt);
    auto rng = rng_for(r);
    std::vector<std::string> cands;
    if (auto f = family_from_observation(*c, obs)) {
      const auto& fam = c->families()[*f];
      for (const auto& t : fam.themes) cands.push_back(t.intention);
      for (const auto& p : c->personas()) {
        if (p.id != fam.persona) cands.push_back(c->theme({c->family_index(p.id, fam.hour), Variant::Base}).intention);
      }
    } else {
      auto near = c->nearest_theme(obs);
      const auto& fam = c->families()[near.family];
      for (const auto& t : fam.themes) cands.push_back(t.intention);
      for (std::size_t k = 1; cands.size() < 5; ++k) {
        cands.push_back(c->families()[(near.family + 12 * k) % c->families().size()].themes[0].intention);
      }
    }
    cands.resize(5);
    for (std::size_t i = cands.size(); i > 1; --i) std::swap(cands[i - 1], cands[rng() % i]);
    std::string out = "Time: " + world::DayClock::slot_label(slot) + "\n";
    for (std::size_t i = 0; i < cands.size(); ++i) {
      out += "Intention " + std::to_string(i + 1) + ": " + cands[i] + ".\n";
      out += "Reason_human: Consistent with the inferred profile.\nReason_intentions: Continues the day.\n";
      out += "Reason_tasks: Explains the observed task.\nReason_vis: The objects the human handled.\n";
    }
    return out;
  });

  mock.add_responder("task_discovery", [c](const gw::ChatRequest& r) -> std::optional<std::string> {
    auto intention = field(r.prompt, "1. Human intention for the current hour: ");
    auto type = type_of(r.prompt);
    auto b = binder_of(r.prompt);
    auto rng = rng_for(r);
    const auto& fams = c->families();
    std::vector<rec::TaskRecord> tasks;
    std::optional<ThemeRef> ref = c->find_intention(intention);
    std::optional<std::size_t> observed;
    if (!ref) observed = family_from_observation(*c, intention);
    auto add = [&](const Theme& th, std::size_t i) {
      if (type == rec::CollabType::PickPlace) {
        tasks.push_back(bind_task(th.type1.at(i), b));
      } else {
        tasks.push_back(robot_offer(th.type2.at(i), th.context));
      }
    };
    ThemeRef own = ref.value_or(ThemeRef{observed.value_or(0), Variant::Base});
    if (ref || !observed) {
      if (!ref) own = c->nearest_theme(intention);
      const auto& th = c->theme(own);
      if (type == rec::CollabType::PickPlace) {
        for (std::size_t i = 0; i < th.type1.size(); ++i) add(th, i);
      } else {
        for (std::size_t i = 1; i <= 3; ++i) add(th, i);
      }
    } else {
      // Intention unknown: mix the observed family's themes.
      const auto& fam = fams[*observed];
      std::size_t first = type == rec::CollabType::PickPlace ? 0 : 1;
      add(fam.get(Variant::Base), first);
      add(fam.get(Variant::Base), first + 1);
      add(fam.get(Variant::Lookalike), first + 1);
      add(fam.get(Variant::Distinct), first + 1);
    }
    while (tasks.size() < 5) {
      ThemeRef other{static_cast<std::size_t>(rng() % fams.size()), static_cast<Variant>(rng() % 3)};
      if (other == own) continue;
      add(c->theme(other), 1 + static_cast<std::size_t>(rng() % 2));
    }
    for (std::size_t i = tasks.size(); i > 1; --i) std::swap(tasks[i - 1], tasks[rng() % i]);
    add_reasons(tasks);
    return tasks_reply(field(r.prompt, "Current time: "), intention, tasks);
  });

  mock.add_responder("traits_inference", [c](const gw::ChatRequest& r) -> std::optional<std::string> {
    auto intentions = field(r.prompt, "1. Human intentions so far (empty means this is your first estimate): ");
    auto words = word_set(intentions);
    const CatalogPersona* best = &c->personas().front();
    std::size_t best_n = 0;
    for (const auto& p : c->personas()) {
      std::set<std::string> pw;
      for (int h = 0; h < world::DayClock::kSlots; ++h) {
        const auto& fam = c->families()[c->family_index(p.id, h)];
        for (int v = 0; v < 2; ++v) {
          for (const auto& w : word_set(fam.themes[static_cast<std::size_t>(v)].intention)) pw.insert(w);
        }
      }
      std::size_t n = 0;
      for (const auto& w : words) n += pw.count(w);
      if (n > best_n) {
        best_n = n;
        best = &p;
      }
    }
    auto top = top_words(intentions, 12);
    std::string profile = top.empty() ? "Little is known yet." : "Enjoys " + text::join(top, " ") + ".";
    return "Scores: " + best->big5.to_dict_text() + "\nProfile: " + profile +
           "\nReasons_ocean: Inferred from the recurring activities.\nReasons_profile: Most frequent themes.\n";
  });

  mock.add_responder("judge", [c](const gw::ChatRequest& r) -> std::optional<std::string> {
    auto intention = field(r.prompt, "1. The human's true intention for the hour: ");
    auto ref = c->find_intention(intention).value_or(c->nearest_theme(intention));
    const auto& th = c->theme(ref);
    std::vector<bool> labels;
    for (const auto& line : text::split_lines(section(r.prompt, "2. Tasks the robot carried out:"))) {
      auto t = text::trim(line);
      auto dot = t.find(". ");
      if (dot == std::string::npos) continue;
      auto desc = t.substr(dot + 2);
      bool yes = false;
      if (text::starts_with_ci(desc, "offer ")) {
        auto item = text::lower(text::trim(desc.substr(6)));
        for (const auto& s : th.type2) yes = yes || text::lower(s.inhand) == item;
      } else {
        auto to = desc.rfind(" to ");
        auto picks = c->pick_words_in(desc.substr(0, to));
        auto places = c->place_words_in(to == std::string::npos ? "" : desc.substr(to));
        for (const auto& s : th.type1) {
          yes = yes || (!picks.empty() && !places.empty() && picks.front() == s.pick && places.front() == s.place);
        }
      }
      labels.push_back(yes);
    }
    std::string out = "Tasks: " + rec::render_labels(labels) + "\nReasons_tasks:\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
      out += std::to_string(i + 1) + (labels[i] ? ". Serves the intention.\n" : ". Unrelated.\n");
    }
    return out;
  });
}

}  // namespace hrc::scenario
