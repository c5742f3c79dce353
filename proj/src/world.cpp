#include "hrc/world.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "hrc/assets.hpp"
#include "hrc/error.hpp"

namespace hrc::world {

std::string_view to_string(Holder h) {
  switch (h) {
    case Holder::Surface: return "room-surface";
    case Holder::HumanHand: return "human-hand";
    case Holder::RobotGripper: return "robot-gripper";
  }
  return "?";
}

std::string_view to_string(Agent a) { return a == Agent::Human ? "human" : "robot"; }

Agent agent_from_string(std::string_view s) {
  if (s == "human") return Agent::Human;
  if (s == "robot") return Agent::Robot;
  throw ValidationError("unknown agent '" + std::string(s) + "'");
}

static Holder holder_from_string(std::string_view s) {
  if (s == "room-surface") return Holder::Surface;
  if (s == "human-hand") return Holder::HumanHand;
  if (s == "robot-gripper") return Holder::RobotGripper;
  throw LoadError("unknown holder '" + std::string(s) + "'");
}

static Holder hand_of(Agent a) {
  return a == Agent::Human ? Holder::HumanHand : Holder::RobotGripper;
}

const std::vector<std::string>& dynamic_categories() {
  static const std::vector<std::string> v = {
      "trashcan",        "decor",        "dining ware",        "plant",
      "electronics",     "animate object", "apparel",          "liquid container",
      "kitchen ware",    "tray",         "bathroom accessory", "gym equipment",
      "toy",             "wearable"};
  return v;
}

const std::vector<std::string>& static_categories() {
  static const std::vector<std::string> v = {
      "storage furniture",       "support furniture",   "seating furniture",
      "floor covering",          "lighting",            "sleeping furniture",
      "bathroom fixtures",       "mirror",              "large kitchen appliance",
      "large appliance",         "kitchen bathroom fixture", "vehicle",
      "heating cooling",         "medium kitchen appliance", "display",
      "arch",                    "curtain",             "small kitchen appliance"};
  return v;
}

bool is_dynamic_category(std::string_view category) {
  const auto& d = dynamic_categories();
  return std::find(d.begin(), d.end(), category) != d.end();
}

bool is_known_category(std::string_view category) {
  if (is_dynamic_category(category)) return true;
  const auto& s = static_categories();
  return std::find(s.begin(), s.end(), category) != s.end();
}

const ObjectInstance* Scene::find(int id) const {
  auto it = std::lower_bound(objects.begin(), objects.end(), id,
                             [](const ObjectInstance& o, int v) { return o.id < v; });
  return it != objects.end() && it->id == id ? &*it : nullptr;
}

ObjectInstance* Scene::find(int id) {
  return const_cast<ObjectInstance*>(std::as_const(*this).find(id));
}

bool Scene::has_room(std::string_view room) const {
  return std::find(rooms.begin(), rooms.end(), room) != rooms.end();
}

std::size_t Scene::static_count() const {
  return static_cast<std::size_t>(
      std::count_if(objects.begin(), objects.end(), [](const auto& o) { return !o.dynamic; }));
}

std::size_t Scene::dynamic_count() const { return objects.size() - static_count(); }

std::string DayClock::slot_label(int slot) {
  if (slot < 0 || slot >= kSlots) throw ValidationError("hour slot out of range");
  int h = kFirstHour + slot;
  const char* suffix = h >= 12 ? " pm" : " am";
  int h12 = h > 12 ? h - 12 : h;
  return std::to_string(h12) + suffix;
}

std::optional<int> DayClock::parse_slot_label(std::string_view label) {
  auto t = text::lower(text::trim(label));
  while (!t.empty() && (t.back() == '.' || t.back() == ' ')) t.pop_back();
  std::size_t i = 0;
  int h = 0;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) h = h * 10 + (t[i++] - '0');
  if (i == 0 || i > 2) return std::nullopt;
  if (i < t.size() && t[i] == ':') {
    i += 3;  // minutes are ignored
    if (i > t.size()) return std::nullopt;
  }
  auto rest = text::trim(std::string_view(t).substr(std::min(i, t.size())));
  if (rest == "pm" && h < 12) h += 12;
  else if (rest == "am" && h == 12) h = 0;
  else if (!rest.empty() && rest != "am" && rest != "pm") return std::nullopt;
  int slot = h - kFirstHour;
  if (slot < 0 || slot >= kSlots) return std::nullopt;
  return slot;
}

std::string_view to_string(Event::Kind k) {
  switch (k) {
    case Event::Kind::Pick: return "pick";
    case Event::Kind::Place: return "place";
    case Event::Kind::Motion: return "motion";
    case Event::Kind::Offer: return "offer";
  }
  return "?";
}

static Event::Kind kind_from_string(std::string_view s) {
  if (s == "pick") return Event::Kind::Pick;
  if (s == "place") return Event::Kind::Place;
  if (s == "motion") return Event::Kind::Motion;
  if (s == "offer") return Event::Kind::Offer;
  throw LoadError("unknown event kind '" + std::string(s) + "'");
}

Json event_to_json(const Event& e) {
  Json j{{"kind", to_string(e.kind)},
         {"agent", to_string(e.agent)},
         {"day", e.at.day},
         {"slot", e.at.slot}};
  if (e.object_id >= 0) j["object_id"] = e.object_id;
  if (e.target_id >= 0) j["target_id"] = e.target_id;
  if (!e.room.empty()) j["room"] = e.room;
  if (!e.motion.empty()) j["motion"] = e.motion;
  if (!e.item.empty()) j["item"] = e.item;
  return j;
}

Event event_from_json(const Json& j) {
  Event e;
  e.kind = kind_from_string(j.at("kind").get<std::string>());
  e.agent = agent_from_string(j.at("agent").get<std::string>());
  e.at = {j.at("day").get<int>(), j.at("slot").get<int>()};
  e.object_id = j.value("object_id", -1);
  e.target_id = j.value("target_id", -1);
  e.room = j.value("room", "");
  e.motion = j.value("motion", "");
  e.item = j.value("item", "");
  return e;
}

const ObjectInstance* WorldState::held_by(Agent agent) const {
  for (const auto& o : scene.objects) {
    if (o.holder == hand_of(agent)) return &o;
  }
  return nullptr;
}

namespace {

ObjectInstance parse_object(const Json& o, bool seeded) {
  ObjectInstance obj;
  auto label = [&]() {
    return o.contains("name") && o["name"].is_string() ? "'" + o["name"].get<std::string>() + "'"
                                                       : o.dump();
  };
  for (const char* key : {"id", "name", "category", "room"}) {
    if (!o.contains(key)) throw LoadError(std::string("object ") + label() + " lacks '" + key + "'");
  }
  if (!seeded && !o.contains("supported")) {
    throw LoadError("object " + label() + " lacks 'supported'");
  }
  try {
    obj.id = o.at("id").get<int>();
    obj.name = o.at("name").get<std::string>();
    obj.category = o.at("category").get<std::string>();
    obj.room = o.at("room").get<std::string>();
    obj.cls = o.value("class", obj.category);
    obj.supported = seeded ? false : o.at("supported").get<bool>();
  } catch (const Json::exception& e) {
    throw LoadError("object " + label() + ": " + e.what());
  }
  if (!is_known_category(obj.category)) {
    throw LoadError("object " + label() + " (id " + std::to_string(obj.id) +
                    ") has unknown category '" + obj.category + "'");
  }
  obj.dynamic = is_dynamic_category(obj.category) && !obj.supported;
  if (seeded && !obj.dynamic) {
    throw LoadError("seeded object " + label() + " must use a dynamic category");
  }
  if (o.contains("holder")) obj.holder = holder_from_string(o["holder"].get<std::string>());
  return obj;
}

}  // namespace

Scene load_scene(const Json& doc) {
  if (!doc.is_object()) throw LoadError("scene document must be an object");
  Scene scene;
  if (doc.contains("name")) {
    scene.name = doc["name"].get<std::string>();
  } else if (doc.contains("scene")) {
    scene.name = doc["scene"].get<std::string>();
  } else {
    throw LoadError("scene document lacks 'name'");
  }
  if (!doc.contains("rooms") || !doc["rooms"].is_array()) {
    throw LoadError("scene '" + scene.name + "' lacks a 'rooms' list");
  }
  for (const auto& r : doc["rooms"]) scene.rooms.push_back(r.get<std::string>());
  if (!doc.contains("objects") || !doc["objects"].is_array()) {
    throw LoadError("scene '" + scene.name + "' lacks an 'objects' list");
  }
  for (const auto& o : doc["objects"]) scene.objects.push_back(parse_object(o, false));
  if (doc.contains("seeded_objects")) {
    for (const auto& o : doc["seeded_objects"]) scene.objects.push_back(parse_object(o, true));
  }

  std::set<int> ids;
  for (const auto& o : scene.objects) {
    if (!ids.insert(o.id).second) {
      throw LoadError("duplicate object id " + std::to_string(o.id) + " ('" + o.name + "')");
    }
    if (!scene.has_room(o.room)) {
      throw LoadError("object '" + o.name + "' (id " + std::to_string(o.id) +
                      ") is in undeclared room '" + o.room + "'");
    }
  }
  if (scene.rooms.empty()) throw LoadError("scene '" + scene.name + "' has no rooms");
  if (scene.objects.empty()) throw LoadError("scene '" + scene.name + "' has no objects");
  if (scene.static_count() == 0) throw LoadError("scene '" + scene.name + "' has no static objects");
  if (scene.dynamic_count() == 0) {
    throw LoadError("scene '" + scene.name + "' has no dynamic objects");
  }
  std::sort(scene.objects.begin(), scene.objects.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  return scene;
}

Scene load_scene_file(const std::string& path) { return load_scene(fsio::read_json(path)); }

Json scene_to_json(const Scene& scene) {
  Json objs = Json::array();
  for (const auto& o : scene.objects) {
    Json j{{"id", o.id},       {"name", o.name},           {"category", o.category},
           {"class", o.cls},   {"room", o.room},           {"supported", o.supported}};
    if (o.holder != Holder::Surface) j["holder"] = to_string(o.holder);
    objs.push_back(std::move(j));
  }
  return Json{{"version", 1}, {"name", scene.name}, {"rooms", scene.rooms}, {"objects", objs}};
}

std::vector<std::string> bundled_scene_names() {
  std::vector<std::string> out;
  for (const auto& p : assets::list("scenes/")) {
    auto stem = p.substr(7);
    if (stem.size() > 5 && stem.substr(stem.size() - 5) == ".json") {
      out.push_back(stem.substr(0, stem.size() - 5));
    }
  }
  return out;
}

Scene bundled_scene(std::string_view name) {
  auto body = assets::get("scenes/" + std::string(name) + ".json");
  return load_scene(Json::parse(body));
}

std::string py_quote(std::string_view s) {
  // Python's repr prefers single quotes unless the text contains one.
  bool has_single = s.find('\'') != std::string_view::npos;
  bool has_double = s.find('"') != std::string_view::npos;
  char q = has_single && !has_double ? '"' : '\'';
  std::string out(1, q);
  for (char c : s) {
    if (c == '\\' || c == q) out.push_back('\\');
    out.push_back(c);
  }
  out.push_back(q);
  return out;
}

std::string mapping_summary(const Scene& scene, MappingFilter filter) {
  std::string out = "{";
  bool first = true;
  for (const auto& o : scene.objects) {
    if (filter == MappingFilter::StaticOnly && o.dynamic) continue;
    if (filter == MappingFilter::DynamicOnly && !o.dynamic) continue;
    if (!first) out += ", ";
    first = false;
    out += py_quote(o.name) + ": [" + std::to_string(o.id) + ", " + py_quote(o.room) + "]";
  }
  out += "}";
  return out;
}

void apply_pick(WorldState& w, Agent agent, int object_id) {
  auto* obj = w.scene.find(object_id);
  if (!obj) throw WorldError("pick: no object with id " + std::to_string(object_id));
  if (!obj->dynamic) {
    throw WorldError("pick: '" + obj->name + "' (id " + std::to_string(object_id) +
                     ") is static and cannot be moved");
  }
  if (const auto* held = w.held_by(agent)) {
    throw WorldError("pick: " + std::string(to_string(agent)) + " hand already holds '" +
                     held->name + "'");
  }
  if (obj->holder != Holder::Surface) {
    throw WorldError("pick: '" + obj->name + "' is held by " + std::string(to_string(obj->holder)));
  }
  obj->holder = hand_of(agent);
  Event e;
  e.kind = Event::Kind::Pick;
  e.agent = agent;
  e.at = w.clock;
  e.object_id = object_id;
  e.room = obj->room;
  w.events.push_back(std::move(e));
}

void apply_place(WorldState& w, Agent agent, int object_id, const PlaceTarget& target) {
  auto* obj = w.scene.find(object_id);
  if (!obj || obj->holder != hand_of(agent)) {
    throw WorldError("place: " + std::string(to_string(agent)) + " is not holding object " +
                     std::to_string(object_id));
  }
  std::string room;
  int target_id = -1;
  if (target.object_id) {
    const auto* t = w.scene.find(*target.object_id);
    if (!t) throw WorldError("place: unknown target id " + std::to_string(*target.object_id));
    if (t->id == object_id) throw WorldError("place: cannot place an object on itself");
    if (t->holder != Holder::Surface) {
      throw WorldError("place: target '" + t->name + "' is not resting in a room");
    }
    room = t->room;
    target_id = t->id;
  } else {
    if (!w.scene.has_room(target.room)) {
      throw WorldError("place: unknown target room '" + target.room + "'");
    }
    room = target.room;
  }
  obj->holder = Holder::Surface;
  obj->room = room;
  Event e;
  e.kind = Event::Kind::Place;
  e.agent = agent;
  e.at = w.clock;
  e.object_id = object_id;
  e.target_id = target_id;
  e.room = room;
  w.events.push_back(std::move(e));
}

void record_motion(WorldState& w, Agent agent, std::string motion, int at_object_id,
                   std::string inhand) {
  const auto* at = w.scene.find(at_object_id);
  if (!at) throw WorldError("motion: unknown object id " + std::to_string(at_object_id));
  Event e;
  e.kind = Event::Kind::Motion;
  e.agent = agent;
  e.at = w.clock;
  e.object_id = at_object_id;
  e.room = at->room;
  e.motion = std::move(motion);
  e.item = std::move(inhand);
  w.events.push_back(std::move(e));
}

void record_offer(WorldState& w, std::string item) {
  if (text::trim(item).empty()) throw WorldError("offer: empty object name");
  Event e;
  e.kind = Event::Kind::Offer;
  e.agent = Agent::Robot;
  e.at = w.clock;
  e.item = std::move(item);
  w.events.push_back(std::move(e));
}

void advance_hour(WorldState& w) {
  if (++w.clock.slot == DayClock::kSlots) {
    w.clock.slot = 0;
    ++w.clock.day;
  }
}

Json world_to_json(const WorldState& w) {
  Json events = Json::array();
  for (const auto& e : w.events) events.push_back(event_to_json(e));
  return Json{{"scene", scene_to_json(w.scene)},
              {"day", w.clock.day},
              {"slot", w.clock.slot},
              {"events", events}};
}

WorldState world_from_json(const Json& j) {
  WorldState w(load_scene(j.at("scene")));
  w.clock = {j.at("day").get<int>(), j.at("slot").get<int>()};
  for (const auto& e : j.at("events")) w.events.push_back(event_from_json(e));
  return w;
}

}  // namespace hrc::world
