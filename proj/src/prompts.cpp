#include "hrc/prompts.hpp"

#include <algorithm>

#include "hrc/assets.hpp"
#include "hrc/error.hpp"
#include "hrc/util.hpp"

namespace hrc::prompts {

std::vector<std::string> template_ids() {
  std::vector<std::string> out;
  for (const auto& p : assets::list("prompts/")) {
    if (p.size() > 4 && p.substr(p.size() - 4) == ".txt") {
      out.push_back(p.substr(8, p.size() - 12));
    }
  }
  return out;
}

std::string_view template_text(std::string_view id) {
  return assets::get("prompts/" + std::string(id) + ".txt");
}

std::vector<std::string> placeholders(std::string_view id) {
  auto body = template_text(id);
  std::vector<std::string> out;
  std::size_t pos = 0;
  while ((pos = body.find("{{", pos)) != std::string_view::npos) {
    auto end = body.find("}}", pos);
    if (end == std::string_view::npos) break;
    std::string name(body.substr(pos + 2, end - pos - 2));
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    pos = end + 2;
  }
  return out;
}

std::string render(std::string_view id, const Vars& vars) {
  auto body = template_text(id);
  std::string out;
  out.reserve(body.size() + 256);
  std::vector<std::string> used;
  std::size_t pos = 0;
  while (true) {
    auto open = body.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(body.substr(pos));
      break;
    }
    auto close = body.find("}}", open);
    if (close == std::string_view::npos) throw LoadError("unterminated placeholder in " + std::string(id));
    out.append(body.substr(pos, open - pos));
    std::string name(body.substr(open + 2, close - open - 2));
    auto it = vars.find(name);
    if (it == vars.end()) {
      throw ValidationError("template '" + std::string(id) + "' needs variable '" + name + "'");
    }
    out.append(it->second);
    used.push_back(name);
    pos = close + 2;
  }
  for (const auto& [k, v] : vars) {
    if (std::find(used.begin(), used.end(), k) == used.end()) {
      throw ValidationError("template '" + std::string(id) + "' has no placeholder '" + k + "'");
    }
  }
  return out;
}

std::vector<std::string> verify_checksums() {
  auto manifest = Json::parse(assets::get("prompts/manifest.json"));
  std::vector<std::string> bad;
  for (const auto& id : template_ids()) {
    auto digest = sha256_hex(template_text(id));
    if (!manifest.contains(id) || manifest[id].get<std::string>() != digest) bad.push_back(id);
  }
  for (const auto& [id, _] : manifest.items()) {
    if (!assets::exists("prompts/" + id + ".txt")) bad.push_back(id);
  }
  return bad;
}

std::string identify(std::string_view prompt) {
  std::string best;
  std::size_t best_len = 0;
  for (const auto& id : template_ids()) {
    std::size_t fixed = 0;
    bool all = true;
    for (const auto& line : text::split_lines(template_text(id))) {
      auto t = text::trim(line);
      if (t.empty() || t.find("{{") != std::string::npos) continue;
      if (prompt.find(t) == std::string_view::npos) {
        all = false;
        break;
      }
      fixed += t.size();
    }
    if (all && fixed > best_len) {
      best = id;
      best_len = fixed;
    }
  }
  if (best.empty()) throw ValidationError("prompt does not match any bundled template");
  return best;
}

}  // namespace hrc::prompts
