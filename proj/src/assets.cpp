#include "hrc/assets.hpp"

#include <string>
#include <utility>
#include <vector>

#include "hrc/error.hpp"

namespace hrc::assets {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& table();
}

std::string_view get(std::string_view rel_path) {
  for (const auto& [path, body] : detail::table()) {
    if (path == rel_path) return body;
  }
  throw LoadError("no bundled asset named " + std::string(rel_path));
}

bool exists(std::string_view rel_path) {
  for (const auto& entry : detail::table()) {
    if (entry.first == rel_path) return true;
  }
  return false;
}

std::vector<std::string> list(std::string_view prefix) {
  std::vector<std::string> out;
  for (const auto& entry : detail::table()) {
    if (entry.first.substr(0, prefix.size()) == prefix) out.emplace_back(entry.first);
  }
  return out;
}

}  // namespace hrc::assets
