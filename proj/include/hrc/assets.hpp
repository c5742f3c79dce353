#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hrc::assets {

/// Contents of a bundled asset, addressed by its path relative to assets/.
/// Throws LoadError when absent.
std::string_view get(std::string_view rel_path);

bool exists(std::string_view rel_path);

/// Sorted relative paths that start with `prefix`.
std::vector<std::string> list(std::string_view prefix = {});

}  // namespace hrc::assets
