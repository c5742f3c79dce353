#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hrc::prompts {

using Vars = std::map<std::string, std::string>;

/// Template ids shipped under assets/prompts/.
std::vector<std::string> template_ids();
std::string_view template_text(std::string_view id);

/// Substitutes `{{name}}` placeholders. Missing or unused variables are errors.
std::string render(std::string_view id, const Vars& vars);

/// Placeholder names appearing in a template, in first-use order.
std::vector<std::string> placeholders(std::string_view id);

/// Recomputes every template digest and compares against the manifest.
/// Returns the ids whose digest differs (empty when all match).
std::vector<std::string> verify_checksums();

/// Best-effort recovery of the template id from a rendered prompt: the template
/// whose fixed lines all occur in the prompt, preferring the most specific one.
std::string identify(std::string_view prompt);

}  // namespace hrc::prompts
