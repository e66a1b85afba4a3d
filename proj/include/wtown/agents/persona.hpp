#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "wtown/engine/types.hpp"

namespace wtown::agents {

// Persona documents are "key: value" lines with the keys profession,
// personality and background. Indented lines continue the previous value;
// '#' lines are comments. All three keys are required.
PersonaText parse_persona(std::string_view text);
PersonaText load_persona_file(const std::filesystem::path& path);

// Attaches <dir>/<lowercased player id>.persona to each roster entry.
// Throws ConfigError when a file is missing.
void attach_personas(std::vector<PlayerSpec>& roster, const std::filesystem::path& dir);

}  // namespace wtown::agents
