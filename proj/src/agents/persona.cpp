#include "wtown/agents/persona.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace wtown::agents {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

PersonaText parse_persona(std::string_view text) {
    PersonaText p;
    std::string* current = nullptr;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(line.front())) && current) {
            *current += ' ' + t;
            continue;
        }
        const auto colon = t.find(':');
        if (colon == std::string::npos) {
            throw ConfigError(fmt::format("persona line {}: expected 'key: value'", lineno));
        }
        std::string key = trim(t.substr(0, colon));
        std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
        const std::string value = trim(t.substr(colon + 1));
        if (key == "profession") {
            current = &p.profession;
        } else if (key == "personality") {
            current = &p.personality;
        } else if (key == "background") {
            current = &p.background;
        } else {
            throw ConfigError(fmt::format("persona line {}: unknown key '{}'", lineno, key));
        }
        *current = value;
    }
    if (!p.complete()) {
        throw ConfigError("persona needs non-empty profession, personality and background");
    }
    return p;
}

PersonaText load_persona_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot read persona file {}", path.string()));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_persona(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

void attach_personas(std::vector<PlayerSpec>& roster, const std::filesystem::path& dir) {
    for (auto& p : roster) {
        std::string stem = p.id.value;
        std::transform(stem.begin(), stem.end(), stem.begin(), [](unsigned char c) { return std::tolower(c); });
        p.persona = load_persona_file(dir / (stem + ".persona"));
    }
}

}  // namespace wtown::agents
