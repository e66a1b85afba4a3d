#include "wtown/engine/types.hpp"

#include <set>

#include <fmt/format.h>

namespace wtown {

void GameConfig::validate() const {
    if (days < 1) {
        throw ConfigError(fmt::format("days must be >= 1, got {}", days));
    }
    if (hp_max < 1 || hp_start < 1 || hp_start > hp_max) {
        throw ConfigError(fmt::format("need 1 <= hp_start <= hp_max, got {} / {}", hp_start, hp_max));
    }
    if (water_gain < 0) {
        throw ConfigError("water_gain must be non-negative");
    }
    if (supply_low < 1 || supply_low > supply_high) {
        throw ConfigError(
            fmt::format("need 1 <= supply_low <= supply_high, got {}..{}", supply_low, supply_high));
    }
    if (roster.empty()) {
        throw ConfigError("roster is empty");
    }
    std::set<PlayerId> seen;
    for (const auto& p : roster) {
        if (p.id.value.empty()) {
            throw ConfigError("player id must not be empty");
        }
        if (!seen.insert(p.id).second) {
            throw ConfigError(fmt::format("duplicate player id '{}'", p.id.value));
        }
        if (p.requirement < 1) {
            throw ConfigError(fmt::format("{}: requirement must be >= 1", p.id.value));
        }
        if (p.salary < 1) {
            throw ConfigError(fmt::format("{}: salary must be >= 1", p.id.value));
        }
        if (p.persona && !p.persona->complete()) {
            throw ConfigError(fmt::format("{}: persona needs profession, personality and background",
                                          p.id.value));
        }
    }
}

const PlayerSpec& GameConfig::player(const PlayerId& id) const {
    if (auto i = index_of(id)) {
        return roster[*i];
    }
    throw ProtocolError(fmt::format("unknown player '{}'", id.value));
}

std::optional<std::size_t> GameConfig::index_of(const PlayerId& id) const {
    for (std::size_t i = 0; i < roster.size(); ++i) {
        if (roster[i].id == id) {
            return i;
        }
    }
    return std::nullopt;
}

std::vector<PlayerSpec> canonical_roster() {
    auto make = [](const char* name, Units req, Money salary) {
        PlayerSpec p;
        p.id = PlayerId{name};
        p.name = name;
        p.requirement = req;
        p.salary = salary;
        return p;
    };
    return {
        make("Alex", 8, 70),
        make("Bob", 9, 75),
        make("Cindy", 10, 100),
        make("David", 11, 120),
        make("Eric", 12, 120),
    };
}

SupplyBounds supply_bounds(Abundance a) {
    switch (a) {
        case Abundance::low:
            return {10, 20};
        case Abundance::medium:
            return {15, 25};
        case Abundance::high:
            return {20, 30};
    }
    throw ConfigError("unknown abundance level");
}

std::string to_string(Abundance a) {
    switch (a) {
        case Abundance::low:
            return "low";
        case Abundance::medium:
            return "medium";
        case Abundance::high:
            return "high";
    }
    return "?";
}

Abundance abundance_from_string(const std::string& s) {
    if (s == "low" || s == "Low") return Abundance::low;
    if (s == "medium" || s == "Medium") return Abundance::medium;
    if (s == "high" || s == "High") return Abundance::high;
    throw ConfigError(fmt::format("unknown abundance '{}' (expected low, medium or high)", s));
}

}  // namespace wtown
