#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "wtown/engine/types.hpp"

namespace wtown::agents {

// Fills {name} placeholders. Every placeholder in the template must have a
// value; a missing one throws ConfigError naming it.
std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& values);

// The three message templates used in a game. Built-in copies are compiled
// from prompts/*.txt; a directory with files of the same names overrides.
struct PromptSet {
    std::string system_rules;
    std::string bid_call;
    std::string results_announcement;

    static const PromptSet& builtin();
    static PromptSet from_directory(const std::filesystem::path& dir);
};

// "   - Alex: Water requirement - 8 units/day; Daily Salary - $70/day" per player.
std::string render_roster_block(const GameConfig& config);

// Rules introduction for one player. With persona_enabled the player's
// persona is appended after the rules; a missing persona is a ConfigError.
std::string render_system_prompt(const PlayerSpec& player,
                                 const GameConfig& config,
                                 bool persona_enabled,
                                 const PromptSet& prompts = PromptSet::builtin());

std::string render_status(const PlayerState& state, const GameConfig& config);

std::string render_bid_call(const PlayerSpec& player,
                            int day,
                            Units supply,
                            const PlayerState& state,
                            const GameConfig& config,
                            const PromptSet& prompts = PromptSet::builtin());

std::string render_results_announcement(const RoundRecord& round,
                                        const GameConfig& config,
                                        const PromptSet& prompts = PromptSet::builtin());

// Post-round status of every resident: health points, remaining budget and
// consecutive No-Water Days.
std::string render_participants_info(const RoundRecord& round, const GameConfig& config);

}  // namespace wtown::agents
