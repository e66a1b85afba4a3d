#include "wtown/agents/prompts.hpp"

#include <fmt/format.h>

namespace wtown::agents {

namespace {

std::string count_word(std::size_t n) {
    static const char* words[] = {"zero", "one", "two", "three", "four", "five",
                                  "six", "seven", "eight", "nine", "ten"};
    return n < std::size(words) ? words[n] : std::to_string(n);
}

std::string join_names(const std::vector<std::string>& names) {
    if (names.empty()) return "";
    if (names.size() == 1) return names.front();
    std::string out;
    for (std::size_t i = 0; i + 1 < names.size(); ++i) {
        if (i > 0) out += ", ";
        out += names[i];
    }
    return out + " and " + names.back();
}

}  // namespace

std::string render_roster_block(const GameConfig& config) {
    std::string out;
    for (std::size_t i = 0; i < config.roster.size(); ++i) {
        const auto& p = config.roster[i];
        if (i > 0) out += '\n';
        out += fmt::format("   - {}: Water requirement - {} units/day; Daily Salary - ${}/day", p.name,
                           p.requirement, p.salary);
    }
    return out;
}

std::string render_system_prompt(const PlayerSpec& player,
                                 const GameConfig& config,
                                 bool persona_enabled,
                                 const PromptSet& prompts) {
    std::string text = render_template(prompts.system_rules,
                                       {{"player", player.name},
                                        {"days", std::to_string(config.days)},
                                        {"resident_count", count_word(config.roster.size())},
                                        {"hp_max", std::to_string(config.hp_max)},
                                        {"hp_start", std::to_string(config.hp_start)},
                                        {"water_gain", std::to_string(config.water_gain)},
                                        {"lower", std::to_string(config.supply_low)},
                                        {"upper", std::to_string(config.supply_high)},
                                        {"roster", render_roster_block(config)}});
    if (persona_enabled) {
        if (!player.persona || !player.persona->complete()) {
            throw ConfigError(fmt::format("persona enabled but '{}' has no complete persona", player.name));
        }
        const auto& p = *player.persona;
        text += fmt::format("\n\nYour persona:\nProfession: {}\nPersonality: {}\nBackground: {}", p.profession,
                            p.personality, p.background);
    }
    return text;
}

std::string render_status(const PlayerState& state, const GameConfig& config) {
    return fmt::format("Health Points: {}/{}\nBalance: ${}\nNo-Water Days: {}", state.hp, config.hp_max,
                       state.balance, state.no_water_days);
}

std::string render_bid_call(const PlayerSpec& player,
                            int day,
                            Units supply,
                            const PlayerState& state,
                            const GameConfig& config,
                            const PromptSet& prompts) {
    return render_template(prompts.bid_call, {{"player", player.name},
                                              {"round", std::to_string(day)},
                                              {"supply_amount", std::to_string(supply)},
                                              {"status", render_status(state, config)}});
}

std::string render_results_announcement(const RoundRecord& round,
                                        const GameConfig& config,
                                        const PromptSet& prompts) {
    std::string offers;
    for (std::size_t i = 0; i < round.bids.size(); ++i) {
        const auto& b = round.bids[i];
        const auto& spec = config.player(b.player);
        if (i > 0) offers += "\n\n";
        if (b.amount) {
            offers += fmt::format("{}: ${} for {} units", spec.name, *b.amount, spec.requirement);
        } else {
            offers += fmt::format("{}: did not participate in today's auction", spec.name);
        }
    }
    if (offers.empty()) {
        offers = "No resident participated in today's auction.";
    }

    std::vector<std::string> names;
    for (const auto& w : round.winners) {
        names.push_back(config.player(w.player).name);
    }
    const std::string allocation =
        names.empty() ? "no one, as there are no allocations today" : join_names(names);

    return render_template(prompts.results_announcement, {{"round", std::to_string(round.day)},
                                                          {"bidding_offers", offers},
                                                          {"supply", std::to_string(round.supply)},
                                                          {"allocation_result", allocation}});
}

std::string render_participants_info(const RoundRecord& round, const GameConfig& config) {
    std::string out = fmt::format("RESIDENTS' STATUS AFTER DAY {}:", round.day);
    for (const auto& p : config.roster) {
        const auto& key = p.id.value;
        const int hp = round.hp_after.at(key);
        if (hp <= 0) {
            out += fmt::format("\n- {}: eliminated", p.name);
            continue;
        }
        out += fmt::format("\n- {}: Health Points {}/{}, Remaining Budget ${}, No-Water Days {}", p.name, hp,
                           config.hp_max, round.balance_after.at(key), round.nwd_after.at(key));
    }
    return out;
}

}  // namespace wtown::agents
