#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wtown/agents/agent.hpp"
#include "wtown/agents/prompts.hpp"
#include "wtown/agents/transcript.hpp"
#include "wtown/engine/game.hpp"

namespace wtown::harness {

struct MatchOptions {
    bool persona_enabled = false;
    // Ask all living agents of a day concurrently. Decisions are independent
    // within a day, so this never changes the outcome.
    bool concurrent_decisions = false;
    const agents::PromptSet* prompts = nullptr;  // defaults to the built-ins
};

// Drives one game: engine state, one agent per seat, and each seat's
// transcript of past rounds.
class Match {
public:
    // seats[i] plays config.roster[i]; the agents must outlive the match.
    Match(GameConfig config, std::vector<agents::Agent*> seats, MatchOptions options = {});

    const GameState& state() const { return state_; }
    bool finished() const { return state_.finished(); }

    DayOpening open_day();
    // One decision per living seat, in roster order.
    std::map<PlayerId, agents::AgentDecision> collect_decisions();
    // Settles the open day and appends the round to every bidder's transcript.
    const RoundRecord& settle(const std::map<PlayerId, agents::AgentDecision>& decisions);

    const std::string& last_announcement() const { return last_announcement_; }
    const agents::TranscriptBook& transcripts() const { return book_; }

    // Plays until the game ends.
    GameRecord play(const std::function<void(const RoundRecord&, const std::string&)>& on_round = {});

    GameRecord record() const { return state_.record(); }

private:
    const agents::PromptSet& prompts() const;

    GameState state_;
    std::vector<agents::Agent*> seats_;
    MatchOptions options_;
    agents::TranscriptBook book_;
    std::string last_announcement_;
};

}  // namespace wtown::harness
