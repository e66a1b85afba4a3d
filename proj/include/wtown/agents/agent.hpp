#pragma once

#include <optional>
#include <string>

#include "wtown/agents/transcript.hpp"
#include "wtown/engine/game.hpp"
#include "wtown/engine/types.hpp"

namespace wtown::agents {

struct AgentDecision {
    std::optional<Money> bid;  // empty: abstain
    std::string reason;
    std::string raw_response;

    bool operator==(const AgentDecision&) const = default;
};

// Everything a player may know when bidding on one day.
struct DecisionRequest {
    const PlayerSpec& player;
    const PlayerState& state;  // after today's salary
    const GameConfig& config;
    DayOpening day;
    const AgentContext& context;
};

class Agent {
public:
    virtual ~Agent() = default;

    // Must return a bid in [1, state.balance] or an abstention.
    virtual AgentDecision decide(const DecisionRequest& request) = 0;

    // Short label such as "scripted:desperation" or "llm".
    virtual std::string kind() const = 0;
};

}  // namespace wtown::agents
