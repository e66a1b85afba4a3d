#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "wtown/agents/agent.hpp"
#include "wtown/agents/llm_agent.hpp"
#include "wtown/agents/scripted.hpp"
#include "wtown/gateway/gateway.hpp"

namespace wtown::harness {

struct SeatControl {
    enum class Kind { scripted, llm, human };

    Kind kind = Kind::scripted;
    agents::ScriptedKind scripted;

    // "human", "llm" or a scripted strategy with or without the
    // "scripted:" prefix.
    static SeatControl parse(std::string_view text);
    std::string to_string() const;
};

// How every seat of a roster is played. Accepted forms:
//   "llm"                              every seat uses the model
//   "scripted:desperation"             every seat uses one strategy
//   "mixed:llm,desperation,constant:80,..."  one entry per seat, roster order
struct AgentPlan {
    std::vector<SeatControl> seats;
    std::string label;

    static AgentPlan parse(std::string_view text, std::size_t roster_size);
    bool uses_llm() const;
};

struct AgentFactoryContext {
    std::uint64_t game_seed = 0;
    gateway::Gateway* gateway = nullptr;  // required for llm seats
    agents::LlmAgentOptions llm;
};

// Builds one agent per seat. Random strategies are re-keyed with the game
// seed so repetitions differ while staying reproducible. Human seats are
// rejected here; only the live service can host them.
std::vector<std::unique_ptr<agents::Agent>> make_agents(const AgentPlan& plan, const AgentFactoryContext& ctx);

}  // namespace wtown::harness
