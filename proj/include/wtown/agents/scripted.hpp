#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "wtown/agents/agent.hpp"

namespace wtown::agents {

// Deterministic baseline bidders. Parsed from strings such as
// "constant:100", "fraction:0.5", "desperation" and "random:42".
struct ScriptedKind {
    enum class Type { constant, fraction_of_balance, desperation, random };

    Type type = Type::desperation;
    Money constant = 0;
    double fraction = 0.0;
    std::uint64_t seed = 0;

    static ScriptedKind parse(std::string_view text);
    std::string to_string() const;
};

// The inputs a scripted strategy may look at.
struct ScriptedInput {
    PlayerId player;
    int day = 0;
    Units supply = 0;
    Units requirement = 0;
    PlayerState state;
};

// Pure: same kind and input, same decision. Bids above balance are clamped,
// and a zero balance means abstaining.
//
//   constant(k)     min(k, balance)
//   fraction(f)     floor(f * balance), at least 1
//   desperation     floor(balance * min(1, (nwd + 1) / 4)), at least 1
//   random(seed)    uniform in [0, balance] keyed by (seed, player, day);
//                   0 abstains
AgentDecision scripted_strategy(const ScriptedKind& kind, const ScriptedInput& input);

class ScriptedAgent final : public Agent {
public:
    explicit ScriptedAgent(ScriptedKind kind) : kind_(kind) {}

    AgentDecision decide(const DecisionRequest& request) override;
    std::string kind() const override { return "scripted:" + kind_.to_string(); }

private:
    ScriptedKind kind_;
};

}  // namespace wtown::agents
