#pragma once

#include <mutex>
#include <optional>

#include "wtown/agents/agent.hpp"

namespace wtown::agents {

// Seat controlled by a person through the live service. Submissions are
// held until the bidding deadline, when decide() collects the latest one
// (or an abstention) and clears the slot for the next day.
class HumanAgent final : public Agent {
public:
    // Last write wins. Validation against balance is the caller's job.
    void submit(std::optional<Money> amount, std::string reason = {});
    bool has_submission() const;
    // The pending bid, visible only to its owner.
    std::optional<AgentDecision> pending() const;

    AgentDecision decide(const DecisionRequest& request) override;
    std::string kind() const override { return "human"; }

private:
    mutable std::mutex mu_;
    std::optional<AgentDecision> pending_;
};

}  // namespace wtown::agents
