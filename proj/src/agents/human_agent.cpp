#include "wtown/agents/human_agent.hpp"

#include <fmt/format.h>

namespace wtown::agents {

void HumanAgent::submit(std::optional<Money> amount, std::string reason) {
    std::lock_guard lock(mu_);
    AgentDecision d;
    d.bid = amount;
    d.reason = std::move(reason);
    d.raw_response = amount ? fmt::format("${}", *amount) : "abstain";
    pending_ = std::move(d);
}

bool HumanAgent::has_submission() const {
    std::lock_guard lock(mu_);
    return pending_.has_value();
}

std::optional<AgentDecision> HumanAgent::pending() const {
    std::lock_guard lock(mu_);
    return pending_;
}

AgentDecision HumanAgent::decide(const DecisionRequest&) {
    std::lock_guard lock(mu_);
    if (!pending_) {
        return {std::nullopt, "missed deadline", ""};
    }
    AgentDecision d = std::move(*pending_);
    pending_.reset();
    return d;
}

}  // namespace wtown::agents
