#pragma once

#include <string>

#include "wtown/agents/agent.hpp"
#include "wtown/gateway/gateway.hpp"

namespace wtown::agents {

struct LlmAgentOptions {
    std::string model = "gpt-4-32k";
    double temperature = 0.7;
    int max_tokens = 512;
    int max_retries = 2;
    std::string experiment;  // request tag coordinates
    std::string game;
};

// Bids by asking a chat model with the full round history as context. An
// unusable answer is re-asked up to max_retries times with a correction
// appended; after that, or when the gateway gives up, the agent abstains.
// A replay-cache miss is not absorbed: it propagates to the caller.
class LlmAgent final : public Agent {
public:
    LlmAgent(gateway::Gateway& gateway, LlmAgentOptions options);

    AgentDecision decide(const DecisionRequest& request) override;
    std::string kind() const override { return "llm"; }

private:
    gateway::Gateway& gateway_;
    LlmAgentOptions options_;
};

}  // namespace wtown::agents
