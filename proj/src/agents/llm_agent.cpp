#include "wtown/agents/llm_agent.hpp"

#include "wtown/agents/parse.hpp"

namespace wtown::agents {

LlmAgent::LlmAgent(gateway::Gateway& gateway, LlmAgentOptions options)
    : gateway_(gateway), options_(std::move(options)) {}

AgentDecision LlmAgent::decide(const DecisionRequest& request) {
    gateway::ChatRequest chat;
    chat.model = options_.model;
    chat.temperature = options_.temperature;
    chat.max_tokens = options_.max_tokens;
    chat.messages = request.context.messages();
    chat.tag.experiment = options_.experiment;
    chat.tag.game = options_.game;
    chat.tag.round = request.day.day;
    chat.tag.player = request.player.id.value;

    const Money balance = request.state.balance;
    std::string last_raw;
    for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
        chat.tag.attempt = attempt;
        try {
            last_raw = gateway_.complete(chat);
        } catch (const gateway::GatewayFailure& e) {
            return {std::nullopt, "gateway failure", e.what()};
        }
        auto parsed = parse_decision(last_raw, balance);
        if (auto* d = std::get_if<AgentDecision>(&parsed)) {
            return *d;
        }
        const auto& failure = std::get<ParseFailure>(parsed);
        chat.messages.push_back({gateway::Role::assistant, last_raw});
        chat.messages.push_back({gateway::Role::user, retry_prompt(failure, balance)});
    }
    return {std::nullopt, "unparseable", last_raw};
}

}  // namespace wtown::agents
