#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "wtown/agents/agent.hpp"

namespace wtown::agents {

struct ParseFailure {
    enum class Kind { no_amount, over_balance, fractional };

    Kind kind = Kind::no_amount;
    std::optional<Money> amount;
    std::string message;  // fed back to the model on retry
};

using ParseResult = std::variant<AgentDecision, ParseFailure>;

// Extracts a bid from free text.
//
// Candidates are dollar amounts ("$300", "$1,200") and numbers that follow
// a bid word (bid, offer, pay, "go with", ...) in the same sentence
// ("my bid is 300"). Numbers tied to units, days, health or percentages are
// ignored. If any candidate sits in a bid sentence, the last such candidate
// wins; otherwise the last dollar amount wins. A chosen amount of zero is an
// abstention.
//
// With no candidate at all, refusal language ("sit out", "not participate",
// "abstain", ...) yields an abstention and anything else a no_amount
// failure. Amounts above balance yield over_balance.
ParseResult parse_decision(std::string_view raw_response, Money balance);

// Message asking the model to try again after a failure.
std::string retry_prompt(const ParseFailure& failure, Money balance);

}  // namespace wtown::agents
