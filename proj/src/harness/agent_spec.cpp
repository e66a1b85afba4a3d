#include "wtown/harness/agent_spec.hpp"

#include <fmt/format.h>

#include "wtown/engine/rng.hpp"

namespace wtown::harness {

SeatControl SeatControl::parse(std::string_view text) {
    SeatControl c;
    if (text == "human") {
        c.kind = Kind::human;
    } else if (text == "llm") {
        c.kind = Kind::llm;
    } else {
        constexpr std::string_view prefix = "scripted:";
        if (text.substr(0, prefix.size()) == prefix) {
            text.remove_prefix(prefix.size());
        }
        c.kind = Kind::scripted;
        c.scripted = agents::ScriptedKind::parse(text);
    }
    return c;
}

std::string SeatControl::to_string() const {
    switch (kind) {
        case Kind::human:
            return "human";
        case Kind::llm:
            return "llm";
        case Kind::scripted:
            return "scripted:" + scripted.to_string();
    }
    return "?";
}

AgentPlan AgentPlan::parse(std::string_view text, std::size_t roster_size) {
    AgentPlan plan;
    plan.label = std::string(text);
    constexpr std::string_view mixed = "mixed:";
    if (text.substr(0, mixed.size()) == mixed) {
        text.remove_prefix(mixed.size());
        while (!text.empty()) {
            const auto comma = text.find(',');
            plan.seats.push_back(SeatControl::parse(text.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            text.remove_prefix(comma + 1);
        }
        if (plan.seats.size() != roster_size) {
            throw ConfigError(fmt::format("mixed agent plan lists {} seats for a roster of {}", plan.seats.size(),
                                          roster_size));
        }
    } else {
        plan.seats.assign(roster_size, SeatControl::parse(text));
    }
    return plan;
}

bool AgentPlan::uses_llm() const {
    for (const auto& s : seats) {
        if (s.kind == SeatControl::Kind::llm) return true;
    }
    return false;
}

std::vector<std::unique_ptr<agents::Agent>> make_agents(const AgentPlan& plan, const AgentFactoryContext& ctx) {
    std::vector<std::unique_ptr<agents::Agent>> out;
    for (const auto& seat : plan.seats) {
        switch (seat.kind) {
            case SeatControl::Kind::scripted: {
                auto kind = seat.scripted;
                if (kind.type == agents::ScriptedKind::Type::random) {
                    kind.seed = mix_seed(kind.seed, ctx.game_seed);
                }
                out.push_back(std::make_unique<agents::ScriptedAgent>(kind));
                break;
            }
            case SeatControl::Kind::llm:
                if (!ctx.gateway) {
                    throw ConfigError("llm seats need a configured gateway");
                }
                out.push_back(std::make_unique<agents::LlmAgent>(*ctx.gateway, ctx.llm));
                break;
            case SeatControl::Kind::human:
                throw ConfigError("human seats are only available in the live service");
        }
    }
    return out;
}

}  // namespace wtown::harness
