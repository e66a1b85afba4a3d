#include "wtown/agents/scripted.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "wtown/engine/rng.hpp"

namespace wtown::agents {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

AgentDecision clamp_bid(Money want, Money balance, std::string reason) {
    if (balance < 1 || want < 1) {
        return {std::nullopt, reason + "; abstaining", ""};
    }
    const Money bid = std::min(want, balance);
    return {bid, std::move(reason), ""};
}

}  // namespace

ScriptedKind ScriptedKind::parse(std::string_view text) {
    const auto colon = text.find(':');
    const std::string name(text.substr(0, colon));
    const std::string arg = colon == std::string_view::npos ? "" : std::string(text.substr(colon + 1));
    ScriptedKind k;
    try {
        if (name == "constant") {
            k.type = Type::constant;
            k.constant = arg.empty() ? 100 : std::stoll(arg);
            if (k.constant < 1) throw std::invalid_argument("constant bid must be >= 1");
        } else if (name == "fraction" || name == "fraction_of_balance") {
            k.type = Type::fraction_of_balance;
            k.fraction = arg.empty() ? 0.5 : std::stod(arg);
            if (!(k.fraction > 0.0 && k.fraction <= 1.0)) throw std::invalid_argument("fraction must be in (0, 1]");
        } else if (name == "desperation") {
            k.type = Type::desperation;
        } else if (name == "random") {
            k.type = Type::random;
            k.seed = arg.empty() ? 0 : std::stoull(arg);
        } else {
            throw std::invalid_argument("unknown strategy");
        }
    } catch (const std::exception& e) {
        throw ConfigError(fmt::format("bad scripted strategy '{}': {}", text, e.what()));
    }
    return k;
}

std::string ScriptedKind::to_string() const {
    switch (type) {
        case Type::constant:
            return fmt::format("constant:{}", constant);
        case Type::fraction_of_balance:
            return fmt::format("fraction:{}", fraction);
        case Type::desperation:
            return "desperation";
        case Type::random:
            return fmt::format("random:{}", seed);
    }
    return "?";
}

AgentDecision scripted_strategy(const ScriptedKind& kind, const ScriptedInput& in) {
    const Money balance = in.state.balance;
    switch (kind.type) {
        case ScriptedKind::Type::constant:
            return clamp_bid(kind.constant, balance, fmt::format("constant bid of ${}", kind.constant));
        case ScriptedKind::Type::fraction_of_balance: {
            const auto want = std::max<Money>(1, static_cast<Money>(std::floor(kind.fraction * balance)));
            return clamp_bid(want, balance, fmt::format("bidding {} of balance ${}", kind.fraction, balance));
        }
        case ScriptedKind::Type::desperation: {
            const double share = std::min(1.0, (in.state.no_water_days + 1) / 4.0);
            const auto want = std::max<Money>(1, static_cast<Money>(std::floor(share * balance)));
            return clamp_bid(want, balance,
                             fmt::format("{} no-water days, bidding {:.0f}% of balance ${}",
                                         in.state.no_water_days, share * 100, balance));
        }
        case ScriptedKind::Type::random: {
            SplitMix64 g(mix_seed(mix_seed(kind.seed, fnv1a(in.player.value)), static_cast<std::uint64_t>(in.day)));
            const Money want = balance > 0 ? g.uniform(0, balance) : 0;
            return clamp_bid(want, balance, fmt::format("random bid of ${}", want));
        }
    }
    throw std::logic_error("unhandled strategy");
}

AgentDecision ScriptedAgent::decide(const DecisionRequest& request) {
    ScriptedInput in;
    in.player = request.player.id;
    in.day = request.day.day;
    in.supply = request.day.supply;
    in.requirement = request.player.requirement;
    in.state = request.state;
    auto d = scripted_strategy(kind_, in);
    d.raw_response = d.bid ? fmt::format("I bid ${}. {}", *d.bid, d.reason) : "I will sit out today. " + d.reason;
    return d;
}

}  // namespace wtown::agents
