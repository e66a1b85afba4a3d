#include "wtown/harness/match.hpp"

#include <future>

#include <fmt/format.h>

namespace wtown::harness {

Match::Match(GameConfig config, std::vector<agents::Agent*> seats, MatchOptions options)
    : state_(std::move(config)), seats_(std::move(seats)), options_(options) {
    const auto& cfg = state_.config();
    if (seats_.size() != cfg.roster.size()) {
        throw ConfigError(fmt::format("{} agents for a roster of {}", seats_.size(), cfg.roster.size()));
    }
    for (const auto* a : seats_) {
        if (!a) throw ConfigError("null agent seat");
    }
    for (const auto& p : cfg.roster) {
        book_.start(p.id, agents::render_system_prompt(p, cfg, options_.persona_enabled, prompts()));
    }
}

const agents::PromptSet& Match::prompts() const {
    return options_.prompts ? *options_.prompts : agents::PromptSet::builtin();
}

DayOpening Match::open_day() {
    return state_.open_day();
}

std::map<PlayerId, agents::AgentDecision> Match::collect_decisions() {
    const auto opening = state_.open_day();
    const auto& cfg = state_.config();

    struct Pending {
        std::size_t seat;
        agents::AgentContext context;
    };
    std::vector<Pending> pending;
    for (std::size_t i = 0; i < cfg.roster.size(); ++i) {
        const auto& st = state_.players()[i];
        if (!st.alive) continue;
        auto call = agents::render_bid_call(cfg.roster[i], opening.day, opening.supply, st, cfg, prompts());
        pending.push_back({i, book_.context_for(cfg.roster[i].id, opening.day, std::move(call))});
    }

    auto ask = [&](const Pending& p) {
        agents::DecisionRequest req{cfg.roster[p.seat], state_.players()[p.seat], cfg, opening, p.context};
        return seats_[p.seat]->decide(req);
    };

    std::map<PlayerId, agents::AgentDecision> out;
    if (options_.concurrent_decisions && pending.size() > 1) {
        std::vector<std::future<agents::AgentDecision>> futures;
        futures.reserve(pending.size());
        for (const auto& p : pending) {
            futures.push_back(std::async(std::launch::async, ask, std::cref(p)));
        }
        for (std::size_t k = 0; k < pending.size(); ++k) {
            out.emplace(cfg.roster[pending[k].seat].id, futures[k].get());
        }
    } else {
        for (const auto& p : pending) {
            out.emplace(cfg.roster[p.seat].id, ask(p));
        }
    }
    return out;
}

const RoundRecord& Match::settle(const std::map<PlayerId, agents::AgentDecision>& decisions) {
    const auto& cfg = state_.config();
    std::vector<Bid> bids;
    bids.reserve(decisions.size());
    for (const auto& [id, d] : decisions) {
        bids.push_back(Bid{id, d.bid, d.reason});
    }
    const auto& round = state_.step_day(bids);

    last_announcement_ = agents::render_results_announcement(round, cfg, prompts());
    const std::string info = agents::render_participants_info(round, cfg);
    for (const auto& b : round.bids) {
        auto it = decisions.find(b.player);
        agents::TranscriptEntry e;
        e.day = round.day;
        e.own_response = it != decisions.end() ? it->second.raw_response : "";
        e.bid_summary = last_announcement_;
        e.participants_info = info;
        book_.record_round(b.player, std::move(e));
    }
    return round;
}

GameRecord Match::play(const std::function<void(const RoundRecord&, const std::string&)>& on_round) {
    while (!state_.finished()) {
        auto decisions = collect_decisions();
        const auto& round = settle(decisions);
        if (on_round) on_round(round, last_announcement_);
    }
    return state_.record();
}

}  // namespace wtown::harness
