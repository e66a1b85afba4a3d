#include "wtown/agents/transcript.hpp"

#include <fmt/format.h>

namespace wtown::agents {

using gateway::ChatMessage;
using gateway::Role;

std::vector<ChatMessage> AgentContext::messages() const {
    std::vector<ChatMessage> out;
    out.reserve(2 + 3 * history.size());
    out.push_back({Role::system, system_message});
    for (const auto& e : history) {
        out.push_back({Role::assistant, e.own_response});
        out.push_back({Role::user, e.bid_summary});
        out.push_back({Role::user, e.participants_info});
    }
    out.push_back({Role::user, current_call});
    return out;
}

AgentContext assemble_context(const Transcript& transcript, int round, std::string current_call) {
    if (round < 1) {
        throw TranscriptCorruption(fmt::format("round must be >= 1, got {}", round));
    }
    if (static_cast<int>(transcript.entries.size()) != round - 1) {
        throw TranscriptCorruption(fmt::format("transcript has {} rounds, round {} needs exactly {}",
                                               transcript.entries.size(), round, round - 1));
    }
    AgentContext ctx;
    ctx.system_message = transcript.system_message;
    ctx.current_call = std::move(current_call);
    ctx.round = round;
    for (int k = 1; k < round; ++k) {
        const auto& e = transcript.entries[k - 1];
        if (e.day != k) {
            throw TranscriptCorruption(fmt::format("transcript slot {} holds day {}", k, e.day));
        }
        ctx.history.push_back(e);
    }
    return ctx;
}

void TranscriptBook::start(const PlayerId& player, std::string system_message) {
    std::lock_guard lock(mu_);
    auto& t = transcripts_[player];
    t.system_message = std::move(system_message);
    t.entries.clear();
}

void TranscriptBook::record_round(const PlayerId& player, TranscriptEntry entry) {
    std::lock_guard lock(mu_);
    auto it = transcripts_.find(player);
    if (it == transcripts_.end()) {
        throw TranscriptCorruption(fmt::format("no transcript for '{}'", player.value));
    }
    auto& entries = it->second.entries;
    const int expected = static_cast<int>(entries.size()) + 1;
    if (entry.day != expected) {
        throw TranscriptCorruption(
            fmt::format("'{}': appending day {} but next day is {}", player.value, entry.day, expected));
    }
    entries.push_back(std::move(entry));
}

AgentContext TranscriptBook::context_for(const PlayerId& player, int round, std::string current_call) const {
    std::lock_guard lock(mu_);
    auto it = transcripts_.find(player);
    if (it == transcripts_.end()) {
        throw TranscriptCorruption(fmt::format("no transcript for '{}'", player.value));
    }
    return assemble_context(it->second, round, std::move(current_call));
}

const Transcript& TranscriptBook::transcript(const PlayerId& player) const {
    std::lock_guard lock(mu_);
    auto it = transcripts_.find(player);
    if (it == transcripts_.end()) {
        throw TranscriptCorruption(fmt::format("no transcript for '{}'", player.value));
    }
    return it->second;
}

}  // namespace wtown::agents
