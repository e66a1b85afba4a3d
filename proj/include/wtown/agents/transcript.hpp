#pragma once

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "wtown/engine/types.hpp"
#include "wtown/gateway/chat.hpp"

namespace wtown::agents {

// One completed round from a single player's point of view.
struct TranscriptEntry {
    int day = 0;
    std::string own_response;       // what this player said when bidding
    std::string bid_summary;        // the public results announcement
    std::string participants_info;  // post-round status of every resident
};

struct Transcript {
    std::string system_message;
    std::vector<TranscriptEntry> entries;
};

// Raised when a transcript has holes or holds rounds at or after the one
// being asked about.
class TranscriptCorruption : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AgentContext {
    std::string system_message;
    std::vector<TranscriptEntry> history;  // rounds 1..n-1 in order
    std::string current_call;
    int round = 0;

    // [system S, (assistant r_k, user b_k, user i_k) for k < n, user call_n],
    // i.e. 2 + 3(n-1) messages.
    std::vector<gateway::ChatMessage> messages() const;
};

AgentContext assemble_context(const Transcript& transcript, int round, std::string current_call);

// Transcripts for every player of one game. Entries are added only after a
// round settles, so a context built during round n cannot see round-n bids.
class TranscriptBook {
public:
    void start(const PlayerId& player, std::string system_message);
    void record_round(const PlayerId& player, TranscriptEntry entry);
    AgentContext context_for(const PlayerId& player, int round, std::string current_call) const;
    const Transcript& transcript(const PlayerId& player) const;

private:
    mutable std::mutex mu_;
    std::map<PlayerId, Transcript> transcripts_;
};

}  // namespace wtown::agents
