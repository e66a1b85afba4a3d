#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "wtown/agents/human_agent.hpp"
#include "wtown/harness/agent_spec.hpp"
#include "wtown/harness/match.hpp"

namespace wtown::live {

using Clock = std::chrono::steady_clock;

enum class Phase { lobby, bidding, announcing, finished };
std::string to_string(Phase p);

struct SessionOptions {
    std::chrono::milliseconds bidding_window{120'000};
    std::chrono::milliseconds announce_window{5'000};
    bool persona_enabled = false;
};

struct Event {
    std::uint64_t seq = 0;
    std::string type;  // joined, phase, announcement, finished, error
    nlohmann::json data;
};

// Rejected client request; status is the HTTP status to report.
class SessionError : public std::runtime_error {
public:
    SessionError(int status, const std::string& message) : std::runtime_error(message), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

// One hosted game. All mutation goes through a single mutex, so the game
// advances as a serialized sequence of events: joins, bids and clock ticks.
//
// Phases run lobby -> bidding(1) -> announcing(1) -> bidding(2) -> ... ->
// finished. The lobby ends once every human seat has joined; with no human
// seats left alive the game runs on without waiting on deadlines.
class Session {
public:
    Session(std::string id,
            GameConfig config,
            std::vector<harness::SeatControl> seats,
            SessionOptions options,
            harness::AgentFactoryContext agent_context,
            Clock::time_point now);

    const std::string& id() const { return id_; }

    // Seat tokens for human seats, keyed by player id. Hand these out once.
    const std::map<PlayerId, std::string>& tokens() const { return tokens_; }

    // Returns the seat's player spec as JSON.
    nlohmann::json join(const std::string& token, Clock::time_point now);

    // amount empty: abstain. Last submission before the deadline counts.
    nlohmann::json submit_bid(const std::string& token, std::optional<Money> amount, Clock::time_point now);

    // Public state. With a valid token, adds that seat's private view
    // (including its own pending bid).
    nlohmann::json view(const std::optional<std::string>& token, Clock::time_point now) const;

    std::vector<Event> events_since(std::uint64_t seq) const;
    // Blocks until an event newer than seq exists, the session finishes, or
    // timeout passes.
    std::vector<Event> wait_events(std::uint64_t seq, std::chrono::milliseconds timeout) const;

    // Applies every transition that is due at `now`.
    void tick(Clock::time_point now);

    Phase phase() const;
    bool finished() const;
    // Set when an agent failure aborted the game.
    std::string error() const;
    GameRecord record() const;

    // Called once with the final record when the game ends.
    void on_finished(std::function<void(const GameRecord&)> fn);

private:
    void start_day(Clock::time_point now);
    void close_bidding(Clock::time_point now);
    void emit(std::string type, nlohmann::json data);
    std::optional<std::size_t> seat_for(const std::string& token) const;
    std::size_t humans_alive() const;
    nlohmann::json players_json() const;
    GameRecord record_locked() const;

    std::string id_;
    SessionOptions options_;
    std::vector<harness::SeatControl> controls_;
    std::vector<std::unique_ptr<agents::Agent>> agents_;
    std::map<std::size_t, agents::HumanAgent*> humans_;  // seat -> agent
    std::map<PlayerId, std::string> tokens_;
    std::map<std::string, std::size_t> seat_by_token_;
    std::vector<bool> joined_;
    std::unique_ptr<harness::Match> match_;

    mutable std::mutex mu_;
    mutable std::condition_variable cv_;
    Phase phase_ = Phase::lobby;
    Clock::time_point deadline_{};
    std::vector<Event> events_;
    std::vector<std::pair<int, std::string>> announcements_;
    std::function<void(const GameRecord&)> on_finished_;
    std::string error_;
};

struct CreateRequest {
    GameConfig config;
    std::vector<harness::SeatControl> seats;  // roster order
    SessionOptions options;
};

// Parses a create-session body:
//   {"abundance": "low" | "supply_low": 10, "supply_high": 20,
//    "days": 20, "seed": "7", "bidding_window_s": 120, "announce_window_s": 5,
//    "persona": false, "roster": [...optional...],
//    "seats": [{"player": "Alex", "control": "human"}, ...]}
// Every roster player needs exactly one seat entry.
CreateRequest parse_create_request(const nlohmann::json& body);

// Owns all sessions and persists finished ones as JSON Lines.
class SessionManager {
public:
    struct Options {
        std::optional<std::filesystem::path> records_path;
        harness::AgentFactoryContext agent_context;
        std::optional<std::filesystem::path> persona_dir;
    };

    explicit SessionManager(Options options);
    ~SessionManager();

    std::shared_ptr<Session> create(const CreateRequest& request, Clock::time_point now);
    std::shared_ptr<Session> get(const std::string& id) const;
    void tick_all(Clock::time_point now);

    // Background thread calling tick_all with the real clock.
    void start_ticker(std::chrono::milliseconds period = std::chrono::milliseconds(50));
    void stop_ticker();

private:
    void persist(const GameRecord& record);

    Options options_;
    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mutex file_mu_;
    std::jthread ticker_;
};

std::string random_token();

}  // namespace wtown::live
