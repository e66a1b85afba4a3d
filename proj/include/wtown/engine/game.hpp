#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wtown/engine/rng.hpp"
#include "wtown/engine/types.hpp"

namespace wtown {

// What players learn when a day opens: the day index and today's supply.
struct DayOpening {
    int day = 0;
    Units supply = 0;
};

// Value-type game state. A day is played in two steps:
//
//   auto opening = state.open_day();     // salaries credited, supply drawn
//   ... collect bids from living players ...
//   RoundRecord r = state.step_day(bids);
//
// Everything is a function of (config, seed, bids); no clocks, no globals.
class GameState {
public:
    explicit GameState(GameConfig config);

    const GameConfig& config() const { return config_; }
    std::span<const PlayerState> players() const { return players_; }
    const PlayerState& player(const PlayerId& id) const;
    const std::vector<RoundRecord>& rounds() const { return rounds_; }

    int days_played() const { return static_cast<int>(rounds_.size()); }
    bool day_open() const { return pending_.has_value(); }
    std::optional<DayOpening> current_day() const { return pending_; }
    bool finished() const;
    int alive_count() const;
    std::vector<PlayerId> living_players() const;

    DayOpening open_day();

    // Settles the open day. Players without an entry in bids abstain.
    // Throws ProtocolError for bids by unknown or eliminated players,
    // duplicate bids, or amounts outside [1, balance].
    const RoundRecord& step_day(std::span<const Bid> bids);

    GameRecord record() const;

private:
    GameConfig config_;
    SplitMix64 rng_;
    std::vector<PlayerState> players_;
    std::vector<RoundRecord> rounds_;
    std::optional<DayOpening> pending_;
};

// Re-simulates a record from its config and recorded bids.
GameRecord replay(const GameRecord& record);

}  // namespace wtown
