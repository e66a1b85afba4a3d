#include "wtown/engine/game.hpp"

#include <set>

#include <fmt/format.h>

#include "wtown/engine/rules.hpp"

namespace wtown {

GameState::GameState(GameConfig config) : config_(std::move(config)), rng_(config_.seed) {
    config_.validate();
    players_.reserve(config_.roster.size());
    for (std::size_t i = 0; i < config_.roster.size(); ++i) {
        PlayerState s;
        s.hp = config_.hp_start;
        s.balance = 0;
        s.no_water_days = 0;
        s.alive = true;
        players_.push_back(s);
    }
}

const PlayerState& GameState::player(const PlayerId& id) const {
    auto idx = config_.index_of(id);
    if (!idx) {
        throw ProtocolError(fmt::format("unknown player '{}'", id.value));
    }
    return players_[*idx];
}

bool GameState::finished() const {
    return days_played() >= config_.days || alive_count() == 0;
}

int GameState::alive_count() const {
    int n = 0;
    for (const auto& p : players_) {
        n += p.alive ? 1 : 0;
    }
    return n;
}

std::vector<PlayerId> GameState::living_players() const {
    std::vector<PlayerId> out;
    for (std::size_t i = 0; i < players_.size(); ++i) {
        if (players_[i].alive) {
            out.push_back(config_.roster[i].id);
        }
    }
    return out;
}

DayOpening GameState::open_day() {
    if (finished()) {
        throw ProtocolError("game is finished");
    }
    if (pending_) {
        return *pending_;
    }
    credit_salaries(players_, config_.roster);
    DayOpening d;
    d.day = days_played() + 1;
    d.supply = sample_supply(rng_, config_);
    pending_ = d;
    return d;
}

const RoundRecord& GameState::step_day(std::span<const Bid> bids) {
    if (!pending_) {
        open_day();
    }

    std::map<PlayerId, const Bid*> by_player;
    for (const auto& b : bids) {
        auto idx = config_.index_of(b.player);
        if (!idx) {
            throw ProtocolError(fmt::format("bid from unknown player '{}'", b.player.value));
        }
        const auto& st = players_[*idx];
        if (!st.alive) {
            throw ProtocolError(fmt::format("bid from eliminated player '{}'", b.player.value));
        }
        if (!by_player.emplace(b.player, &b).second) {
            throw ProtocolError(fmt::format("duplicate bid from '{}'", b.player.value));
        }
        if (b.amount) {
            if (*b.amount < 1) {
                throw ProtocolError(
                    fmt::format("bid from '{}' must be positive, got {}", b.player.value, *b.amount));
            }
            if (*b.amount > st.balance) {
                throw ProtocolError(fmt::format("bid from '{}' of {} exceeds balance {}",
                                                b.player.value, *b.amount, st.balance));
            }
        }
    }

    RoundRecord r;
    r.day = pending_->day;
    r.supply = pending_->supply;
    for (std::size_t i = 0; i < players_.size(); ++i) {
        if (!players_[i].alive) {
            continue;
        }
        const auto& id = config_.roster[i].id;
        auto it = by_player.find(id);
        if (it != by_player.end()) {
            r.bids.push_back(*it->second);
        } else {
            r.bids.push_back(Bid{id, std::nullopt, ""});
        }
    }

    r.winners = allocate(r.bids, config_, r.supply);
    auto settlement = settle_round(players_, r.winners, config_);
    r.eliminated = std::move(settlement.eliminated);

    for (const auto& w : r.winners) {
        if (!r.min_successful_bid || w.payment < *r.min_successful_bid) {
            r.min_successful_bid = w.payment;
        }
    }
    for (std::size_t i = 0; i < players_.size(); ++i) {
        const auto& key = config_.roster[i].id.value;
        r.hp_after[key] = players_[i].hp;
        r.nwd_after[key] = players_[i].no_water_days;
        r.balance_after[key] = players_[i].balance;
    }

    pending_.reset();
    rounds_.push_back(std::move(r));
    return rounds_.back();
}

GameRecord GameState::record() const {
    GameRecord g;
    g.config = config_;
    g.rounds = rounds_;
    for (std::size_t i = 0; i < players_.size(); ++i) {
        g.final_states[config_.roster[i].id.value] = players_[i];
    }
    return g;
}

GameRecord replay(const GameRecord& record) {
    GameState state(record.config);
    for (const auto& round : record.rounds) {
        if (state.finished()) {
            throw ProtocolError(fmt::format("record continues past the end of the game at day {}", round.day));
        }
        auto opening = state.open_day();
        if (opening.day != round.day || opening.supply != round.supply) {
            throw ProtocolError(fmt::format("day {}: recorded supply {} does not match re-sampled {}",
                                            round.day, round.supply, opening.supply));
        }
        state.step_day(round.bids);
    }
    GameRecord out = state.record();
    out.schema_version = record.schema_version;
    out.experiment = record.experiment;
    return out;
}

}  // namespace wtown
