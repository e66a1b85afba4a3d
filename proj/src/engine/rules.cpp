#include "wtown/engine/rules.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

namespace wtown {

Units sample_supply(SplitMix64& rng, const GameConfig& config) {
    return static_cast<Units>(rng.uniform(config.supply_low, config.supply_high));
}

std::vector<Winner> allocate(std::span<const Bid> bids, const GameConfig& config, Units supply) {
    std::map<PlayerId, Units> requirements;
    for (const auto& p : config.roster) {
        requirements.emplace(p.id, p.requirement);
    }
    return allocate(bids, requirements, supply, config.policy);
}

std::vector<Winner> allocate(std::span<const Bid> bids,
                             const std::map<PlayerId, Units>& requirements,
                             Units supply,
                             AllocationPolicy policy) {
    struct Entry {
        PlayerId player;
        Money amount;
        Units requirement;
    };

    std::set<PlayerId> seen;
    std::vector<Entry> entries;
    entries.reserve(bids.size());
    for (const auto& bid : bids) {
        if (!seen.insert(bid.player).second) {
            throw ProtocolError(fmt::format("duplicate bid from '{}'", bid.player.value));
        }
        if (bid.abstains()) {
            continue;
        }
        if (*bid.amount < 1) {
            throw ProtocolError(
                fmt::format("bid from '{}' must be positive, got {}", bid.player.value, *bid.amount));
        }
        auto it = requirements.find(bid.player);
        if (it == requirements.end()) {
            throw ProtocolError(fmt::format("bid from unknown player '{}'", bid.player.value));
        }
        entries.push_back({bid.player, *bid.amount, it->second});
    }

    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.amount != b.amount) return a.amount > b.amount;
        if (a.requirement != b.requirement) return a.requirement < b.requirement;
        return a.player < b.player;
    });

    std::vector<Winner> winners;
    Units remaining = supply;
    for (const auto& e : entries) {
        if (e.requirement <= remaining) {
            winners.push_back({e.player, e.amount, e.requirement});
            remaining -= e.requirement;
        } else if (policy == AllocationPolicy::stop_at_first_misfit) {
            break;
        }
    }
    return winners;
}

void credit_salaries(std::vector<PlayerState>& states, std::span<const PlayerSpec> roster) {
    if (states.size() != roster.size()) {
        throw InvariantError("credit_salaries: state and roster sizes differ");
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].alive) {
            states[i].balance += roster[i].salary;
        }
    }
}

Settlement settle_round(std::vector<PlayerState>& states,
                        std::span<const Winner> winners,
                        const GameConfig& config) {
    if (states.size() != config.roster.size()) {
        throw InvariantError("settle_round: state and roster sizes differ");
    }

    std::vector<bool> won(states.size(), false);
    for (const auto& w : winners) {
        auto idx = config.index_of(w.player);
        if (!idx) {
            throw InvariantError(fmt::format("winner '{}' is not on the roster", w.player.value));
        }
        auto& s = states[*idx];
        if (!s.alive) {
            throw InvariantError(fmt::format("winner '{}' is not alive", w.player.value));
        }
        if (w.payment > s.balance) {
            throw InvariantError(fmt::format("winner '{}' pays {} with balance {}", w.player.value,
                                             w.payment, s.balance));
        }
        won[*idx] = true;
    }

    Settlement out;
    out.hp_delta.assign(states.size(), 0);
    for (std::size_t i = 0; i < states.size(); ++i) {
        auto& s = states[i];
        if (!s.alive) {
            continue;
        }
        const int before = s.hp;
        if (won[i]) {
            s.hp = std::min(s.hp + config.water_gain, config.hp_max);
            s.no_water_days = 0;
        } else {
            s.no_water_days += 1;
            s.hp -= s.no_water_days;
        }
        out.hp_delta[i] = s.hp - before;
    }
    for (const auto& w : winners) {
        states[*config.index_of(w.player)].balance -= w.payment;
    }

    // deaths are resolved only after every HP update of the day
    for (std::size_t i = 0; i < states.size(); ++i) {
        auto& s = states[i];
        if (s.alive && s.hp <= 0) {
            s.alive = false;
            s.balance = 0;
            out.eliminated.push_back(config.roster[i].id);
        }
    }
    return out;
}

}  // namespace wtown
