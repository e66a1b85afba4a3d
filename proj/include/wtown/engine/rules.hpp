#pragma once

#include <span>
#include <vector>

#include "wtown/engine/rng.hpp"
#include "wtown/engine/types.hpp"

namespace wtown {

// Uniform draw in [supply_low, supply_high]; advances the generator.
Units sample_supply(SplitMix64& rng, const GameConfig& config);

// Sealed-bid allocation. Bidders are ordered by amount (descending), then
// requirement (ascending), then player id (ascending). The walk grants each
// bidder whose whole requirement fits the remaining supply. Abstentions are
// ignored. Throws ProtocolError on duplicate bidders or non-positive amounts.
std::vector<Winner> allocate(std::span<const Bid> bids, const GameConfig& config, Units supply);

// Lower-level form used by tests: requirements passed explicitly.
std::vector<Winner> allocate(std::span<const Bid> bids,
                             const std::map<PlayerId, Units>& requirements,
                             Units supply,
                             AllocationPolicy policy = AllocationPolicy::skip_and_continue);

// Adds each living player's salary to their balance. states is indexed in
// roster order.
void credit_salaries(std::vector<PlayerState>& states, std::span<const PlayerSpec> roster);

struct Settlement {
    std::vector<int> hp_delta;       // roster order
    std::vector<PlayerId> eliminated;
};

// Applies one day's outcome: winners pay, gain water_gain HP (capped) and
// reset their no-water streak; every other living player extends the streak
// and loses HP equal to its new length. Deaths are resolved after all HP
// updates, and a dead player's balance is zeroed.
Settlement settle_round(std::vector<PlayerState>& states,
                        std::span<const Winner> winners,
                        const GameConfig& config);

}  // namespace wtown
