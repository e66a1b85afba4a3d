#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>

#include "wtown/analysis/rational.hpp"
#include "wtown/engine/types.hpp"

namespace wtown::analysis {

// Resource Satisfaction Rate: expected daily supply over the total daily
// requirement of the players still alive. Undefined when nobody is alive.
struct Rsr {
    std::optional<Rational> value;

    bool all_eliminated() const { return !value.has_value(); }
    // "0.68", or "all eliminated"
    std::string to_string(int decimals = 2) const;
};

// ((low + high) / 2) / sum of survivor requirements, exact.
Rsr compute_rsr(Units supply_low, Units supply_high, std::span<const PlayerSpec> survivors);

struct IndicatorSet {
    Rsr rsr_s;
    Rsr rsr_e;
    int n_survivor = 0;
    std::map<std::string, bool> survival;                 // player id -> alive at end
    std::map<int, std::optional<Money>> min_bid_series;   // day -> lowest winning bid
};

// Throws SchemaError for records with an unsupported schema_version.
IndicatorSet compute_indicators(const GameRecord& record);

}  // namespace wtown::analysis
