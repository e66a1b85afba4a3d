#include "wtown/analysis/indicators.hpp"

#include <fmt/format.h>

#include "wtown/engine/serialize.hpp"

namespace wtown::analysis {

std::string Rsr::to_string(int decimals) const {
    return value ? value->to_fixed(decimals) : "all eliminated";
}

Rsr compute_rsr(Units supply_low, Units supply_high, std::span<const PlayerSpec> survivors) {
    std::int64_t demand = 0;
    for (const auto& p : survivors) {
        demand += p.requirement;
    }
    if (demand == 0) {
        return {};
    }
    return {Rational(static_cast<std::int64_t>(supply_low) + supply_high, 2 * demand)};
}

IndicatorSet compute_indicators(const GameRecord& record) {
    if (record.schema_version != kSchemaVersion) {
        throw SchemaError(fmt::format("unsupported schema_version {}", record.schema_version));
    }
    const auto& cfg = record.config;
    IndicatorSet out;
    out.rsr_s = compute_rsr(cfg.supply_low, cfg.supply_high, cfg.roster);

    std::vector<PlayerSpec> survivors;
    for (const auto& p : cfg.roster) {
        auto it = record.final_states.find(p.id.value);
        if (it == record.final_states.end()) {
            throw SchemaError(fmt::format("final_states lacks player '{}'", p.id.value));
        }
        const bool alive = it->second.alive;
        out.survival[p.id.value] = alive;
        if (alive) {
            survivors.push_back(p);
        }
    }
    out.n_survivor = static_cast<int>(survivors.size());
    out.rsr_e = compute_rsr(cfg.supply_low, cfg.supply_high, survivors);

    for (const auto& r : record.rounds) {
        out.min_bid_series[r.day] = r.min_successful_bid;
    }
    return out;
}

}  // namespace wtown::analysis
