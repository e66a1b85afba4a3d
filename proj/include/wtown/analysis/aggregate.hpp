#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wtown/analysis/indicators.hpp"

namespace wtown::analysis {

inline constexpr const char* kQuantileMethod =
    "linear interpolation between closest ranks: q(p) = x[floor(h)] + (h - floor(h)) * "
    "(x[floor(h)+1] - x[floor(h)]), h = (n - 1) * p, x sorted ascending";

// Quantile of an ascending-sorted sample using kQuantileMethod.
double quantile_sorted(std::span<const double> sorted, double p);

struct BoxStats {
    std::size_t count = 0;
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0;
};

// Requires a non-empty sample.
BoxStats box_stats(std::vector<double> values);

struct RunSummary {
    int repetition = 0;
    std::uint64_t seed = 0;
    Rsr rsr_s;
    Rsr rsr_e;
    int n_survivor = 0;
    std::map<std::string, bool> survival;
};

struct PlayerSurvival {
    std::string id;
    std::string name;
    int survived = 0;
    int runs = 0;
    Rational rate;  // survived / runs
};

struct SettingSummary {
    int setting_id = 0;
    bool persona = false;
    Units supply_low = 0;
    Units supply_high = 0;
    int schema_version = 0;
    std::vector<RunSummary> runs;          // repetition order
    std::vector<PlayerSurvival> players;   // roster order
    std::optional<Rational> mean_rsr_s;
    std::optional<Rational> mean_rsr_e;    // over runs with survivors
    int all_eliminated_runs = 0;

    // Per-day lowest winning bid across runs. Days a run did not reach, or
    // on which nobody won, contribute nothing.
    std::map<int, BoxStats> daily_min_bid;
    std::map<int, double> daily_median;
    std::optional<double> mean_of_daily_medians;

    std::vector<int> n_survivor_values;
    BoxStats n_survivor_stats;
    std::vector<double> rsr_e_values;      // runs with survivors only
    std::optional<BoxStats> rsr_e_stats;
};

class AggregateError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Groups records by experiment setting id (0 when unlabelled) and
// summarises each group. Throws AggregateError when a group mixes schema
// versions, rosters or supply bounds.
std::vector<SettingSummary> aggregate(std::span<const GameRecord> records);

}  // namespace wtown::analysis
