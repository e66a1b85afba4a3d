#include "wtown/analysis/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace wtown::analysis {

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw std::invalid_argument("quantile of an empty sample");
    }
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("box_stats of an empty sample");
    }
    std::sort(values.begin(), values.end());
    BoxStats b;
    b.count = values.size();
    b.min = values.front();
    b.max = values.back();
    b.q1 = quantile_sorted(values, 0.25);
    b.median = quantile_sorted(values, 0.5);
    b.q3 = quantile_sorted(values, 0.75);
    b.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    return b;
}

namespace {

SettingSummary summarise(int setting_id, std::vector<const GameRecord*> group) {
    std::sort(group.begin(), group.end(), [](const GameRecord* a, const GameRecord* b) {
        const int ra = a->experiment ? a->experiment->repetition : 0;
        const int rb = b->experiment ? b->experiment->repetition : 0;
        if (ra != rb) return ra < rb;
        return a->config.seed < b->config.seed;
    });

    const GameRecord& first = *group.front();
    SettingSummary s;
    s.setting_id = setting_id;
    s.persona = first.experiment && first.experiment->persona;
    s.supply_low = first.config.supply_low;
    s.supply_high = first.config.supply_high;
    s.schema_version = first.schema_version;

    for (const auto* g : group) {
        if (g->schema_version != s.schema_version) {
            throw AggregateError(fmt::format("setting {} mixes schema versions {} and {}", setting_id,
                                             s.schema_version, g->schema_version));
        }
        if (g->config.supply_low != s.supply_low || g->config.supply_high != s.supply_high) {
            throw AggregateError(fmt::format("setting {} mixes supply bounds", setting_id));
        }
        if (g->config.roster.size() != first.config.roster.size() ||
            !std::equal(g->config.roster.begin(), g->config.roster.end(), first.config.roster.begin(),
                        [](const PlayerSpec& a, const PlayerSpec& b) {
                            return a.id == b.id && a.requirement == b.requirement;
                        })) {
            throw AggregateError(fmt::format("setting {} mixes rosters", setting_id));
        }
    }

    for (const auto& p : first.config.roster) {
        s.players.push_back(PlayerSurvival{p.id.value, p.name, 0, 0, Rational(0)});
    }

    std::map<int, std::vector<double>> by_day;
    Rational sum_s(0), sum_e(0);
    int defined_e = 0;
    for (const auto* g : group) {
        const auto ind = compute_indicators(*g);
        RunSummary run;
        run.repetition = g->experiment ? g->experiment->repetition : 0;
        run.seed = g->config.seed;
        run.rsr_s = ind.rsr_s;
        run.rsr_e = ind.rsr_e;
        run.n_survivor = ind.n_survivor;
        run.survival = ind.survival;
        s.runs.push_back(run);

        for (auto& p : s.players) {
            p.runs += 1;
            p.survived += ind.survival.at(p.id) ? 1 : 0;
        }
        sum_s = sum_s + *ind.rsr_s.value;
        if (ind.rsr_e.value) {
            sum_e = sum_e + *ind.rsr_e.value;
            ++defined_e;
            s.rsr_e_values.push_back(ind.rsr_e.value->to_double());
        } else {
            ++s.all_eliminated_runs;
        }
        s.n_survivor_values.push_back(ind.n_survivor);
        for (const auto& [day, bid] : ind.min_bid_series) {
            if (bid) by_day[day].push_back(static_cast<double>(*bid));
        }
    }

    const auto n = static_cast<std::int64_t>(group.size());
    for (auto& p : s.players) {
        p.rate = Rational(p.survived, p.runs);
    }
    s.mean_rsr_s = sum_s / Rational(n);
    if (defined_e > 0) {
        s.mean_rsr_e = sum_e / Rational(defined_e);
        s.rsr_e_stats = box_stats(s.rsr_e_values);
    }
    std::vector<double> ns(s.n_survivor_values.begin(), s.n_survivor_values.end());
    s.n_survivor_stats = box_stats(ns);

    double median_sum = 0.0;
    for (const auto& [day, values] : by_day) {
        auto b = box_stats(values);
        s.daily_min_bid[day] = b;
        s.daily_median[day] = b.median;
        median_sum += b.median;
    }
    if (!s.daily_median.empty()) {
        s.mean_of_daily_medians = median_sum / static_cast<double>(s.daily_median.size());
    }
    return s;
}

}  // namespace

std::vector<SettingSummary> aggregate(std::span<const GameRecord> records) {
    std::map<int, std::vector<const GameRecord*>> groups;
    for (const auto& r : records) {
        groups[r.experiment ? r.experiment->setting_id : 0].push_back(&r);
    }
    std::vector<SettingSummary> out;
    for (auto& [id, group] : groups) {
        out.push_back(summarise(id, std::move(group)));
    }
    return out;
}

}  // namespace wtown::analysis
