#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "wtown/analysis/aggregate.hpp"

namespace wtown::analysis {

// setting_id,player,survived_runs,runs,survival_rate
std::string players_csv(std::span<const SettingSummary> settings);
// setting_id,repetition,seed,rsr_s,rsr_e,n_survivor,survivors
std::string runs_csv(std::span<const SettingSummary> settings);
// Survival grid per setting: one row per player with a mark per run and the
// average, then RSR_S, RSR_E and N_survivor rows.
std::string summary_table(std::span<const SettingSummary> settings, int excluded_failures = 0);
// Box-plot and distribution data; quantile convention stored under "meta".
nlohmann::json plot_data(std::span<const SettingSummary> settings);

struct AnalyzeResult {
    std::size_t records = 0;
    int excluded_failures = 0;
    std::vector<std::filesystem::path> files;
};

// Reads every *.jsonl under in_dir (recursively), counts failed repetitions
// from any manifest.json found there, and writes summary_players.csv,
// summary_runs.csv, summary.txt and plot_data.json into out_dir.
AnalyzeResult analyze_directory(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir);

}  // namespace wtown::analysis
