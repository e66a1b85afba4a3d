#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wtown/agents/llm_agent.hpp"
#include "wtown/engine/types.hpp"
#include "wtown/gateway/gateway.hpp"

namespace wtown::harness {

struct ExperimentSetting {
    int setting_id = 1;
    Abundance abundance = Abundance::low;
    bool persona = false;
    int repetitions = 10;
    std::string agents = "scripted:desperation";
    std::uint64_t base_seed = 0;
    int days = 20;
    AllocationPolicy policy = AllocationPolicy::skip_and_continue;

    // Game config for one repetition: canonical roster, seed base_seed + rep.
    GameConfig game_config(int repetition) const;
};

// The six-cell grid: 1-3 low/medium/high without personas, 4-6 with.
ExperimentSetting table_setting(int setting_id);

struct ExperimentOptions {
    std::filesystem::path out_dir;
    std::optional<std::filesystem::path> persona_dir;  // required when persona is on
    int parallelism = 0;                               // 0: pick a default
    gateway::Gateway* gateway = nullptr;
    agents::LlmAgentOptions llm;
    bool verbose = false;
    // Testing hook: stop scheduling once this many games have been persisted
    // in this invocation, leaving the batch incomplete as if interrupted.
    std::optional<int> stop_after;
};

enum class RepStatus { pending, completed, failed };

struct RepEntry {
    int repetition = 0;
    std::uint64_t seed = 0;
    RepStatus status = RepStatus::pending;
    std::string error;
};

struct ExperimentResult {
    std::vector<GameRecord> records;  // completed games, repetition order
    std::vector<RepEntry> reps;
    int failed = 0;
    bool complete = false;
    std::filesystem::path records_file;
    std::filesystem::path manifest_file;
};

// Runs (or resumes) one setting under out_dir/setting-<id>/:
//   manifest.json      setting, seeds, schema_version, per-repetition status
//   games/rep-NNNN.json  each game, written as soon as it finishes
//   records.jsonl      completed games in repetition order, written at the end
// A rerun with the same setting skips repetitions already completed.
// Throws before running anything if the output directory is unusable or
// holds a manifest for a different setting.
ExperimentResult run_experiment(const ExperimentSetting& setting, const ExperimentOptions& options);

std::filesystem::path setting_dir(const std::filesystem::path& out_dir, int setting_id);

}  // namespace wtown::harness
