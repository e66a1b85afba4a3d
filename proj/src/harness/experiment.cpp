#include "wtown/harness/experiment.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "wtown/agents/persona.hpp"
#include "wtown/engine/serialize.hpp"
#include "wtown/harness/agent_spec.hpp"
#include "wtown/harness/match.hpp"

namespace wtown::harness {

namespace fs = std::filesystem;
using nlohmann::json;

GameConfig ExperimentSetting::game_config(int repetition) const {
    GameConfig c;
    c.days = days;
    const auto bounds = supply_bounds(abundance);
    c.supply_low = bounds.low;
    c.supply_high = bounds.high;
    c.roster = canonical_roster();
    c.seed = base_seed + static_cast<std::uint64_t>(repetition);
    c.policy = policy;
    return c;
}

ExperimentSetting table_setting(int setting_id) {
    if (setting_id < 1 || setting_id > 6) {
        throw ConfigError(fmt::format("setting id must be 1..6, got {}", setting_id));
    }
    ExperimentSetting s;
    s.setting_id = setting_id;
    static constexpr Abundance levels[] = {Abundance::low, Abundance::medium, Abundance::high};
    s.abundance = levels[(setting_id - 1) % 3];
    s.persona = setting_id >= 4;
    return s;
}

fs::path setting_dir(const fs::path& out_dir, int setting_id) {
    return out_dir / fmt::format("setting-{}", setting_id);
}

namespace {

void write_atomic(const fs::path& target, const std::string& content) {
    const auto tmp = target.parent_path() / ("." + target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
        }
        out << content;
        if (!out.flush()) {
            throw std::runtime_error(fmt::format("write failed for {}", tmp.string()));
        }
    }
    fs::rename(tmp, target);
}

std::string status_name(RepStatus s) {
    switch (s) {
        case RepStatus::pending:
            return "pending";
        case RepStatus::completed:
            return "completed";
        case RepStatus::failed:
            return "failed";
    }
    return "pending";
}

RepStatus status_from(const std::string& s) {
    if (s == "completed") return RepStatus::completed;
    if (s == "failed") return RepStatus::failed;
    return RepStatus::pending;
}

json setting_json(const ExperimentSetting& s) {
    const auto b = supply_bounds(s.abundance);
    return json{{"setting_id", s.setting_id},
                {"abundance", to_string(s.abundance)},
                {"supply_low", b.low},
                {"supply_high", b.high},
                {"persona", s.persona},
                {"agents", s.agents},
                {"base_seed", std::to_string(s.base_seed)},
                {"days", s.days},
                {"allocation_policy",
                 s.policy == AllocationPolicy::skip_and_continue ? "skip_and_continue" : "stop_at_first_misfit"}};
}

fs::path game_file(const fs::path& dir, int rep) {
    return dir / "games" / fmt::format("rep-{:04}.json", rep);
}

void probe_writable(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir / "games", ec);
    if (ec) {
        throw std::runtime_error(fmt::format("output directory {} is not usable: {}", dir.string(), ec.message()));
    }
    const auto probe = dir / ".write-probe";
    {
        std::ofstream out(probe);
        if (!out || !(out << "ok") || !out.flush()) {
            throw std::runtime_error(fmt::format("output directory {} is not writable", dir.string()));
        }
    }
    fs::remove(probe);
}

class Manifest {
public:
    Manifest(fs::path path, json setting) : path_(std::move(path)), setting_(std::move(setting)) {}

    void load_or_init(const ExperimentSetting& s) {
        if (fs::exists(path_)) {
            std::ifstream in(path_);
            json j = json::parse(in);
            if (j.at("setting") != setting_) {
                throw ConfigError(fmt::format("{} belongs to a different setting; use another output directory",
                                              path_.string()));
            }
            for (const auto& r : j.at("repetitions")) {
                RepEntry e;
                e.repetition = r.at("repetition").get<int>();
                e.seed = std::stoull(r.at("seed").get<std::string>());
                e.status = status_from(r.at("status").get<std::string>());
                e.error = r.value("error", "");
                if (e.repetition < s.repetitions) {
                    reps_.push_back(e);
                }
            }
        }
        for (int rep = static_cast<int>(reps_.size()); rep < s.repetitions; ++rep) {
            reps_.push_back(RepEntry{rep, s.base_seed + static_cast<std::uint64_t>(rep), RepStatus::pending, ""});
        }
    }

    std::vector<RepEntry>& reps() { return reps_; }

    void save(bool complete) const {
        json reps = json::array();
        for (const auto& r : reps_) {
            json e = {{"repetition", r.repetition},
                      {"seed", std::to_string(r.seed)},
                      {"status", status_name(r.status)}};
            if (!r.error.empty()) e["error"] = r.error;
            reps.push_back(e);
        }
        json j = {{"schema_version", kSchemaVersion},
                  {"setting", setting_},
                  {"repetitions", reps},
                  {"complete", complete}};
        write_atomic(path_, j.dump(2) + "\n");
    }

private:
    fs::path path_;
    json setting_;
    std::vector<RepEntry> reps_;
};

std::optional<GameRecord> load_game(const fs::path& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string line;
    std::getline(in, line);
    try {
        return parse_game_record(line);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSetting& setting, const ExperimentOptions& options) {
    if (setting.repetitions < 0) {
        throw ConfigError("repetitions must be >= 0");
    }
    const auto plan = AgentPlan::parse(setting.agents, canonical_roster().size());
    if (plan.uses_llm() && !options.gateway) {
        throw ConfigError("llm agents need a configured gateway");
    }
    std::vector<PlayerSpec> roster = canonical_roster();
    if (setting.persona) {
        if (!options.persona_dir) {
            throw ConfigError("persona settings need a persona directory");
        }
        agents::attach_personas(roster, *options.persona_dir);
    }
    setting.game_config(0).validate();

    const fs::path dir = setting_dir(options.out_dir, setting.setting_id);
    probe_writable(dir);

    Manifest manifest(dir / "manifest.json", setting_json(setting));
    manifest.load_or_init(setting);

    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < manifest.reps().size(); ++i) {
        auto& r = manifest.reps()[i];
        if (r.status == RepStatus::completed && load_game(game_file(dir, r.repetition))) {
            continue;
        }
        r.status = RepStatus::pending;
        r.error.clear();
        todo.push_back(i);
    }
    manifest.save(false);

    int parallelism = options.parallelism;
    if (parallelism <= 0) {
        parallelism = plan.uses_llm() ? options.gateway->max_in_flight()
                                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    parallelism = std::max(1, std::min<int>(parallelism, static_cast<int>(todo.size())));

    std::mutex mu;
    std::atomic<std::size_t> next{0};
    std::atomic<int> persisted{0};
    auto budget_left = [&] { return !options.stop_after || persisted.load() < *options.stop_after; };

    auto run_one = [&](std::size_t slot) {
        const int rep = manifest.reps()[slot].repetition;
        GameConfig config = setting.game_config(rep);
        config.roster = roster;

        AgentFactoryContext ctx;
        ctx.game_seed = config.seed;
        ctx.gateway = options.gateway;
        ctx.llm = options.llm;
        ctx.llm.experiment = fmt::format("setting-{}", setting.setting_id);
        ctx.llm.game = fmt::format("rep-{}", rep);
        auto agents = make_agents(plan, ctx);
        std::vector<agents::Agent*> seats;
        for (auto& a : agents) seats.push_back(a.get());

        MatchOptions mo;
        mo.persona_enabled = setting.persona;
        mo.concurrent_decisions = plan.uses_llm();
        Match match(config, seats, mo);
        GameRecord record = match.play();
        record.experiment = ExperimentLabel{setting.setting_id, rep, setting.persona, setting.agents, "harness"};
        return record;
    };

    auto worker = [&] {
        while (budget_left()) {
            const std::size_t k = next.fetch_add(1);
            if (k >= todo.size()) return;
            const std::size_t slot = todo[k];
            const int rep = manifest.reps()[slot].repetition;
            try {
                GameRecord record = run_one(slot);
                write_atomic(game_file(dir, rep), to_json_line(record) + "\n");
                std::lock_guard lock(mu);
                manifest.reps()[slot].status = RepStatus::completed;
                manifest.save(false);
                ++persisted;
                if (options.verbose) {
                    fmt::print(stderr, "setting {} rep {} done\n", setting.setting_id, rep);
                }
            } catch (const std::exception& e) {
                std::lock_guard lock(mu);
                manifest.reps()[slot].status = RepStatus::failed;
                manifest.reps()[slot].error = e.what();
                manifest.save(false);
                fmt::print(stderr, "setting {} rep {} failed: {}\n", setting.setting_id, rep, e.what());
            }
        }
    };

    {
        std::vector<std::jthread> pool;
        for (int t = 1; t < parallelism; ++t) {
            pool.emplace_back(worker);
        }
        worker();
    }

    ExperimentResult result;
    result.manifest_file = dir / "manifest.json";
    result.records_file = dir / "records.jsonl";
    bool all_done = true;
    std::string lines;
    for (auto& r : manifest.reps()) {
        if (r.status == RepStatus::pending) {
            all_done = false;
            continue;
        }
        if (r.status == RepStatus::failed) {
            ++result.failed;
            continue;
        }
        auto g = load_game(game_file(dir, r.repetition));
        if (!g) {
            r.status = RepStatus::failed;
            r.error = "game file unreadable";
            ++result.failed;
            continue;
        }
        lines += to_json_line(*g) + "\n";
        result.records.push_back(std::move(*g));
    }
    result.reps = manifest.reps();
    result.complete = all_done;
    manifest.save(all_done);
    if (all_done) {
        write_atomic(result.records_file, lines);
    }
    return result;
}

}  // namespace wtown::harness
