#include "wtown/analysis/report.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "wtown/engine/serialize.hpp"

namespace wtown::analysis {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string setting_title(const SettingSummary& s) {
    return fmt::format("Setting {} (supply {}..{}, persona {})", s.setting_id, s.supply_low, s.supply_high,
                       s.persona ? "on" : "off");
}

std::string fmt_double(double v) {
    return fmt::format("{:.4f}", v);
}

json box_json(const BoxStats& b) {
    return json{{"count", b.count}, {"min", b.min},       {"q1", b.q1},  {"median", b.median},
                {"q3", b.q3},       {"max", b.max},       {"mean", b.mean}};
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write {}", p.string()));
    }
    out << content;
}

}  // namespace

std::string players_csv(std::span<const SettingSummary> settings) {
    std::string out = "setting_id,player,survived_runs,runs,survival_rate\n";
    for (const auto& s : settings) {
        for (const auto& p : s.players) {
            out += fmt::format("{},{},{},{},{}\n", s.setting_id, p.id, p.survived, p.runs, p.rate.to_fixed(2));
        }
    }
    return out;
}

std::string runs_csv(std::span<const SettingSummary> settings) {
    std::string out = "setting_id,repetition,seed,rsr_s,rsr_e,n_survivor,survivors\n";
    for (const auto& s : settings) {
        for (const auto& r : s.runs) {
            std::string survivors;
            for (const auto& [id, alive] : r.survival) {
                if (!alive) continue;
                if (!survivors.empty()) survivors += ';';
                survivors += id;
            }
            out += fmt::format("{},{},{},{},{},{},{}\n", s.setting_id, r.repetition, r.seed, r.rsr_s.to_string(),
                               r.rsr_e.to_string(), r.n_survivor, survivors);
        }
    }
    return out;
}

std::string summary_table(std::span<const SettingSummary> settings, int excluded_failures) {
    std::string out;
    for (const auto& s : settings) {
        out += setting_title(s) + "\n";
        std::string header = fmt::format("{:<12}", "Player");
        for (const auto& r : s.runs) header += fmt::format("{:>6}", r.repetition + 1);
        header += fmt::format("{:>7}", "Avg.");
        out += header + "\n";
        for (const auto& p : s.players) {
            std::string row = fmt::format("{:<12}", p.name);
            for (const auto& r : s.runs) row += fmt::format("{:>6}", r.survival.at(p.id) ? "Y" : "x");
            row += fmt::format("{:>7}", p.rate.to_fixed(2));
            out += row + "\n";
        }
        auto rsr_row = [&](const char* label, auto get, const std::optional<Rational>& mean) {
            std::string row = fmt::format("{:<12}", label);
            for (const auto& r : s.runs) {
                const Rsr& v = get(r);
                row += fmt::format("{:>6}", v.value ? v.value->to_fixed(2) : "-");
            }
            row += fmt::format("{:>7}", mean ? mean->to_fixed(2) : "-");
            out += row + "\n";
        };
        rsr_row("RSR_S", [](const RunSummary& r) -> const Rsr& { return r.rsr_s; }, s.mean_rsr_s);
        rsr_row("RSR_E", [](const RunSummary& r) -> const Rsr& { return r.rsr_e; }, s.mean_rsr_e);
        std::string row = fmt::format("{:<12}", "N_survivor");
        for (const auto& r : s.runs) row += fmt::format("{:>6}", r.n_survivor);
        row += fmt::format("{:>7}", fmt::format("{:.2f}", s.n_survivor_stats.mean));
        out += row + "\n";
        if (s.all_eliminated_runs > 0) {
            out += fmt::format("(RSR_E undefined in {} run(s): all eliminated)\n", s.all_eliminated_runs);
        }
        out += "\n";
    }
    if (excluded_failures > 0) {
        out += fmt::format("Excluded failed games: {}\n", excluded_failures);
    }
    return out;
}

json plot_data(std::span<const SettingSummary> settings) {
    json out;
    out["meta"] = {{"quantile_method", kQuantileMethod},
                   {"whiskers", "min and max of the sample"},
                   {"missing_days", "days a run did not reach, or with no winner, contribute no value"}};
    json arr = json::array();
    for (const auto& s : settings) {
        json days = json::array();
        for (const auto& [day, b] : s.daily_min_bid) {
            json d = box_json(b);
            d["day"] = day;
            days.push_back(d);
        }
        json medians = json::array();
        for (const auto& [day, m] : s.daily_median) {
            medians.push_back({{"day", day}, {"median", m}});
        }
        json entry = {{"setting_id", s.setting_id},
                      {"persona", s.persona},
                      {"supply_low", s.supply_low},
                      {"supply_high", s.supply_high},
                      {"min_successful_bid", days},
                      {"daily_median", medians},
                      {"mean_of_daily_medians",
                       s.mean_of_daily_medians ? json(*s.mean_of_daily_medians) : json(nullptr)},
                      {"n_survivor", {{"values", s.n_survivor_values}, {"stats", box_json(s.n_survivor_stats)}}},
                      {"rsr_e",
                       {{"values", s.rsr_e_values},
                        {"stats", s.rsr_e_stats ? box_json(*s.rsr_e_stats) : json(nullptr)},
                        {"all_eliminated_runs", s.all_eliminated_runs}}}};
        arr.push_back(entry);
    }
    out["settings"] = arr;
    return out;
}

AnalyzeResult analyze_directory(const fs::path& in_dir, const fs::path& out_dir) {
    if (!fs::is_directory(in_dir)) {
        throw std::runtime_error(fmt::format("{} is not a directory", in_dir.string()));
    }
    std::vector<fs::path> jsonl;
    std::vector<fs::path> manifests;
    for (const auto& e : fs::recursive_directory_iterator(in_dir)) {
        if (!e.is_regular_file()) continue;
        if (e.path().extension() == ".jsonl") jsonl.push_back(e.path());
        if (e.path().filename() == "manifest.json") manifests.push_back(e.path());
    }
    std::sort(jsonl.begin(), jsonl.end());

    std::vector<GameRecord> records;
    for (const auto& p : jsonl) {
        auto part = read_jsonl_file(p.string());
        std::move(part.begin(), part.end(), std::back_inserter(records));
    }
    if (records.empty()) {
        throw std::runtime_error(fmt::format("no game records under {}", in_dir.string()));
    }

    AnalyzeResult result;
    result.records = records.size();
    for (const auto& m : manifests) {
        std::ifstream in(m);
        auto j = json::parse(in, nullptr, false);
        if (j.is_discarded()) continue;
        for (const auto& r : j.value("repetitions", json::array())) {
            if (r.value("status", "") == "failed") ++result.excluded_failures;
        }
    }

    const auto settings = aggregate(records);
    fs::create_directories(out_dir);
    const auto players = out_dir / "summary_players.csv";
    const auto runs = out_dir / "summary_runs.csv";
    const auto table = out_dir / "summary.txt";
    const auto plot = out_dir / "plot_data.json";
    write_file(players, players_csv(settings));
    write_file(runs, runs_csv(settings));
    write_file(table, summary_table(settings, result.excluded_failures));
    write_file(plot, plot_data(settings).dump(2) + "\n");
    result.files = {players, runs, table, plot};
    return result;
}

}  // namespace wtown::analysis
