// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any failed.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "../unit/test_util.hpp"
#include "wtown/harness/agent_spec.hpp"
#include "wtown/analysis/indicators.hpp"
#include "wtown/analysis/report.hpp"
#include "wtown/engine/game.hpp"
#include "wtown/engine/rules.hpp"
#include "wtown/engine/serialize.hpp"
#include "wtown/harness/experiment.hpp"
#include "wtown/harness/match.hpp"

using namespace wtown;
namespace fs = std::filesystem;
using Ms = std::chrono::duration<double, std::milli>;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

int failures = 0;

void criterion(const std::string& name, double limit_ms, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception& e) {
        o = {false, fmt::format("exception: {}", e.what())};
    }
    const double ms = Ms(std::chrono::steady_clock::now() - start).count();
    const bool in_time = limit_ms <= 0 || ms < limit_ms;
    const bool pass = o.ok && in_time;
    if (!pass) ++failures;
    std::string timing = fmt::format("{:.3f} ms", ms);
    if (limit_ms > 0) timing += fmt::format(", limit {} ms", limit_ms);
    if (!in_time) o.detail += " (too slow)";
    fmt::print("{} {}: {} [{}]\n", pass ? "PASS" : "FAIL", name, o.detail, timing);
    std::fflush(stdout);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path persona_dir() {
    return fs::path(WTOWN_SOURCE_DIR) / "personas";
}

// Randomized scripted games: strategy per seat, abundance and policy vary with the seed.
std::vector<GameRecord> random_scripted_games(int n) {
    static const std::vector<std::string> strategies = {"desperation", "random:1",     "random:7",
                                                        "fraction:0.2", "fraction:0.6", "constant:15",
                                                        "constant:60",  "constant:150"};
    std::vector<GameRecord> out;
    std::mt19937_64 gen(20240611);
    for (int g = 0; g < n; ++g) {
        auto cfg = test::low_config(static_cast<std::uint64_t>(g));
        const auto b = supply_bounds(static_cast<Abundance>(g % 3));
        cfg.supply_low = b.low;
        cfg.supply_high = b.high;
        if (g % 5 == 4) cfg.policy = AllocationPolicy::stop_at_first_misfit;
        std::string plan = "mixed:";
        for (std::size_t i = 0; i < cfg.roster.size(); ++i) {
            plan += (i ? "," : "") + strategies[std::uniform_int_distribution<std::size_t>(0, strategies.size() - 1)(gen)];
        }
        harness::AgentFactoryContext ctx;
        ctx.game_seed = cfg.seed;
        auto owned = harness::make_agents(harness::AgentPlan::parse(plan, cfg.roster.size()), ctx);
        std::vector<agents::Agent*> seats;
        for (auto& a : owned) seats.push_back(a.get());
        out.push_back(harness::Match(cfg, seats).play());
    }
    return out;
}

std::vector<PlayerSpec> only(std::initializer_list<const char*> names) {
    std::vector<PlayerSpec> out;
    for (const auto& p : canonical_roster()) {
        if (std::any_of(names.begin(), names.end(), [&](const char* n) { return p.id.value == n; })) out.push_back(p);
    }
    return out;
}

}  // namespace

int main() {
    criterion("RSR_S exactness", 1.0, [] {
        const auto full = canonical_roster();
        const auto lo = analysis::compute_rsr(10, 20, full);
        const auto med = analysis::compute_rsr(15, 25, full);
        const auto hi = analysis::compute_rsr(20, 30, full);
        const bool ok = *lo.value == analysis::Rational(3, 10) && *med.value == analysis::Rational(2, 5) &&
                        *hi.value == analysis::Rational(1, 2);
        return Outcome{ok, fmt::format("low {} medium {} high {}", lo.to_string(), med.to_string(), hi.to_string())};
    });

    criterion("RSR_E for survivors {Cindy, Eric} under low supply", 1.0, [] {
        const auto r = analysis::compute_rsr(10, 20, only({"Cindy", "Eric"}));
        return Outcome{r.to_string() == "0.68", fmt::format("{} (exact {}/{})", r.to_string(), r.value->num(),
                                                             r.value->den())};
    });

    criterion("single-winner round replay", 1.0, [] {
        auto cfg = test::low_config(1);
        for (auto& p : cfg.roster) p.salary = 400;
        cfg.supply_low = cfg.supply_high = 19;
        GameState g(cfg);
        const auto& r = g.step_day(std::vector<Bid>{test::bid("Alex", 150), test::bid("Bob", 200),
                                                    test::bid("Cindy", 120), test::bid("David", 180),
                                                    test::bid("Eric", 300)});
        bool ok = r.supply == 19 && r.winners.size() == 1 && r.winners[0].player.value == "Eric" &&
                  r.winners[0].payment == 300 && r.min_successful_bid == 300 && r.hp_after.at("Eric") == 10 &&
                  r.balance_after.at("Eric") == 100;
        for (const char* p : {"Alex", "Bob", "Cindy", "David"}) {
            ok = ok && r.hp_after.at(p) == 7 && r.nwd_after.at(p) == 1 && r.balance_after.at(p) == 400;
        }
        return Outcome{ok, fmt::format("winner {} pays {}, min bid {}, Eric HP {}, others HP {}",
                                       r.winners.empty() ? "none" : r.winners[0].player.value,
                                       r.winners.empty() ? 0 : r.winners[0].payment,
                                       r.min_successful_bid.value_or(0), r.hp_after.at("Eric"), r.hp_after.at("Alex"))};
    });

    criterion("allocation matches the independent oracle", 1000.0, [] {
        std::mt19937_64 gen(99);
        auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); };
        int mismatches = 0;
        for (int inst = 0; inst < 1000; ++inst) {
            const int n = pick(2, 8);
            const Money shared = pick(1, 500);
            std::map<PlayerId, Units> req;
            std::vector<Bid> bids;
            std::vector<test::OracleBid> oracle;
            for (int i = 0; i < n; ++i) {
                const std::string id = fmt::format("p{}", i);
                const Units r = pick(1, 15);
                const Money amount = (i < 2 || pick(0, 2) == 0) ? shared : pick(1, 500);
                req[PlayerId{id}] = r;
                bids.push_back(test::bid(id, amount));
                oracle.push_back({id, amount, r});
            }
            const Units supply = pick(1, 60);
            std::vector<std::string> got;
            for (const auto& w : allocate(bids, req, supply)) got.push_back(w.player.value);
            if (got != test::oracle_winners(oracle, supply, false)) ++mismatches;
        }
        return Outcome{mismatches == 0, fmt::format("1000 instances, each with a forced tie, {} mismatches", mismatches)};
    });

    criterion("determinism of harness output", 5000.0, [] {
        auto s = harness::table_setting(1);
        s.repetitions = 10;
        s.base_seed = 42;
        s.agents = "scripted:desperation";
        harness::ExperimentOptions a;
        a.out_dir = test::temp_dir("acc-det-a");
        auto b = a;
        b.out_dir = test::temp_dir("acc-det-b");
        const auto ra = harness::run_experiment(s, a);
        const auto rb = harness::run_experiment(s, b);
        const auto x = slurp(ra.records_file);
        const bool ok = ra.records.size() == 10 && !x.empty() && x == slurp(rb.records_file);
        return Outcome{ok, fmt::format("2 x 10 games, {} bytes each, identical: {}", x.size(),
                                       x == slurp(rb.records_file))};
    });

    const auto corpus = random_scripted_games(500);

    criterion("RSR_E >= RSR_S in every record", 0, [&] {
        int violations = 0, undefined = 0;
        for (const auto& rec : corpus) {
            const auto ind = analysis::compute_indicators(rec);
            if (!ind.rsr_e.value) {
                ++undefined;
                continue;
            }
            if (*ind.rsr_e.value < *ind.rsr_s.value) ++violations;
        }
        return Outcome{violations == 0, fmt::format("500 games, {} violations, {} with no survivors", violations,
                                                    undefined)};
    });

    criterion("HP follows the win/miss recurrence", 0, [&] {
        int violations = 0, traces = 0;
        for (const auto& rec : corpus) {
            for (const auto& p : rec.config.roster) {
                std::vector<bool> wins;
                for (const auto& r : rec.rounds) {
                    if (!r.hp_after.count(p.id.value)) break;
                    wins.push_back(std::any_of(r.winners.begin(), r.winners.end(),
                                               [&](const Winner& w) { return w.player == p.id; }));
                }
                const auto t = test::fold_hp(wins, rec.config.hp_start, rec.config.hp_max, rec.config.water_gain);
                ++traces;
                for (std::size_t d = 0; d < t.hp.size(); ++d) {
                    if (rec.rounds[d].hp_after.at(p.id.value) != t.hp[d]) ++violations;
                }
                // Once eliminated, the record freezes that player's HP and grants nothing.
                for (std::size_t d = t.hp.size(); d < wins.size(); ++d) {
                    if (wins[d] || rec.rounds[d].hp_after.at(p.id.value) != t.hp.back()) ++violations;
                }
                if (t.died == rec.final_states.at(p.id.value).alive) ++violations;
            }
        }
        return Outcome{violations == 0, fmt::format("500 games, {} player traces, {} violations", traces, violations)};
    });

    criterion("gateway record/replay closure", 0, [] {
        const auto cache = test::temp_dir("acc-cache");
        auto transport = std::make_shared<test::ThirdOfBalanceTransport>();
        gateway::Gateway recorder({gateway::Mode::record, cache}, transport);
        auto s = harness::table_setting(1);
        s.repetitions = 2;
        s.base_seed = 7;
        s.agents = "llm";
        harness::ExperimentOptions o;
        o.out_dir = test::temp_dir("acc-rec");
        o.gateway = &recorder;
        const auto recorded = harness::run_experiment(s, o);

        gateway::Gateway offline({gateway::Mode::replay, cache}, nullptr);
        o.out_dir = test::temp_dir("acc-replay");
        o.gateway = &offline;
        const auto replayed = harness::run_experiment(s, o);
        const bool ok = recorded.failed == 0 && replayed.failed == 0 && recorded.records.size() == 2 &&
                        replayed.records == recorded.records && offline.network_calls() == 0 &&
                        slurp(replayed.records_file) == slurp(recorded.records_file);
        return Outcome{ok, fmt::format("{} model calls recorded, {} served from cache offline, {} network calls, "
                                       "records identical: {}",
                                       transport->calls.load(), offline.cache_hits(), offline.network_calls(),
                                       replayed.records == recorded.records)};
    });

    criterion("analysis survival rates equal hand counts", 0, [] {
        const auto out = test::temp_dir("acc-analyze");
        for (int id = 1; id <= 6; ++id) {
            auto s = harness::table_setting(id);
            s.repetitions = 10;
            s.base_seed = 1000;
            s.agents = "mixed:desperation,random:3,fraction:0.4,constant:90,desperation";
            harness::ExperimentOptions o;
            o.out_dir = out;
            o.persona_dir = persona_dir();
            harness::run_experiment(s, o);
        }
        analysis::analyze_directory(out, out / "analysis");

        // Hand count straight from the record files.
        std::map<std::pair<int, std::string>, int> survived;
        for (int id = 1; id <= 6; ++id) {
            for (const auto& rec : read_jsonl_file((out / fmt::format("setting-{}", id) / "records.jsonl").string())) {
                for (const auto& [player, st] : rec.final_states) survived[{id, player}] += st.alive ? 1 : 0;
            }
        }
        std::ifstream csv(out / "analysis" / "summary_players.csv");
        std::string line;
        std::getline(csv, line);
        int rows = 0, mismatches = 0;
        std::string example;
        while (std::getline(csv, line)) {
            std::stringstream ss(line);
            std::string sid, player, surv, runs, rate;
            std::getline(ss, sid, ',');
            std::getline(ss, player, ',');
            std::getline(ss, surv, ',');
            std::getline(ss, runs, ',');
            std::getline(ss, rate, ',');
            const int hand = survived.at({std::stoi(sid), player});
            const std::string want = fmt::format("{}.{}0", hand / 10, hand % 10);
            if (rate != want || std::stoi(surv) != hand || runs != "10") ++mismatches;
            if (example.empty() && hand > 0 && hand < 10) {
                example = fmt::format("setting {} {} {}/10 -> {}", sid, player, hand, rate);
            }
            ++rows;
        }
        return Outcome{rows == 30 && mismatches == 0,
                       fmt::format("{} player rows, {} mismatches; e.g. {}", rows, mismatches, example)};
    });

    fmt::print("{} criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
