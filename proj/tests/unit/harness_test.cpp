#include <doctest.h>

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include <json.hpp>

#include "test_util.hpp"
#include "wtown/engine/game.hpp"
#include "wtown/engine/serialize.hpp"
#include "wtown/harness/agent_spec.hpp"
#include "wtown/harness/experiment.hpp"
#include "wtown/harness/match.hpp"
#include "wtown/agents/llm_agent.hpp"

using namespace wtown;
using namespace wtown::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentSetting small_setting(int id = 1, int reps = 6) {
    auto s = table_setting(id);
    s.repetitions = reps;
    s.base_seed = 500;
    return s;
}

ExperimentOptions options_for(const fs::path& out, int parallel = 1) {
    ExperimentOptions o;
    o.out_dir = out;
    o.parallelism = parallel;
    o.persona_dir = fs::path(WTOWN_SOURCE_DIR) / "personas";
    return o;
}

}  // namespace

TEST_CASE("table settings cover the abundance by persona grid") {
    CHECK(table_setting(1).abundance == Abundance::low);
    CHECK_FALSE(table_setting(1).persona);
    CHECK(table_setting(2).abundance == Abundance::medium);
    CHECK(table_setting(3).abundance == Abundance::high);
    CHECK(table_setting(4).abundance == Abundance::low);
    CHECK(table_setting(4).persona);
    CHECK(table_setting(6).abundance == Abundance::high);
    CHECK_THROWS_AS(table_setting(0), ConfigError);
    CHECK_THROWS_AS(table_setting(7), ConfigError);

    auto s = table_setting(2);
    s.base_seed = 40;
    const auto c = s.game_config(3);
    CHECK(c.seed == 43);
    CHECK(c.supply_low == 15);
    CHECK(c.supply_high == 25);
    CHECK(c.roster.size() == 5);
}

TEST_CASE("agent plans") {
    const auto all = AgentPlan::parse("scripted:fraction:0.3", 5);
    CHECK(all.seats.size() == 5);
    CHECK_FALSE(all.uses_llm());
    const auto mixed = AgentPlan::parse("mixed:llm,desperation,constant:80,random:2,human", 5);
    CHECK(mixed.uses_llm());
    CHECK(mixed.seats[4].kind == SeatControl::Kind::human);
    CHECK(mixed.seats[2].to_string() == "scripted:constant:80");
    CHECK_THROWS_AS(AgentPlan::parse("mixed:llm,desperation", 5), ConfigError);
    CHECK_THROWS_AS(make_agents(mixed, {}), ConfigError);  // llm without gateway
    CHECK_THROWS_AS(make_agents(AgentPlan::parse("human", 2), {}), ConfigError);
}

TEST_CASE("match decisions are the same with and without concurrency") {
    auto cfg = test::low_config(9);
    auto plan = AgentPlan::parse("random:4", 5);
    AgentFactoryContext ctx;
    ctx.game_seed = 9;
    auto a = make_agents(plan, ctx);
    auto b = make_agents(plan, ctx);
    std::vector<agents::Agent*> sa, sb;
    for (auto& x : a) sa.push_back(x.get());
    for (auto& x : b) sb.push_back(x.get());
    MatchOptions concurrent;
    concurrent.concurrent_decisions = true;
    CHECK(Match(cfg, sa).play() == Match(cfg, sb, concurrent).play());
}

TEST_CASE("bids placed during a round never reach another player's context for that round") {
    auto cfg = test::low_config(12);
    auto transport = std::make_shared<test::ThirdOfBalanceTransport>();
    gateway::GatewayOptions go;
    go.mode = gateway::Mode::live;
    gateway::Gateway gw(go, transport);

    // Records every context it is shown.
    struct Spy final : agents::Agent {
        std::vector<std::vector<gateway::ChatMessage>> seen;
        agents::AgentDecision decide(const agents::DecisionRequest& r) override {
            seen.push_back(r.context.messages());
            return {std::min<Money>(r.state.balance, 5), "spy", "spy"};
        }
        std::string kind() const override { return "spy"; }
    };
    std::vector<std::unique_ptr<agents::Agent>> owned;
    std::vector<agents::Agent*> seats;
    auto spy = std::make_unique<Spy>();
    Spy* spy_ptr = spy.get();
    owned.push_back(std::move(spy));
    for (int i = 1; i < 5; ++i) owned.push_back(std::make_unique<agents::LlmAgent>(gw, agents::LlmAgentOptions{}));
    for (auto& o : owned) seats.push_back(o.get());

    Match m(cfg, seats);
    int day = 0;
    while (!m.finished() && day < 6) {
        ++day;
        const auto asked = spy_ptr->seen.size();
        auto decisions = m.collect_decisions();
        if (spy_ptr->seen.size() == asked) break;  // the spy is out
        // Today's results are nowhere in the context built for today.
        const auto& ctx = spy_ptr->seen.back();
        CHECK(ctx.size() == static_cast<std::size_t>(2 + 3 * (day - 1)));
        const std::string today = fmt::format("DAY {}\n", day);
        for (const auto& msg : ctx) CHECK(msg.content.find(today) == std::string::npos);
        m.settle(decisions);
        const auto& t = m.transcripts().transcript(PlayerId{"Bob"});
        if (m.state().player(PlayerId{"Bob"}).alive) {
            CHECK(static_cast<int>(t.entries.size()) == day);
        }
    }
}

TEST_CASE("same seed, same bytes: sequential and parallel runs agree") {
    const auto a = test::temp_dir("det-a");
    const auto b = test::temp_dir("det-b");
    const auto c = test::temp_dir("det-c");
    const auto ra = run_experiment(small_setting(), options_for(a, 1));
    const auto rb = run_experiment(small_setting(), options_for(b, 1));
    const auto rc = run_experiment(small_setting(), options_for(c, 4));
    REQUIRE(ra.complete);
    CHECK(ra.records.size() == 6);
    const auto bytes = slurp(ra.records_file);
    CHECK_FALSE(bytes.empty());
    CHECK(bytes == slurp(rb.records_file));
    CHECK(bytes == slurp(rc.records_file));
    for (int i = 0; i < 6; ++i) {
        CHECK(ra.records[static_cast<std::size_t>(i)].config.seed == 500u + static_cast<unsigned>(i));
        CHECK(ra.records[static_cast<std::size_t>(i)].experiment->repetition == i);
    }
}

TEST_CASE("an interrupted batch resumes to the same output as an uninterrupted one") {
    const auto clean = test::temp_dir("clean");
    const auto resumed = test::temp_dir("resumed");
    const auto full = run_experiment(small_setting(2), options_for(clean));

    auto opts = options_for(resumed);
    opts.stop_after = 2;
    const auto partial = run_experiment(small_setting(2), opts);
    CHECK_FALSE(partial.complete);
    CHECK_FALSE(fs::exists(partial.records_file));
    const auto manifest = nlohmann::json::parse(slurp(partial.manifest_file));
    int done = 0;
    for (const auto& r : manifest.at("repetitions")) done += r.at("status") == "completed";
    CHECK(done == 2);

    opts.stop_after.reset();
    const auto finished = run_experiment(small_setting(2), opts);
    CHECK(finished.complete);
    CHECK(slurp(finished.records_file) == slurp(full.records_file));
}

TEST_CASE("zero repetitions produce an empty, complete batch") {
    const auto out = test::temp_dir("zero");
    const auto r = run_experiment(small_setting(1, 0), options_for(out));
    CHECK(r.complete);
    CHECK(r.records.empty());
    CHECK(fs::exists(r.records_file));
    CHECK(slurp(r.records_file).empty());
}

TEST_CASE("unusable output directories fail before any game runs") {
    const auto base = test::temp_dir("unwritable");
    const auto file = base / "not-a-dir";
    std::ofstream(file) << "x";
    CHECK_THROWS(run_experiment(small_setting(), options_for(file)));
}

TEST_CASE("a directory holding another setting's manifest is refused") {
    const auto out = test::temp_dir("mismatch");
    run_experiment(small_setting(1, 2), options_for(out));
    auto other = small_setting(1, 2);
    other.base_seed = 1;
    CHECK_THROWS_AS(run_experiment(other, options_for(out)), ConfigError);
}

TEST_CASE("persona settings need a persona directory") {
    auto opts = options_for(test::temp_dir("persona"));
    opts.persona_dir.reset();
    CHECK_THROWS_AS(run_experiment(small_setting(4, 1), opts), ConfigError);
    opts.persona_dir = fs::path(WTOWN_SOURCE_DIR) / "personas";
    const auto r = run_experiment(small_setting(4, 1), opts);
    CHECK(r.records.front().config.roster.front().persona.has_value());
}

TEST_CASE("failed games are marked and the rest of the batch continues") {
    const auto out = test::temp_dir("fail");
    const auto cache = test::temp_dir("fail-cache");
    gateway::Gateway gw({gateway::Mode::replay, cache}, nullptr);
    auto setting = small_setting(1, 3);
    setting.agents = "mixed:llm,desperation,desperation,desperation,desperation";
    auto opts = options_for(out);
    opts.gateway = &gw;
    const auto r = run_experiment(setting, opts);
    CHECK(r.complete);
    CHECK(r.failed == 3);
    CHECK(r.records.empty());
    const auto manifest = nlohmann::json::parse(slurp(r.manifest_file));
    for (const auto& rep : manifest.at("repetitions")) {
        CHECK(rep.at("status") == "failed");
        CHECK(rep.at("error").get<std::string>().find("replay cache has no entry") != std::string::npos);
    }
}

TEST_CASE("llm games recorded through the gateway replay identically offline") {
    const auto cache = test::temp_dir("closure-cache");
    auto transport = std::make_shared<test::ThirdOfBalanceTransport>();
    gateway::Gateway recorder({gateway::Mode::record, cache}, transport);
    auto setting = small_setting(1, 2);
    setting.agents = "llm";
    auto opts = options_for(test::temp_dir("closure-rec"));
    opts.gateway = &recorder;
    const auto recorded = run_experiment(setting, opts);
    REQUIRE(recorded.complete);
    REQUIRE(recorded.failed == 0);
    CHECK(transport->calls > 0);

    gateway::Gateway offline({gateway::Mode::replay, cache}, nullptr);
    opts.out_dir = test::temp_dir("closure-replay");
    opts.gateway = &offline;
    const auto replayed = run_experiment(setting, opts);
    REQUIRE(replayed.failed == 0);
    CHECK(replayed.records == recorded.records);
    CHECK(offline.network_calls() == 0);
    CHECK(slurp(replayed.records_file) == slurp(recorded.records_file));
}
