#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include <json.hpp>

#include "test_util.hpp"
#include "wtown/agents/human_agent.hpp"
#include "wtown/agents/llm_agent.hpp"
#include "wtown/agents/parse.hpp"
#include "wtown/agents/persona.hpp"
#include "wtown/agents/prompts.hpp"
#include "wtown/agents/scripted.hpp"
#include "wtown/agents/transcript.hpp"
#include "wtown/engine/rules.hpp"

using namespace wtown;
using namespace wtown::agents;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = WTOWN_FIXTURES;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Compares against tests/fixtures/golden/<name>. Set WTOWN_UPDATE_GOLDEN=1
// to rewrite the files, then review the diff by hand.
void check_golden(const std::string& name, const std::string& actual) {
    const auto path = kFixtures / "golden" / name;
    if (std::getenv("WTOWN_UPDATE_GOLDEN")) {
        std::ofstream(path, std::ios::binary) << actual;
    }
    REQUIRE_MESSAGE(fs::exists(path), "missing golden file " << path);
    CHECK(slurp(path) == actual);
}

RoundRecord eric_wins_round() {
    GameConfig c = test::low_config();
    RoundRecord r;
    r.day = 1;
    r.supply = 19;
    r.bids = {test::bid("Alex", 150), test::bid("Bob", 200), test::bid("Cindy", 120), test::bid("David", 180),
              test::bid("Eric", 300)};
    r.winners = allocate(r.bids, c, r.supply);
    std::vector<PlayerState> states(5);
    for (auto& s : states) s.balance = 400;
    settle_round(states, r.winners, c);
    for (std::size_t i = 0; i < 5; ++i) {
        const auto& id = c.roster[i].id.value;
        r.hp_after[id] = states[i].hp;
        r.nwd_after[id] = states[i].no_water_days;
        r.balance_after[id] = states[i].balance;
    }
    r.min_successful_bid = 300;
    return r;
}

class ScriptedTransport final : public gateway::ChatTransport {
public:
    explicit ScriptedTransport(std::vector<std::string> replies) : replies_(std::move(replies)) {}
    gateway::TransportResponse send(const gateway::ChatRequest& req) override {
        requests.push_back(req);
        gateway::TransportResponse r;
        r.text = replies_.at(std::min(next_++, replies_.size() - 1));
        return r;
    }
    std::vector<gateway::ChatRequest> requests;

private:
    std::vector<std::string> replies_;
    std::size_t next_ = 0;
};

struct DecideFixture {
    GameConfig config = test::low_config();
    PlayerState state;
    AgentContext context;
    DecideFixture() {
        state.balance = 70;
        context.system_message = "rules";
        context.current_call = "call";
        context.round = 1;
    }
    DecisionRequest request() { return {config.roster[0], state, config, DayOpening{1, 15}, context}; }
};

}  // namespace

TEST_CASE("parser agrees with the hand-labelled corpus") {
    std::ifstream in(kFixtures / "parser_corpus" / "corpus.jsonl");
    REQUIRE(in);
    std::string line;
    int cases = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        const auto text = j.at("text").get<std::string>();
        const auto result = parse_decision(text, j.at("balance").get<Money>());
        CAPTURE(text);
        if (j.contains("failure")) {
            REQUIRE(std::holds_alternative<ParseFailure>(result));
            const auto kind = std::get<ParseFailure>(result).kind;
            const std::string k = kind == ParseFailure::Kind::no_amount      ? "no_amount"
                                  : kind == ParseFailure::Kind::over_balance ? "over_balance"
                                                                             : "fractional";
            CHECK(k == j.at("failure").get<std::string>());
        } else {
            REQUIRE(std::holds_alternative<AgentDecision>(result));
            const auto& d = std::get<AgentDecision>(result);
            if (j.at("bid").is_null()) {
                CHECK_FALSE(d.bid.has_value());
            } else {
                REQUIRE(d.bid.has_value());
                CHECK(*d.bid == j.at("bid").get<Money>());
            }
            CHECK(d.raw_response == text);
        }
        ++cases;
    }
    CHECK(cases == 50);
}

TEST_CASE("retry prompts mention the balance") {
    const ParseFailure f{ParseFailure::Kind::over_balance, 500, ""};
    CHECK(retry_prompt(f, 300).find("$300") != std::string::npos);
    CHECK(retry_prompt(f, 300).find("$500") != std::string::npos);
}

TEST_CASE("templates reject unfilled placeholders") {
    CHECK(render_template("a {x} b", {{"x", "1"}}) == "a 1 b");
    CHECK_THROWS_AS(render_template("a {x} {y}", {{"x", "1"}}), ConfigError);
}

TEST_CASE("golden prompts") {
    const auto cfg = test::low_config();
    check_golden("system_alex.txt", render_system_prompt(cfg.roster[0], cfg, false));

    auto with_persona = cfg.roster[4];
    with_persona.persona = PersonaText{"Software engineer", "Cautious and analytical",
                                       "Moved to W-Town two years ago for work."};
    check_golden("system_eric_persona.txt", render_system_prompt(with_persona, cfg, true));

    PlayerState st;
    st.balance = 70;
    check_golden("bid_call_alex_day1.txt", render_bid_call(cfg.roster[0], 1, 19, st, cfg));

    auto round = eric_wins_round();
    check_golden("results_eric_wins.txt", render_results_announcement(round, cfg));
    check_golden("participants_eric_wins.txt", render_participants_info(round, cfg));

    RoundRecord quiet;
    quiet.day = 2;
    quiet.supply = 12;
    quiet.bids = {test::bid("Alex", std::nullopt), test::bid("Bob", 60), test::bid("Cindy", 60)};
    quiet.winners = allocate(quiet.bids, cfg, quiet.supply);
    check_golden("results_tie_abstain.txt", render_results_announcement(quiet, cfg));
}

TEST_CASE("persona is required when enabled") {
    const auto cfg = test::low_config();
    CHECK_THROWS_AS(render_system_prompt(cfg.roster[0], cfg, true), ConfigError);
    CHECK(render_system_prompt(cfg.roster[0], cfg, false).find("Your persona") == std::string::npos);
}

TEST_CASE("no announcement when nobody wins") {
    const auto cfg = test::low_config();
    RoundRecord r;
    r.day = 3;
    r.supply = 10;
    r.bids = {test::bid("Alex", std::nullopt)};
    CHECK(render_results_announcement(r, cfg).find("no one, as there are no allocations today") !=
          std::string::npos);
}

TEST_CASE("persona files parse and attach to the roster") {
    const auto p = parse_persona("# comment\nprofession: Farmer\npersonality: Calm\nbackground: Grew up\n  nearby.\n");
    CHECK(p.profession == "Farmer");
    CHECK(p.background == "Grew up nearby.");
    CHECK_THROWS_AS(parse_persona("profession: x\n"), ConfigError);

    auto roster = canonical_roster();
    attach_personas(roster, fs::path(WTOWN_SOURCE_DIR) / "personas");
    for (const auto& r : roster) CHECK(r.persona.has_value());
    const auto dir = test::temp_dir("persona");
    CHECK_THROWS_AS(attach_personas(roster, dir), ConfigError);
}

TEST_CASE("scripted strategies") {
    ScriptedInput in;
    in.player = PlayerId{"Alex"};
    in.day = 1;
    in.state.balance = 100;

    CHECK(scripted_strategy(ScriptedKind::parse("constant:80"), in).bid == 80);
    CHECK(scripted_strategy(ScriptedKind::parse("constant:180"), in).bid == 100);
    CHECK(scripted_strategy(ScriptedKind::parse("fraction:0.5"), in).bid == 50);
    CHECK(scripted_strategy(ScriptedKind::parse("fraction:0.001"), in).bid == 1);
    CHECK(scripted_strategy(ScriptedKind::parse("desperation"), in).bid == 25);
    in.state.no_water_days = 1;
    CHECK(scripted_strategy(ScriptedKind::parse("desperation"), in).bid == 50);
    in.state.no_water_days = 5;
    CHECK(scripted_strategy(ScriptedKind::parse("desperation"), in).bid == 100);
    in.state.balance = 0;
    for (const char* k : {"constant:5", "fraction:0.5", "desperation", "random:1"}) {
        CHECK_FALSE(scripted_strategy(ScriptedKind::parse(k), in).bid.has_value());
    }
    CHECK_THROWS_AS(ScriptedKind::parse("constant:-1"), ConfigError);
    CHECK_THROWS_AS(ScriptedKind::parse("fraction:2"), ConfigError);
    CHECK_THROWS_AS(ScriptedKind::parse("wizard"), ConfigError);
    CHECK(ScriptedKind::parse("random:7").to_string() == "random:7");
}

TEST_CASE("desperation bids never shrink as the no-water streak grows") {
    for (Money balance = 1; balance < 400; balance += 7) {
        Money prev = 0;
        for (int nwd = 0; nwd < 8; ++nwd) {
            ScriptedInput in;
            in.state.balance = balance;
            in.state.no_water_days = nwd;
            const auto b = scripted_strategy(ScriptedKind::parse("desperation"), in).bid;
            REQUIRE(b.has_value());
            CHECK(*b >= prev);
            CHECK(*b <= balance);
            prev = *b;
        }
    }
}

TEST_CASE("random strategy is reproducible and keyed by player and day") {
    ScriptedInput a;
    a.player = PlayerId{"Alex"};
    a.day = 3;
    a.state.balance = 1000;
    auto b = a;
    b.player = PlayerId{"Bob"};
    const auto k = ScriptedKind::parse("random:9");
    CHECK(scripted_strategy(k, a) == scripted_strategy(k, a));
    int same = 0;
    for (int d = 1; d <= 20; ++d) {
        a.day = b.day = d;
        if (scripted_strategy(k, a).bid == scripted_strategy(k, b).bid) ++same;
        const auto v = scripted_strategy(k, a).bid;
        if (v) CHECK(*v <= 1000);
    }
    CHECK(same < 5);
}

TEST_CASE("context has 2 + 3(n-1) messages in the documented order") {
    Transcript t;
    t.system_message = "S";
    for (int n = 1; n <= 5; ++n) {
        if (n > 1) {
            const int d = n - 1;
            t.entries.push_back({d, fmt::format("r{}", d), fmt::format("b{}", d), fmt::format("i{}", d)});
        }
        const auto ctx = assemble_context(t, n, "call");
        const auto msgs = ctx.messages();
        REQUIRE(msgs.size() == static_cast<std::size_t>(2 + 3 * (n - 1)));
        CHECK(msgs.front().role == gateway::Role::system);
        CHECK(msgs.front().content == "S");
        CHECK(msgs.back().role == gateway::Role::user);
        CHECK(msgs.back().content == "call");
        for (int k = 1; k < n; ++k) {
            const auto base = static_cast<std::size_t>(1 + 3 * (k - 1));
            CHECK(msgs[base].role == gateway::Role::assistant);
            CHECK(msgs[base].content == fmt::format("r{}", k));
            CHECK(msgs[base + 1].content == fmt::format("b{}", k));
            CHECK(msgs[base + 2].content == fmt::format("i{}", k));
        }
    }
}

TEST_CASE("transcripts reject gaps and out-of-order rounds") {
    Transcript t;
    t.system_message = "S";
    t.entries.push_back({1, "r", "b", "i"});
    t.entries.push_back({3, "r", "b", "i"});
    CHECK_THROWS_AS(assemble_context(t, 4, "x"), TranscriptCorruption);

    TranscriptBook book;
    book.start(PlayerId{"A"}, "S");
    book.record_round(PlayerId{"A"}, {1, "r", "b", "i"});
    CHECK_THROWS_AS(book.record_round(PlayerId{"A"}, {3, "r", "b", "i"}), TranscriptCorruption);
    CHECK_THROWS_AS(book.context_for(PlayerId{"A"}, 1, "x"), TranscriptCorruption);
    CHECK(book.context_for(PlayerId{"A"}, 2, "x").messages().size() == 5);
}

TEST_CASE("llm agent retries an unusable answer and then bids") {
    auto transport = std::make_shared<ScriptedTransport>(std::vector<std::string>{"Hmm.", "I bid $40."});
    gateway::GatewayOptions opts;
    opts.mode = gateway::Mode::live;
    gateway::Gateway gw(opts, transport, [](auto) {});
    LlmAgent agent(gw, {});
    DecideFixture f;
    const auto d = agent.decide(f.request());
    CHECK(d.bid == 40);
    REQUIRE(transport->requests.size() == 2);
    CHECK(transport->requests[0].messages.size() == 2);
    CHECK(transport->requests[1].messages.size() == 4);
    CHECK(transport->requests[1].messages[2].role == gateway::Role::assistant);
    CHECK(transport->requests[1].tag.attempt == 1);
}

TEST_CASE("llm agent abstains once retries run out") {
    auto transport = std::make_shared<ScriptedTransport>(std::vector<std::string>{"I bid $900."});
    gateway::GatewayOptions opts;
    opts.mode = gateway::Mode::live;
    gateway::Gateway gw(opts, transport, [](auto) {});
    LlmAgent agent(gw, {});
    DecideFixture f;
    const auto d = agent.decide(f.request());
    CHECK_FALSE(d.bid.has_value());
    CHECK(d.reason == "unparseable");
    CHECK(transport->requests.size() == 3);
}

TEST_CASE("human agent: last submission wins and the slot clears after the deadline") {
    HumanAgent h;
    DecideFixture f;
    CHECK_FALSE(h.has_submission());
    h.submit(30);
    h.submit(45);
    CHECK(h.pending()->bid == 45);
    CHECK(h.decide(f.request()).bid == 45);
    CHECK_FALSE(h.has_submission());
    const auto missed = h.decide(f.request());
    CHECK_FALSE(missed.bid.has_value());
}
