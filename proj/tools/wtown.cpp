// Command-line entry point: run experiments, replay records, analyze and
// plot results, and host live games.

#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wtown/analysis/plot.hpp"
#include "wtown/analysis/report.hpp"
#include "wtown/engine/game.hpp"
#include "wtown/engine/serialize.hpp"
#include "wtown/gateway/http_transport.hpp"
#include "wtown/harness/experiment.hpp"
#include "wtown/live/server.hpp"

namespace fs = std::filesystem;
using namespace wtown;

namespace {

struct LlmFlags {
    std::string mode = "replay";
    std::string cache_dir = "llm-cache";
    std::string model;
    double temperature = 0.7;
    int max_in_flight = 5;

    void add(CLI::App& cmd) {
        cmd.add_option("--llm-mode", mode, "live, record or replay")
            ->check(CLI::IsMember({"live", "record", "replay"}))
            ->envname("WTOWN_LLM_MODE")
            ->capture_default_str();
        cmd.add_option("--cache-dir", cache_dir, "response cache directory")
            ->envname("WTOWN_CACHE_DIR")
            ->capture_default_str();
        cmd.add_option("--model", model, "model or deployment name (default: WTOWN_LLM_MODEL or gpt-4-32k)");
        cmd.add_option("--temperature", temperature)->check(CLI::NonNegativeNumber)->capture_default_str();
        cmd.add_option("--max-in-flight", max_in_flight)->check(CLI::PositiveNumber)->capture_default_str();
    }

    std::unique_ptr<gateway::Gateway> make_gateway() const {
        gateway::GatewayOptions opts;
        opts.mode = gateway::mode_from_string(mode);
        opts.max_in_flight = max_in_flight;
        if (opts.mode != gateway::Mode::live) opts.cache_dir = cache_dir;
        std::shared_ptr<gateway::ChatTransport> transport;
        if (opts.mode != gateway::Mode::replay) {
            transport = std::make_shared<gateway::HttpTransport>(gateway::HttpTransportConfig::from_env());
        }
        return std::make_unique<gateway::Gateway>(opts, transport);
    }

    agents::LlmAgentOptions agent_options() const {
        agents::LlmAgentOptions o;
        o.model = model.empty() ? gateway::model_from_env(o.model) : model;
        o.temperature = temperature;
        return o;
    }
};

int cmd_run(const std::string& setting_arg, std::optional<int> reps, std::uint64_t seed, const std::string& agents,
            const std::string& out, const std::string& persona_dir, int parallel, std::optional<int> days,
            const std::string& policy, const LlmFlags& llm, bool verbose) {
    std::vector<int> ids;
    if (setting_arg == "all") {
        ids = {1, 2, 3, 4, 5, 6};
    } else {
        ids = {std::stoi(setting_arg)};
    }
    std::unique_ptr<gateway::Gateway> gw;
    harness::ExperimentOptions opts;
    opts.out_dir = out;
    opts.parallelism = parallel;
    opts.verbose = verbose;
    opts.llm = llm.agent_options();
    if (!persona_dir.empty()) opts.persona_dir = persona_dir;

    int failed = 0;
    for (int id : ids) {
        auto setting = harness::table_setting(id);
        if (reps) setting.repetitions = *reps;
        if (days) setting.days = *days;
        setting.base_seed = seed;
        setting.agents = agents;
        setting.policy = policy == "stop" ? AllocationPolicy::stop_at_first_misfit : AllocationPolicy::skip_and_continue;
        if (harness::AgentPlan::parse(agents, canonical_roster().size()).uses_llm() && !gw) {
            gw = llm.make_gateway();
            opts.gateway = gw.get();
        }
        const auto result = harness::run_experiment(setting, opts);
        failed += result.failed;
        fmt::print("setting {}: {} games, {} failed -> {}\n", id, result.records.size(), result.failed,
                   result.records_file.string());
    }
    if (gw) {
        fmt::print("llm: {} network calls, {} cache hits\n", gw->network_calls(), gw->cache_hits());
    }
    return failed == 0 ? 0 : 3;
}

int cmd_replay(const std::string& file) {
    const auto records = read_jsonl_file(file);
    int bad = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        try {
            if (replay(records[i]) != records[i]) {
                fmt::print(stderr, "record {}: replay differs from the stored outcome\n", i + 1);
                ++bad;
            }
        } catch (const std::exception& e) {
            fmt::print(stderr, "record {}: {}\n", i + 1, e.what());
            ++bad;
        }
    }
    fmt::print("{} record(s) checked, {} mismatch(es)\n", records.size(), bad);
    return bad == 0 ? 0 : 1;
}

int cmd_analyze(const std::string& in, const std::string& out) {
    const auto r = analysis::analyze_directory(in, out);
    fmt::print("{} record(s) analyzed", r.records);
    if (r.excluded_failures > 0) fmt::print(", {} failed game(s) excluded", r.excluded_failures);
    fmt::print("\n");
    for (const auto& f : r.files) fmt::print("  {}\n", f.string());
    return 0;
}

int cmd_plot(const std::string& data, const std::string& out) {
    std::ifstream in(data);
    if (!in) throw std::runtime_error(fmt::format("cannot read {}", data));
    const auto files = analysis::render_plots(nlohmann::json::parse(in), out);
    for (const auto& f : files) fmt::print("  {}\n", f.string());
    return 0;
}

live::LiveServer* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

int cmd_serve(const std::string& host, int port, const std::string& static_dir, const std::string& records,
              const std::string& persona_dir, const LlmFlags& llm, bool with_llm) {
    live::SessionManager::Options mo;
    if (!records.empty()) mo.records_path = records;
    if (!persona_dir.empty()) mo.persona_dir = persona_dir;
    std::unique_ptr<gateway::Gateway> gw;
    if (with_llm) {
        gw = llm.make_gateway();
        mo.agent_context.gateway = gw.get();
        mo.agent_context.llm = llm.agent_options();
    }
    live::SessionManager sessions(mo);
    live::ServerOptions so;
    so.host = host;
    so.port = port;
    if (!static_dir.empty()) so.static_dir = static_dir;
    live::LiveServer server(sessions, so);
    const int bound = server.bind();
    sessions.start_ticker();
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    fmt::print("listening on http://{}:{}\n", host, bound);
    std::fflush(stdout);
    server.listen();
    sessions.stop_ticker();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Water allocation auction game: experiments, analysis and live play"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose);

    auto* run = app.add_subcommand("run", "run experiment settings");
    std::string setting = "all";
    std::optional<int> reps, days;
    std::uint64_t seed = 0;
    std::string agents = "scripted:desperation";
    std::string out;
    std::string persona_dir = "personas";
    std::string policy = "skip";
    int parallel = 0;
    LlmFlags llm;
    run->add_option("--setting", setting, "1-6 or all")
        ->check(CLI::IsMember({"1", "2", "3", "4", "5", "6", "all"}))
        ->capture_default_str();
    run->add_option("--reps", reps, "repetitions per setting (default 10)")->check(CLI::NonNegativeNumber);
    run->add_option("--seed", seed, "base seed; repetition r uses seed + r")->capture_default_str();
    run->add_option("--agents", agents, "llm | scripted:<strategy> | mixed:<seat>,<seat>,...")
        ->capture_default_str();
    run->add_option("--out", out, "output directory")->envname("WTOWN_OUT")->required();
    run->add_option("--persona-dir", persona_dir)->capture_default_str();
    run->add_option("--parallel", parallel, "concurrent games (0: auto)")->check(CLI::NonNegativeNumber);
    run->add_option("--days", days)->check(CLI::PositiveNumber);
    run->add_option("--policy", policy, "allocation walk: skip or stop")
        ->check(CLI::IsMember({"skip", "stop"}))
        ->capture_default_str();
    llm.add(*run);

    auto* rep = app.add_subcommand("replay", "re-simulate records and check they match");
    std::string replay_file;
    rep->add_option("file", replay_file, "JSON Lines file")->required()->check(CLI::ExistingFile);

    auto* an = app.add_subcommand("analyze", "summarize a results directory");
    std::string an_in, an_out;
    an->add_option("dir", an_in)->required()->check(CLI::ExistingDirectory);
    an->add_option("--out", an_out)->required();

    auto* pl = app.add_subcommand("plot", "render SVG charts from plot_data.json");
    std::string pl_data, pl_out;
    pl->add_option("--data", pl_data)->required()->check(CLI::ExistingFile);
    pl->add_option("--out", pl_out)->required();

    auto* serve = app.add_subcommand("serve", "host live games over HTTP");
    std::string host = "127.0.0.1", static_dir, records_path = "live-records.jsonl";
    std::string serve_personas = "personas";
    int port = 8080;
    bool serve_llm = false;
    LlmFlags serve_llm_flags;
    serve_llm_flags.mode = "live";
    serve->add_option("--host", host)->capture_default_str();
    serve->add_option("--port", port)->check(CLI::Range(0, 65535))->capture_default_str();
    serve->add_option("--static", static_dir, "directory served at /");
    serve->add_option("--records", records_path, "append finished games here")->capture_default_str();
    serve->add_option("--persona-dir", serve_personas)->capture_default_str();
    serve->add_flag("--enable-llm", serve_llm, "allow llm seats");
    serve_llm_flags.add(*serve);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            return cmd_run(setting, reps, seed, agents, out, persona_dir, parallel, days, policy, llm, verbose);
        }
        if (*rep) return cmd_replay(replay_file);
        if (*an) return cmd_analyze(an_in, an_out);
        if (*pl) return cmd_plot(pl_data, pl_out);
        if (*serve) {
            return cmd_serve(host, port, static_dir, records_path, serve_personas, serve_llm_flags, serve_llm);
        }
    } catch (const ConfigError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
