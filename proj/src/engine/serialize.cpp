#include "wtown/engine/serialize.hpp"

#include <fstream>
#include <istream>

#include <fmt/format.h>

namespace wtown {

using nlohmann::json;

void to_json(json& j, const PlayerId& id) { j = id.value; }
void from_json(const json& j, PlayerId& id) { id.value = j.get<std::string>(); }

void to_json(json& j, const PersonaText& p) {
    j = json{{"profession", p.profession}, {"personality", p.personality}, {"background", p.background}};
}
void from_json(const json& j, PersonaText& p) {
    j.at("profession").get_to(p.profession);
    j.at("personality").get_to(p.personality);
    j.at("background").get_to(p.background);
}

void to_json(json& j, const PlayerSpec& p) {
    j = json{{"id", p.id}, {"name", p.name}, {"requirement", p.requirement}, {"salary", p.salary}};
    j["persona"] = p.persona ? json(*p.persona) : json(nullptr);
}
void from_json(const json& j, PlayerSpec& p) {
    j.at("id").get_to(p.id);
    j.at("name").get_to(p.name);
    j.at("requirement").get_to(p.requirement);
    j.at("salary").get_to(p.salary);
    if (j.contains("persona") && !j.at("persona").is_null()) {
        p.persona = j.at("persona").get<PersonaText>();
    } else {
        p.persona.reset();
    }
}

void to_json(json& j, const PlayerState& p) {
    j = json{{"hp", p.hp}, {"balance", p.balance}, {"no_water_days", p.no_water_days}, {"alive", p.alive}};
}
void from_json(const json& j, PlayerState& p) {
    j.at("hp").get_to(p.hp);
    j.at("balance").get_to(p.balance);
    j.at("no_water_days").get_to(p.no_water_days);
    j.at("alive").get_to(p.alive);
}

namespace {

std::string policy_name(AllocationPolicy p) {
    return p == AllocationPolicy::skip_and_continue ? "skip_and_continue" : "stop_at_first_misfit";
}

AllocationPolicy policy_from(const std::string& s) {
    if (s == "skip_and_continue") return AllocationPolicy::skip_and_continue;
    if (s == "stop_at_first_misfit") return AllocationPolicy::stop_at_first_misfit;
    throw SchemaError(fmt::format("unknown allocation policy '{}'", s));
}

}  // namespace

void to_json(json& j, const GameConfig& c) {
    j = json{{"days", c.days},
             {"hp_start", c.hp_start},
             {"hp_max", c.hp_max},
             {"water_gain", c.water_gain},
             {"supply_low", c.supply_low},
             {"supply_high", c.supply_high},
             {"roster", c.roster},
             // decimal string: 64-bit seeds do not survive a trip through doubles
             {"seed", std::to_string(c.seed)},
             {"rng", "splitmix64"},
             {"salary_timing", "credit_before_auction"},
             {"allocation_policy", policy_name(c.policy)}};
}
void from_json(const json& j, GameConfig& c) {
    j.at("days").get_to(c.days);
    j.at("hp_start").get_to(c.hp_start);
    j.at("hp_max").get_to(c.hp_max);
    j.at("water_gain").get_to(c.water_gain);
    j.at("supply_low").get_to(c.supply_low);
    j.at("supply_high").get_to(c.supply_high);
    j.at("roster").get_to(c.roster);
    const auto& seed = j.at("seed");
    c.seed = seed.is_string() ? std::stoull(seed.get<std::string>()) : seed.get<std::uint64_t>();
    if (j.value("rng", "splitmix64") != "splitmix64") {
        throw SchemaError("unsupported rng; only splitmix64 is defined");
    }
    if (j.value("salary_timing", "credit_before_auction") != "credit_before_auction") {
        throw SchemaError("unsupported salary_timing");
    }
    c.policy = policy_from(j.value("allocation_policy", "skip_and_continue"));
}

void to_json(json& j, const Bid& b) {
    j = json{{"player", b.player}, {"reason", b.reason}};
    j["amount"] = b.amount ? json(*b.amount) : json(nullptr);
}
void from_json(const json& j, Bid& b) {
    j.at("player").get_to(b.player);
    j.at("reason").get_to(b.reason);
    const auto& a = j.at("amount");
    b.amount = a.is_null() ? std::nullopt : std::optional<Money>(a.get<Money>());
}

void to_json(json& j, const Winner& w) {
    j = json{{"player", w.player}, {"payment", w.payment}, {"units", w.units}};
}
void from_json(const json& j, Winner& w) {
    j.at("player").get_to(w.player);
    j.at("payment").get_to(w.payment);
    j.at("units").get_to(w.units);
}

void to_json(json& j, const RoundRecord& r) {
    j = json{{"day", r.day},
             {"supply", r.supply},
             {"bids", r.bids},
             {"winners", r.winners},
             {"hp_after", r.hp_after},
             {"nwd_after", r.nwd_after},
             {"balance_after", r.balance_after},
             {"eliminated", r.eliminated}};
    j["min_successful_bid"] = r.min_successful_bid ? json(*r.min_successful_bid) : json(nullptr);
}
void from_json(const json& j, RoundRecord& r) {
    j.at("day").get_to(r.day);
    j.at("supply").get_to(r.supply);
    j.at("bids").get_to(r.bids);
    j.at("winners").get_to(r.winners);
    j.at("hp_after").get_to(r.hp_after);
    j.at("nwd_after").get_to(r.nwd_after);
    j.at("balance_after").get_to(r.balance_after);
    j.at("eliminated").get_to(r.eliminated);
    const auto& m = j.at("min_successful_bid");
    r.min_successful_bid = m.is_null() ? std::nullopt : std::optional<Money>(m.get<Money>());
}

void to_json(json& j, const ExperimentLabel& e) {
    j = json{{"setting_id", e.setting_id},
             {"repetition", e.repetition},
             {"persona", e.persona},
             {"agents", e.agents},
             {"source", e.source}};
}
void from_json(const json& j, ExperimentLabel& e) {
    j.at("setting_id").get_to(e.setting_id);
    j.at("repetition").get_to(e.repetition);
    j.at("persona").get_to(e.persona);
    j.at("agents").get_to(e.agents);
    j.at("source").get_to(e.source);
}

void to_json(json& j, const GameRecord& g) {
    j = json{{"schema_version", g.schema_version},
             {"config", g.config},
             {"rounds", g.rounds},
             {"final_states", g.final_states}};
    j["experiment"] = g.experiment ? json(*g.experiment) : json(nullptr);
}
void from_json(const json& j, GameRecord& g) {
    j.at("schema_version").get_to(g.schema_version);
    if (g.schema_version != kSchemaVersion) {
        throw SchemaError(fmt::format("unsupported schema_version {} (this build reads {})",
                                      g.schema_version, kSchemaVersion));
    }
    j.at("config").get_to(g.config);
    j.at("rounds").get_to(g.rounds);
    j.at("final_states").get_to(g.final_states);
    if (j.contains("experiment") && !j.at("experiment").is_null()) {
        g.experiment = j.at("experiment").get<ExperimentLabel>();
    } else {
        g.experiment.reset();
    }
}

std::string to_json_line(const GameRecord& record) {
    return json(record).dump(-1, ' ', false, json::error_handler_t::replace);
}

GameRecord parse_game_record(const std::string& line) {
    try {
        return json::parse(line).get<GameRecord>();
    } catch (const SchemaError&) {
        throw;
    } catch (const json::exception& e) {
        throw SchemaError(fmt::format("malformed game record: {}", e.what()));
    }
}

std::vector<GameRecord> read_jsonl(std::istream& in) {
    std::vector<GameRecord> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            out.push_back(parse_game_record(line));
        } catch (const SchemaError& e) {
            throw SchemaError(fmt::format("line {}: {}", lineno, e.what()));
        }
    }
    return out;
}

std::vector<GameRecord> read_jsonl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open '{}'", path));
    }
    return read_jsonl(in);
}

}  // namespace wtown
