#include "wtown/live/session.hpp"

#include <fstream>
#include <iostream>
#include <random>

#include <fmt/format.h>

#include "wtown/agents/persona.hpp"
#include "wtown/engine/serialize.hpp"

namespace wtown::live {

using nlohmann::json;
using namespace std::chrono;

std::string to_string(Phase p) {
    switch (p) {
        case Phase::lobby:
            return "lobby";
        case Phase::bidding:
            return "bidding";
        case Phase::announcing:
            return "announcing";
        case Phase::finished:
            return "finished";
    }
    return "?";
}

std::string random_token() {
    std::random_device rd;
    std::string out;
    for (int i = 0; i < 4; ++i) out += fmt::format("{:08x}", rd());
    return out;
}

Session::Session(std::string id,
                 GameConfig config,
                 std::vector<harness::SeatControl> seats,
                 SessionOptions options,
                 harness::AgentFactoryContext agent_context,
                 Clock::time_point /*now*/)
    : id_(std::move(id)), options_(options), controls_(std::move(seats)) {
    config.validate();
    if (controls_.size() != config.roster.size()) {
        throw ConfigError(fmt::format("{} seats for a roster of {}", controls_.size(), config.roster.size()));
    }
    agent_context.game_seed = config.seed;
    std::vector<agents::Agent*> raw;
    for (std::size_t i = 0; i < controls_.size(); ++i) {
        if (controls_[i].kind == harness::SeatControl::Kind::human) {
            auto h = std::make_unique<agents::HumanAgent>();
            humans_[i] = h.get();
            agents_.push_back(std::move(h));
            std::string token = random_token();
            tokens_[config.roster[i].id] = token;
            seat_by_token_[token] = i;
        } else {
            harness::AgentPlan plan;
            plan.seats = {controls_[i]};
            auto made = harness::make_agents(plan, agent_context);
            agents_.push_back(std::move(made.front()));
        }
        raw.push_back(agents_.back().get());
    }
    if (humans_.empty()) {
        options_.bidding_window = milliseconds(0);
        options_.announce_window = milliseconds(0);
    }
    joined_.assign(controls_.size(), false);
    harness::MatchOptions mo;
    mo.persona_enabled = options_.persona_enabled;
    mo.concurrent_decisions = true;
    match_ = std::make_unique<harness::Match>(std::move(config), std::move(raw), mo);
}

std::optional<std::size_t> Session::seat_for(const std::string& token) const {
    auto it = seat_by_token_.find(token);
    if (it == seat_by_token_.end()) return std::nullopt;
    return it->second;
}

std::size_t Session::humans_alive() const {
    std::size_t n = 0;
    for (const auto& [seat, agent] : humans_) {
        if (match_->state().players()[seat].alive) ++n;
    }
    return n;
}

void Session::emit(std::string type, json data) {
    Event e;
    e.seq = events_.size() + 1;
    e.type = std::move(type);
    e.data = std::move(data);
    events_.push_back(std::move(e));
    cv_.notify_all();
}

json Session::join(const std::string& token, Clock::time_point now) {
    std::unique_lock lock(mu_);
    auto seat = seat_for(token);
    if (!seat) throw SessionError(403, "unknown seat token");
    const auto& spec = match_->state().config().roster[*seat];
    if (!joined_[*seat]) {
        joined_[*seat] = true;
        emit("joined", {{"player", spec.id.value}});
    }
    json out = {{"session_id", id_}, {"player", spec}};
    lock.unlock();
    tick(now);
    return out;
}

json Session::submit_bid(const std::string& token, std::optional<Money> amount, Clock::time_point now) {
    std::lock_guard lock(mu_);
    auto seat = seat_for(token);
    if (!seat) throw SessionError(403, "unknown seat token");
    if (phase_ != Phase::bidding || now >= deadline_) {
        throw SessionError(409, fmt::format("bids are not open (phase {})", to_string(phase_)));
    }
    const auto& st = match_->state().players()[*seat];
    if (!st.alive) throw SessionError(409, "eliminated players cannot bid");
    if (amount && (*amount < 1 || *amount > st.balance)) {
        throw SessionError(422, fmt::format("bid must be between $1 and your balance ${}", st.balance));
    }
    humans_.at(*seat)->submit(amount);
    const int day = match_->state().current_day()->day;
    return {{"accepted", true}, {"day", day}, {"bid", amount ? json(*amount) : json(nullptr)}};
}

json Session::players_json() const {
    const auto& cfg = match_->state().config();
    json arr = json::array();
    for (std::size_t i = 0; i < cfg.roster.size(); ++i) {
        const auto& p = cfg.roster[i];
        const auto& st = match_->state().players()[i];
        arr.push_back({{"id", p.id.value},
                       {"name", p.name},
                       {"requirement", p.requirement},
                       {"salary", p.salary},
                       {"control", controls_[i].kind == harness::SeatControl::Kind::human ? "human"
                                                                                          : controls_[i].to_string()},
                       {"joined", controls_[i].kind != harness::SeatControl::Kind::human || joined_[i]},
                       {"hp", st.hp},
                       {"balance", st.balance},
                       {"no_water_days", st.no_water_days},
                       {"alive", st.alive}});
    }
    return arr;
}

json Session::view(const std::optional<std::string>& token, Clock::time_point now) const {
    std::lock_guard lock(mu_);
    std::optional<std::size_t> seat;
    if (token) {
        seat = seat_for(*token);
        if (!seat) throw SessionError(403, "unknown seat token");
    }
    const auto& state = match_->state();
    json out = {{"session_id", id_},
                {"phase", to_string(phase_)},
                {"days", state.config().days},
                {"hp_max", state.config().hp_max},
                {"day", nullptr},
                {"supply", nullptr},
                {"deadline_ms", nullptr},
                {"players", players_json()},
                {"event_seq", events_.size()}};
    if (auto d = state.current_day(); d && phase_ == Phase::bidding) {
        out["day"] = d->day;
        out["supply"] = d->supply;
        out["deadline_ms"] = std::max<std::int64_t>(0, duration_cast<milliseconds>(deadline_ - now).count());
    } else if (!state.rounds().empty()) {
        out["day"] = state.rounds().back().day;
        out["supply"] = state.rounds().back().supply;
    }
    json ann = json::array();
    for (const auto& [day, text] : announcements_) ann.push_back({{"day", day}, {"text", text}});
    out["announcements"] = ann;
    if (seat) {
        const auto& spec = state.config().roster[*seat];
        json you = {{"player", spec.id.value}, {"pending_bid", nullptr}, {"has_pending_bid", false}};
        if (auto p = humans_.at(*seat)->pending()) {
            you["has_pending_bid"] = true;
            you["pending_bid"] = p->bid ? json(*p->bid) : json(nullptr);
        }
        out["you"] = you;
    }
    return out;
}

std::vector<Event> Session::events_since(std::uint64_t seq) const {
    std::lock_guard lock(mu_);
    if (seq >= events_.size()) return {};
    return {events_.begin() + static_cast<std::ptrdiff_t>(seq), events_.end()};
}

std::vector<Event> Session::wait_events(std::uint64_t seq, milliseconds timeout) const {
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, timeout, [&] { return events_.size() > seq || phase_ == Phase::finished; });
    if (seq >= events_.size()) return {};
    return {events_.begin() + static_cast<std::ptrdiff_t>(seq), events_.end()};
}

void Session::start_day(Clock::time_point now) {
    const auto opening = match_->open_day();
    const auto window = humans_alive() > 0 ? options_.bidding_window : milliseconds(0);
    deadline_ = now + window;
    phase_ = Phase::bidding;
    emit("phase", {{"phase", "bidding"},
                   {"day", opening.day},
                   {"supply", opening.supply},
                   {"deadline_ms", window.count()}});
}

void Session::close_bidding(Clock::time_point now) {
    auto decisions = match_->collect_decisions();
    const auto& round = match_->settle(decisions);
    announcements_.emplace_back(round.day, match_->last_announcement());
    emit("announcement", {{"day", round.day}, {"text", match_->last_announcement()}, {"round", round}});
    if (match_->finished()) {
        phase_ = Phase::finished;
        json finals = json::object();
        for (const auto& [id, st] : match_->record().final_states) finals[id] = st;
        emit("finished", {{"final_states", finals}});
        if (on_finished_) on_finished_(record_locked());
        return;
    }
    phase_ = Phase::announcing;
    const auto window = humans_alive() > 0 ? options_.announce_window : milliseconds(0);
    deadline_ = now + window;
    emit("phase", {{"phase", "announcing"}, {"day", round.day}, {"deadline_ms", window.count()}});
}

void Session::tick(Clock::time_point now) {
    std::lock_guard lock(mu_);
    try {
        for (;;) {
            switch (phase_) {
                case Phase::lobby: {
                    bool all = true;
                    for (const auto& [seat, agent] : humans_) all = all && joined_[seat];
                    if (!all) return;
                    start_day(now);
                    break;
                }
                case Phase::bidding:
                    if (now < deadline_) return;
                    close_bidding(now);
                    break;
                case Phase::announcing:
                    if (now < deadline_) return;
                    start_day(now);
                    break;
                case Phase::finished:
                    return;
            }
        }
    } catch (const std::exception& e) {
        phase_ = Phase::finished;
        error_ = e.what();
        emit("error", {{"message", error_}});
    }
}

Phase Session::phase() const {
    std::lock_guard lock(mu_);
    return phase_;
}

bool Session::finished() const {
    return phase() == Phase::finished;
}

std::string Session::error() const {
    std::lock_guard lock(mu_);
    return error_;
}

GameRecord Session::record_locked() const {
    GameRecord r = match_->record();
    std::string agents = "mixed:";
    for (std::size_t i = 0; i < controls_.size(); ++i) {
        agents += (i ? "," : "") + controls_[i].to_string();
    }
    r.experiment = ExperimentLabel{0, 0, options_.persona_enabled, agents, "live"};
    return r;
}

GameRecord Session::record() const {
    std::lock_guard lock(mu_);
    return record_locked();
}

void Session::on_finished(std::function<void(const GameRecord&)> fn) {
    std::lock_guard lock(mu_);
    on_finished_ = std::move(fn);
}

CreateRequest parse_create_request(const json& body) {
    if (!body.is_object()) throw ConfigError("request body must be a JSON object");
    CreateRequest req;
    GameConfig& cfg = req.config;
    try {
        cfg.roster = body.contains("roster") ? body.at("roster").get<std::vector<PlayerSpec>>() : canonical_roster();
        if (body.contains("abundance")) {
            const auto b = supply_bounds(abundance_from_string(body.at("abundance").get<std::string>()));
            cfg.supply_low = b.low;
            cfg.supply_high = b.high;
        }
        cfg.supply_low = body.value("supply_low", cfg.supply_low);
        cfg.supply_high = body.value("supply_high", cfg.supply_high);
        cfg.days = body.value("days", cfg.days);
        if (body.contains("seed")) {
            const auto& s = body.at("seed");
            cfg.seed = s.is_string() ? std::stoull(s.get<std::string>()) : s.get<std::uint64_t>();
        } else {
            std::random_device rd;
            cfg.seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
        }
        if (body.contains("bidding_window_s")) {
            req.options.bidding_window = milliseconds(
                static_cast<std::int64_t>(body.at("bidding_window_s").get<double>() * 1000));
        }
        if (body.contains("announce_window_s")) {
            req.options.announce_window = milliseconds(
                static_cast<std::int64_t>(body.at("announce_window_s").get<double>() * 1000));
        }
        req.options.persona_enabled = body.value("persona", false);

        std::map<std::string, harness::SeatControl> by_player;
        for (const auto& s : body.at("seats")) {
            const auto player = s.at("player").get<std::string>();
            if (!by_player.emplace(player, harness::SeatControl::parse(s.at("control").get<std::string>())).second) {
                throw ConfigError(fmt::format("player '{}' has more than one seat", player));
            }
        }
        for (const auto& p : cfg.roster) {
            auto it = by_player.find(p.id.value);
            if (it == by_player.end()) throw ConfigError(fmt::format("no seat for player '{}'", p.id.value));
            req.seats.push_back(it->second);
            by_player.erase(it);
        }
        if (!by_player.empty()) {
            throw ConfigError(fmt::format("seat for unknown player '{}'", by_player.begin()->first));
        }
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("bad session request: {}", e.what()));
    } catch (const std::logic_error& e) {
        throw ConfigError(fmt::format("bad session request: {}", e.what()));
    }
    if (req.options.bidding_window.count() <= 0) throw ConfigError("bidding_window_s must be positive");
    if (req.options.announce_window.count() < 0) throw ConfigError("announce_window_s must not be negative");
    cfg.validate();
    return req;
}

SessionManager::SessionManager(Options options) : options_(std::move(options)) {}

SessionManager::~SessionManager() {
    stop_ticker();
}

std::shared_ptr<Session> SessionManager::create(const CreateRequest& request, Clock::time_point now) {
    GameConfig cfg = request.config;
    if (request.options.persona_enabled && options_.persona_dir) {
        agents::attach_personas(cfg.roster, *options_.persona_dir);
    }
    auto session = std::make_shared<Session>(random_token().substr(0, 16), std::move(cfg), request.seats,
                                             request.options, options_.agent_context, now);
    session->on_finished([this](const GameRecord& r) { persist(r); });
    {
        std::lock_guard lock(mu_);
        sessions_[session->id()] = session;
    }
    session->tick(now);
    return session;
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

void SessionManager::tick_all(Clock::time_point now) {
    std::vector<std::shared_ptr<Session>> all;
    {
        std::lock_guard lock(mu_);
        for (const auto& [id, s] : sessions_) all.push_back(s);
    }
    for (const auto& s : all) s->tick(now);
}

void SessionManager::start_ticker(milliseconds period) {
    stop_ticker();
    ticker_ = std::jthread([this, period](std::stop_token stop) {
        while (!stop.stop_requested()) {
            tick_all(Clock::now());
            std::this_thread::sleep_for(period);
        }
    });
}

void SessionManager::stop_ticker() {
    if (ticker_.joinable()) {
        ticker_.request_stop();
        ticker_.join();
    }
}

void SessionManager::persist(const GameRecord& record) {
    if (!options_.records_path) return;
    std::lock_guard lock(file_mu_);
    std::ofstream out(*options_.records_path, std::ios::app | std::ios::binary);
    if (!out) {
        std::cerr << "cannot append to " << options_.records_path->string() << "\n";
        return;
    }
    out << to_json_line(record) << "\n";
}

}  // namespace wtown::live
