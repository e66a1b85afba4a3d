#include "wtown/live/server.hpp"

#include <httplib.h>

#include <fmt/format.h>

#include "wtown/engine/serialize.hpp"

namespace wtown::live {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
    send_json(res, status, {{"error", message}});
}

json event_json(const Event& e) {
    return {{"seq", e.seq}, {"type", e.type}, {"data", e.data}};
}

std::uint64_t since_param(const httplib::Request& req) {
    std::string v;
    if (req.has_param("since")) {
        v = req.get_param_value("since");
    } else if (req.has_header("Last-Event-ID")) {
        v = req.get_header_value("Last-Event-ID");
    }
    if (v.empty()) return 0;
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw SessionError(400, "since must be a non-negative integer");
    }
}

json parse_body(const httplib::Request& req) {
    auto j = json::parse(req.body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw SessionError(400, "request body must be a JSON object");
    return j;
}

}  // namespace

LiveServer::LiveServer(SessionManager& sessions, ServerOptions options)
    : sessions_(sessions), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
    routes();
}

LiveServer::~LiveServer() {
    stop();
}

void LiveServer::routes() {
    auto& svr = *server_;

    // Wraps a handler that needs a session; maps errors onto status codes.
    auto with_session = [this](auto fn) {
        return [this, fn](const httplib::Request& req, httplib::Response& res) {
            try {
                auto session = sessions_.get(req.matches[1]);
                if (!session) throw SessionError(404, "no such session");
                fn(*session, req, res);
            } catch (const SessionError& e) {
                send_error(res, e.status(), e.what());
            } catch (const ConfigError& e) {
                send_error(res, 400, e.what());
            } catch (const json::exception& e) {
                send_error(res, 400, e.what());
            }
        };
    };

    svr.Post("/api/sessions", [this](const httplib::Request& req, httplib::Response& res) {
        try {
            const auto create = parse_create_request(parse_body(req));
            auto session = sessions_.create(create, Clock::now());
            json seats = json::array();
            const auto& roster = create.config.roster;
            for (std::size_t i = 0; i < roster.size(); ++i) {
                json seat = {{"player", roster[i].id.value}, {"control", create.seats[i].to_string()}};
                if (auto it = session->tokens().find(roster[i].id); it != session->tokens().end()) {
                    seat["token"] = it->second;
                }
                seats.push_back(seat);
            }
            send_json(res, 201, {{"session_id", session->id()}, {"seed", std::to_string(create.config.seed)},
                                 {"seats", seats}});
        } catch (const SessionError& e) {
            send_error(res, e.status(), e.what());
        } catch (const ConfigError& e) {
            send_error(res, 400, e.what());
        }
    });

    svr.Post(R"(/api/sessions/([^/]+)/join)",
             with_session([](Session& s, const httplib::Request& req, httplib::Response& res) {
                 const auto body = parse_body(req);
                 send_json(res, 200, s.join(body.at("token").get<std::string>(), Clock::now()));
             }));

    svr.Get(R"(/api/sessions/([^/]+)/state)",
            with_session([](Session& s, const httplib::Request& req, httplib::Response& res) {
                std::optional<std::string> token;
                if (req.has_param("token")) token = req.get_param_value("token");
                send_json(res, 200, s.view(token, Clock::now()));
            }));

    svr.Post(R"(/api/sessions/([^/]+)/bids)",
             with_session([](Session& s, const httplib::Request& req, httplib::Response& res) {
                 const auto body = parse_body(req);
                 std::optional<Money> amount;
                 if (body.contains("amount") && !body.at("amount").is_null()) {
                     const auto& a = body.at("amount");
                     if (!a.is_number_integer()) throw SessionError(422, "amount must be a whole number of dollars");
                     amount = a.get<Money>();
                 }
                 send_json(res, 200, s.submit_bid(body.at("token").get<std::string>(), amount, Clock::now()));
             }));

    svr.Get(R"(/api/sessions/([^/]+)/poll)",
            with_session([](Session& s, const httplib::Request& req, httplib::Response& res) {
                json arr = json::array();
                for (const auto& e : s.events_since(since_param(req))) arr.push_back(event_json(e));
                send_json(res, 200, {{"events", arr}, {"finished", s.finished()}});
            }));

    svr.Get(R"(/api/sessions/([^/]+)/events)",
            with_session([this](Session& s, const httplib::Request& req, httplib::Response& res) {
                auto session = sessions_.get(s.id());
                auto cursor = std::make_shared<std::uint64_t>(since_param(req));
                res.set_header("Cache-Control", "no-cache");
                res.set_chunked_content_provider(
                    "text/event-stream", [this, session, cursor](std::size_t, httplib::DataSink& sink) {
                        if (stopping_) {
                            sink.done();
                            return true;
                        }
                        const auto events = session->wait_events(*cursor, std::chrono::milliseconds(500));
                        for (const auto& e : events) {
                            const auto chunk =
                                fmt::format("id: {}\nevent: {}\ndata: {}\n\n", e.seq, e.type, e.data.dump());
                            if (!sink.write(chunk.data(), chunk.size())) return false;
                            *cursor = e.seq;
                        }
                        if (events.empty() && session->finished()) sink.done();
                        return true;
                    });
            }));

    svr.Get(R"(/api/sessions/([^/]+)/record)",
            with_session([](Session& s, const httplib::Request&, httplib::Response& res) {
                if (!s.finished()) throw SessionError(409, "game is still running");
                json body;
                to_json(body, s.record());
                send_json(res, 200, body);
            }));

    if (options_.static_dir) {
        svr.set_mount_point("/", options_.static_dir->string());
    }
}

int LiveServer::bind() {
    int port = options_.port;
    if (port == 0) {
        port = server_->bind_to_any_port(options_.host);
    } else if (!server_->bind_to_port(options_.host, port)) {
        port = -1;
    }
    if (port < 0) throw std::runtime_error(fmt::format("cannot bind {}:{}", options_.host, options_.port));
    return port;
}

void LiveServer::listen() {
    server_->listen_after_bind();
}

int LiveServer::start() {
    const int port = bind();
    thread_ = std::thread([this] { listen(); });
    server_->wait_until_ready();
    return port;
}

void LiveServer::stop() {
    stopping_ = true;
    server_->stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace wtown::live
