#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "wtown/live/session.hpp"

namespace httplib {
class Server;
}

namespace wtown::live {

struct ServerOptions {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    std::optional<std::filesystem::path> static_dir;
};

// JSON over HTTP:
//   POST /api/sessions                     create; returns seat tokens
//   POST /api/sessions/{id}/join           {"token"}
//   GET  /api/sessions/{id}/state?token=   public state (+ own seat)
//   POST /api/sessions/{id}/bids           {"token", "amount": n | null}
//   GET  /api/sessions/{id}/events?since=  server-sent events
//   GET  /api/sessions/{id}/poll?since=    same events as a JSON array
//   GET  /api/sessions/{id}/record         final game record
class LiveServer {
public:
    LiveServer(SessionManager& sessions, ServerOptions options);
    ~LiveServer();

    // Binds the socket and returns the bound port.
    int bind();
    // Serves until stop(). Call bind() first.
    void listen();
    // bind() + listen() on a background thread; returns the bound port.
    int start();
    void stop();

private:
    void routes();

    SessionManager& sessions_;
    ServerOptions options_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    std::atomic<bool> stopping_{false};
};

}  // namespace wtown::live
