#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <vector>

#include "wtown/gateway/cache.hpp"
#include "wtown/gateway/chat.hpp"

namespace wtown::gateway {

struct TransportResponse {
    enum class Status { ok, rate_limited, error };

    Status status = Status::ok;
    std::string text;
    int http_status = 200;
    std::string error;
};

// One chat-completion round trip to a provider. Implementations must be
// safe to call from several threads at once.
class ChatTransport {
public:
    virtual ~ChatTransport() = default;
    virtual TransportResponse send(const ChatRequest& request) = 0;
};

enum class Mode { live, record, replay };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

using Sleeper = std::function<void(std::chrono::milliseconds)>;

struct GatewayOptions {
    Mode mode = Mode::replay;
    std::optional<std::filesystem::path> cache_dir;
    int max_attempts = 5;
    std::chrono::milliseconds base_delay{1000};
    int backoff_factor = 2;
    int max_in_flight = 5;
};

// Replay mode found no cache entry for a request.
class ReplayMissError : public std::runtime_error {
public:
    ReplayMissError(const std::string& key, const RequestTag& tag);
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

// The provider kept failing (rate limits or errors) through every attempt.
class GatewayFailure : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Gateway {
public:
    // transport may be null in replay mode.
    Gateway(GatewayOptions options, std::shared_ptr<ChatTransport> transport, Sleeper sleeper = {});

    std::string complete(const ChatRequest& request);

    Mode mode() const { return options_.mode; }
    std::size_t network_calls() const { return network_calls_.load(); }
    std::size_t cache_hits() const { return cache_hits_.load(); }
    int max_in_flight() const { return options_.max_in_flight; }

    // Delays between attempts for a given number of consecutive failures:
    // base, base*factor, base*factor^2, ...
    std::vector<std::chrono::milliseconds> backoff_schedule(int failures) const;

private:
    std::string call_with_backoff(const ChatRequest& request, double& latency_ms);

    GatewayOptions options_;
    std::shared_ptr<ChatTransport> transport_;
    Sleeper sleeper_;
    std::optional<ResponseCache> cache_;
    std::counting_semaphore<1024> in_flight_;
    std::atomic<std::size_t> network_calls_{0};
    std::atomic<std::size_t> cache_hits_{0};
};

}  // namespace wtown::gateway
