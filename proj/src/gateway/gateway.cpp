#include "wtown/gateway/gateway.hpp"

#include <algorithm>
#include <thread>

#include <fmt/format.h>

namespace wtown::gateway {

std::string to_string(Mode m) {
    switch (m) {
        case Mode::live:
            return "live";
        case Mode::record:
            return "record";
        case Mode::replay:
            return "replay";
    }
    return "replay";
}

Mode mode_from_string(const std::string& s) {
    if (s == "live") return Mode::live;
    if (s == "record") return Mode::record;
    if (s == "replay") return Mode::replay;
    throw std::invalid_argument(fmt::format("unknown gateway mode '{}'", s));
}

ReplayMissError::ReplayMissError(const std::string& key, const RequestTag& tag)
    : std::runtime_error(fmt::format("replay cache has no entry {} for {}", key, tag.to_string())),
      key_(key) {}

Gateway::Gateway(GatewayOptions options, std::shared_ptr<ChatTransport> transport, Sleeper sleeper)
    : options_(std::move(options)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)),
      in_flight_(std::clamp(options_.max_in_flight, 1, 1024)) {
    if (!sleeper_) {
        sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }
    if (options_.mode != Mode::live) {
        if (!options_.cache_dir) {
            throw std::invalid_argument(fmt::format("{} mode needs a cache directory", to_string(options_.mode)));
        }
        cache_.emplace(*options_.cache_dir);
    }
    if (options_.mode != Mode::replay && !transport_) {
        throw std::invalid_argument(fmt::format("{} mode needs a transport", to_string(options_.mode)));
    }
    if (options_.max_attempts < 1) {
        throw std::invalid_argument("max_attempts must be >= 1");
    }
}

std::vector<std::chrono::milliseconds> Gateway::backoff_schedule(int failures) const {
    std::vector<std::chrono::milliseconds> out;
    auto delay = options_.base_delay;
    for (int i = 0; i < failures; ++i) {
        out.push_back(delay);
        delay *= options_.backoff_factor;
    }
    return out;
}

std::string Gateway::complete(const ChatRequest& request) {
    request.validate();
    const std::string key = cache_key(request);

    if (cache_) {
        if (auto hit = cache_->get(key)) {
            ++cache_hits_;
            return hit->response_text;
        }
        if (options_.mode == Mode::replay) {
            throw ReplayMissError(key, request.tag);
        }
    }

    double latency_ms = 0.0;
    std::string text = call_with_backoff(request, latency_ms);

    if (options_.mode == Mode::record) {
        CacheEntry e;
        e.key = key;
        e.response_text = text;
        e.latency_ms = latency_ms;
        e.timestamp = utc_timestamp();
        e.model = request.model;
        e.tag = request.tag.to_string();
        cache_->put(e);
    }
    return text;
}

std::string Gateway::call_with_backoff(const ChatRequest& request, double& latency_ms) {
    auto delay = options_.base_delay;
    std::string last_error;
    for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
        TransportResponse resp;
        {
            in_flight_.acquire();
            struct Release {
                std::counting_semaphore<1024>& s;
                ~Release() { s.release(); }
            } release{in_flight_};
            ++network_calls_;
            const auto start = std::chrono::steady_clock::now();
            resp = transport_->send(request);
            latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        }
        if (resp.status == TransportResponse::Status::ok) {
            return resp.text;
        }
        last_error = resp.status == TransportResponse::Status::rate_limited
                         ? fmt::format("rate limited (HTTP {})", resp.http_status)
                         : fmt::format("HTTP {}: {}", resp.http_status, resp.error);
        if (attempt < options_.max_attempts) {
            sleeper_(delay);
            delay *= options_.backoff_factor;
        }
    }
    throw GatewayFailure(fmt::format("gave up after {} attempts for {}: {}", options_.max_attempts,
                                     request.tag.to_string(), last_error));
}

}  // namespace wtown::gateway
