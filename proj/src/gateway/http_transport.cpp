#include "wtown/gateway/http_transport.hpp"

#include <cstdlib>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

namespace wtown::gateway {

namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

}  // namespace

HttpTransportConfig HttpTransportConfig::from_env() {
    HttpTransportConfig c;
    c.endpoint = env_or("WTOWN_LLM_ENDPOINT", "");
    c.api_key = env_or("WTOWN_LLM_API_KEY", "");
    c.api_version = env_or("WTOWN_LLM_API_VERSION", "");
    if (c.endpoint.empty()) {
        throw std::invalid_argument("WTOWN_LLM_ENDPOINT is not set");
    }
    return c;
}

std::string model_from_env(const std::string& fallback) {
    return env_or("WTOWN_LLM_MODEL", fallback);
}

HttpTransport::HttpTransport(HttpTransportConfig config) : config_(std::move(config)) {
    const auto scheme_end = config_.endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw std::invalid_argument(fmt::format("endpoint '{}' has no scheme", config_.endpoint));
    }
    const auto path_start = config_.endpoint.find('/', scheme_end + 3);
    host_ = config_.endpoint.substr(0, path_start);
    base_ = path_start == std::string::npos ? "" : config_.endpoint.substr(path_start);
    while (!base_.empty() && base_.back() == '/') {
        base_.pop_back();
    }
}

std::string HttpTransport::request_body(const ChatRequest& request, bool include_model) {
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : request.messages) {
        messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
    }
    nlohmann::json body = {{"messages", messages},
                           {"temperature", request.temperature},
                           {"max_tokens", request.max_tokens}};
    if (include_model) {
        body["model"] = request.model;
    }
    return body.dump();
}

std::string HttpTransport::extract_content(const std::string& body) {
    auto j = nlohmann::json::parse(body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
}

TransportResponse HttpTransport::send(const ChatRequest& request) {
    const bool azure = !config_.api_version.empty();
    std::string path;
    httplib::Headers headers;
    if (azure) {
        path = fmt::format("{}/openai/deployments/{}/chat/completions?api-version={}", base_, request.model,
                           config_.api_version);
        headers.emplace("api-key", config_.api_key);
    } else {
        path = base_ + "/v1/chat/completions";
        if (!config_.api_key.empty()) {
            headers.emplace("Authorization", "Bearer " + config_.api_key);
        }
    }

    httplib::Client client(host_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);

    TransportResponse out;
    auto res = client.Post(path, headers, request_body(request, !azure), "application/json");
    if (!res) {
        out.status = TransportResponse::Status::error;
        out.http_status = 0;
        out.error = httplib::to_string(res.error());
        return out;
    }
    out.http_status = res->status;
    if (res->status == 429) {
        out.status = TransportResponse::Status::rate_limited;
        return out;
    }
    if (res->status != 200) {
        out.status = TransportResponse::Status::error;
        out.error = res->body.substr(0, 500);
        return out;
    }
    try {
        out.text = extract_content(res->body);
    } catch (const std::exception& e) {
        out.status = TransportResponse::Status::error;
        out.error = fmt::format("unexpected response shape: {}", e.what());
    }
    return out;
}

}  // namespace wtown::gateway
