#pragma once

#include <chrono>
#include <string>

#include "wtown/gateway/gateway.hpp"

namespace wtown::gateway {

// Connection settings for an OpenAI-compatible chat-completion endpoint.
// With a non-empty api_version the Azure layout is used:
//   POST {endpoint}/openai/deployments/{model}/chat/completions?api-version=...
//   header api-key: {api_key}
// otherwise:
//   POST {endpoint}/v1/chat/completions, header Authorization: Bearer {api_key}
struct HttpTransportConfig {
    std::string endpoint;  // scheme://host[:port][/base]
    std::string api_key;
    std::string api_version;
    std::chrono::seconds timeout{120};

    // Reads WTOWN_LLM_ENDPOINT, WTOWN_LLM_API_KEY and WTOWN_LLM_API_VERSION.
    static HttpTransportConfig from_env();
};

class HttpTransport final : public ChatTransport {
public:
    explicit HttpTransport(HttpTransportConfig config);

    TransportResponse send(const ChatRequest& request) override;

    // Builds the JSON body sent for a request.
    static std::string request_body(const ChatRequest& request, bool include_model);
    // Pulls choices[0].message.content out of a provider response.
    static std::string extract_content(const std::string& body);

private:
    HttpTransportConfig config_;
    std::string host_;   // scheme://host[:port]
    std::string base_;   // path prefix, no trailing slash
};

// Model name from WTOWN_LLM_MODEL, or fallback when unset.
std::string model_from_env(const std::string& fallback);

}  // namespace wtown::gateway
