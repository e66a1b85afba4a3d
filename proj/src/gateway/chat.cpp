#include "wtown/gateway/chat.hpp"

#include <array>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

namespace wtown::gateway {

std::string to_string(Role r) {
    switch (r) {
        case Role::system:
            return "system";
        case Role::user:
            return "user";
        case Role::assistant:
            return "assistant";
    }
    return "user";
}

Role role_from_string(const std::string& s) {
    if (s == "system") return Role::system;
    if (s == "user") return Role::user;
    if (s == "assistant") return Role::assistant;
    throw std::invalid_argument(fmt::format("unknown chat role '{}'", s));
}

std::string RequestTag::to_string() const {
    return fmt::format("experiment={} game={} round={} player={} attempt={}", experiment, game, round,
                       player, attempt);
}

void ChatRequest::validate() const {
    if (messages.empty() || messages.front().role != Role::system) {
        throw std::invalid_argument("chat request must start with a system message");
    }
    if (!(temperature >= 0.0)) {
        throw std::invalid_argument("temperature must be >= 0");
    }
    if (max_tokens < 1) {
        throw std::invalid_argument("max_tokens must be positive");
    }
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += fmt::format("{:02x}", digest[i]);
    }
    return out;
}

std::string cache_key(const ChatRequest& request) {
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : request.messages) {
        messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
    }
    nlohmann::json canonical = {{"model", request.model},
                                {"messages", messages},
                                {"temperature", fmt::format("{:.4f}", request.temperature)},
                                {"max_tokens", request.max_tokens}};
    return sha256_hex(canonical.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace));
}

}  // namespace wtown::gateway
