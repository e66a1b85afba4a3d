#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wtown::gateway {

enum class Role { system, user, assistant };

std::string to_string(Role r);
Role role_from_string(const std::string& s);

struct ChatMessage {
    Role role;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

// Where a request came from. Not part of the cache key; used to name the
// missing entry when replay fails.
struct RequestTag {
    std::string experiment;
    std::string game;
    int round = 0;
    std::string player;
    int attempt = 0;

    std::string to_string() const;
};

struct ChatRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature = 0.7;
    int max_tokens = 512;
    RequestTag tag;

    // Throws std::invalid_argument when the first message is not a system
    // message, temperature is negative or max_tokens is not positive.
    void validate() const;
};

// Hex SHA-256 over the canonical JSON of (model, messages, temperature,
// max_tokens). Canonical form: sorted object keys, no whitespace,
// temperature rendered with exactly four decimals.
std::string cache_key(const ChatRequest& request);

std::string sha256_hex(std::string_view data);

}  // namespace wtown::gateway
